//! Lexical knowledge loaded from TSV data files: hypernym graphs for
//! nouns and verbs, verb morphology, noun number, pronoun features,
//! plus built-in number words. The loaded [`Lexicon`] is immutable and
//! safe to share across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Which hypernym graph to consult.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypernymKind {
    Noun,
    Verb,
}

/// Inflected forms of one verb lemma. Cells may list alternates
/// separated by `/` (e.g. the past of "be" is "was/were"); the first
/// alternate is the primary rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbForms {
    pub past: Vec<String>,
    pub past_participle: Vec<String>,
    pub gerund: Vec<String>,
    pub third_singular: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Number {
    Singular,
    Plural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gender {
    Masculine,
    Feminine,
    Neuter,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PronounCase {
    Subject,
    Object,
    Possessive,
}

/// Agreement features of one pronoun surface form. Whether a given
/// occurrence is possessive is decided by its part-of-speech tag in the
/// parse tree; the `case` here is the form's most distinctive reading,
/// used only when no tag is available.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PronounEntry {
    pub number: Number,
    pub gender: Gender,
    pub case: PronounCase,
}

/// Result of normalizing a verb form to present tense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentForm {
    /// Base lemma ("run" for "ran"), or the input unchanged when unknown.
    pub base: String,
    /// Third-person-singular present ("runs"), or the input when unknown.
    pub third_singular: String,
    /// False when the input was not found in the morphology table.
    pub known: bool,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("cycle in {kind} hypernyms: {}", cycle.join(" -> "))]
    Cycle { kind: &'static str, cycle: Vec<String> },
    #[error("{path}:{line}: form {form:?} already maps to lemma {existing:?}, cannot also map to {new:?}")]
    AmbiguousForm {
        path: PathBuf,
        line: usize,
        form: String,
        existing: String,
        new: String,
    },
}

/// The full lexical database.
#[derive(Debug, Clone)]
pub struct Lexicon {
    noun_hypernyms: BTreeMap<String, BTreeSet<String>>,
    verb_hypernyms: BTreeMap<String, BTreeSet<String>>,
    verb_forms: BTreeMap<String, VerbForms>,
    noun_plurals: BTreeMap<String, String>,
    pronouns: BTreeMap<String, PronounEntry>,
    number_words: BTreeMap<String, String>,
    /// Reverse morphology: inflected form -> base lemma, per slot.
    past_to_base: BTreeMap<String, String>,
    gerund_to_base: BTreeMap<String, String>,
    third_to_base: BTreeMap<String, String>,
    nouns: BTreeSet<String>,
    verbs: BTreeSet<String>,
    adjectives: BTreeSet<String>,
    adverbs: BTreeSet<String>,
    cardinal_values: BTreeMap<String, u32>,
}

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>, LexiconError> {
    let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').to_string()))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect())
}

fn parse_edge_file(
    path: &Path,
) -> Result<BTreeMap<String, BTreeSet<String>>, LexiconError> {
    let mut graph: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (line, text) in read_lines(path)? {
        let mut cols = text.split('\t');
        let (Some(child), Some(parent), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(LexiconError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected child<TAB>parent, got {text:?}"),
            });
        };
        graph
            .entry(child.to_string())
            .or_default()
            .insert(parent.to_string());
        graph.entry(parent.to_string()).or_default();
    }
    Ok(graph)
}

/// Depth-first cycle search; returns one cycle as a lemma path
/// (first == last) if the graph has any.
fn find_cycle(graph: &BTreeMap<String, BTreeSet<String>>) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color: BTreeMap<&str, Color> =
        graph.keys().map(|k| (k.as_str(), Color::White)).collect();

    fn visit<'a>(
        node: &'a str,
        graph: &'a BTreeMap<String, BTreeSet<String>>,
        color: &mut BTreeMap<&'a str, Color>,
        path: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        color.insert(node, Color::Gray);
        path.push(node);
        if let Some(parents) = graph.get(node) {
            for parent in parents {
                match color.get(parent.as_str()).copied().unwrap_or(Color::White) {
                    Color::Gray => {
                        let start = path.iter().position(|n| *n == parent).unwrap_or(0);
                        let mut cycle: Vec<String> =
                            path[start..].iter().map(|s| s.to_string()).collect();
                        cycle.push(parent.clone());
                        return Some(cycle);
                    }
                    Color::White => {
                        if let Some(cycle) = visit(parent, graph, color, path) {
                            return Some(cycle);
                        }
                    }
                    Color::Black => {}
                }
            }
        }
        path.pop();
        color.insert(node, Color::Black);
        None
    }

    let keys: Vec<&str> = graph.keys().map(|k| k.as_str()).collect();
    for k in keys {
        if color[k] == Color::White {
            if let Some(cycle) = visit(k, graph, &mut color, &mut Vec::new()) {
                return Some(cycle);
            }
        }
    }
    None
}

fn split_alternates(cell: &str) -> Vec<String> {
    cell.split('/')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_word_set(path: &Path) -> Result<BTreeSet<String>, LexiconError> {
    if !path.exists() {
        return Ok(BTreeSet::new());
    }
    Ok(read_lines(path)?
        .into_iter()
        .map(|(_, l)| l.trim().to_string())
        .collect())
}

impl Lexicon {
    /// Load all tables from a directory containing
    /// `noun_hypernyms.tsv`, `verb_hypernyms.tsv`, `verb_forms.tsv`,
    /// `noun_plurals.tsv` and `pronouns.tsv` (plus optional
    /// `adjectives.tsv` and `adverbs.tsv` word lists).
    pub fn load(dir: &Path) -> Result<Lexicon, LexiconError> {
        let noun_hypernyms = parse_edge_file(&dir.join("noun_hypernyms.tsv"))?;
        if let Some(cycle) = find_cycle(&noun_hypernyms) {
            return Err(LexiconError::Cycle {
                kind: "noun",
                cycle,
            });
        }
        let verb_hypernyms = parse_edge_file(&dir.join("verb_hypernyms.tsv"))?;
        if let Some(cycle) = find_cycle(&verb_hypernyms) {
            return Err(LexiconError::Cycle {
                kind: "verb",
                cycle,
            });
        }

        let forms_path = dir.join("verb_forms.tsv");
        let mut verb_forms: BTreeMap<String, VerbForms> = BTreeMap::new();
        let mut past_to_base: BTreeMap<String, String> = BTreeMap::new();
        let mut gerund_to_base: BTreeMap<String, String> = BTreeMap::new();
        let mut third_to_base: BTreeMap<String, String> = BTreeMap::new();
        for (line, text) in read_lines(&forms_path)? {
            let cols: Vec<&str> = text.split('\t').collect();
            let [base, past, past_participle, gerund, third_singular] = cols.as_slice() else {
                return Err(LexiconError::Parse {
                    path: forms_path.clone(),
                    line,
                    message: format!(
                        "expected base<TAB>past<TAB>past_participle<TAB>gerund<TAB>third_singular, got {text:?}"
                    ),
                });
            };
            let base = base.trim().to_string();
            let record = VerbForms {
                past: split_alternates(past),
                past_participle: split_alternates(past_participle),
                gerund: split_alternates(gerund),
                third_singular: split_alternates(third_singular),
            };
            let register = |form: &str,
                            map: &mut BTreeMap<String, String>|
             -> Result<(), LexiconError> {
                if form == base {
                    return Ok(()); // e.g. "put" is its own past tense
                }
                if let Some(existing) = map.get(form) {
                    if existing != &base {
                        return Err(LexiconError::AmbiguousForm {
                            path: forms_path.clone(),
                            line,
                            form: form.to_string(),
                            existing: existing.clone(),
                            new: base.clone(),
                        });
                    }
                } else {
                    map.insert(form.to_string(), base.clone());
                }
                Ok(())
            };
            for f in record.past.iter().chain(&record.past_participle) {
                register(f, &mut past_to_base)?;
            }
            for f in &record.gerund {
                register(f, &mut gerund_to_base)?;
            }
            for f in &record.third_singular {
                register(f, &mut third_to_base)?;
            }
            verb_forms.insert(base, record);
        }

        let plurals_path = dir.join("noun_plurals.tsv");
        let mut noun_plurals = BTreeMap::new();
        for (line, text) in read_lines(&plurals_path)? {
            let mut cols = text.split('\t');
            let (Some(plural), Some(singular), None) = (cols.next(), cols.next(), cols.next())
            else {
                return Err(LexiconError::Parse {
                    path: plurals_path.clone(),
                    line,
                    message: format!("expected plural<TAB>singular, got {text:?}"),
                });
            };
            noun_plurals.insert(plural.to_string(), singular.to_string());
        }

        let pronouns_path = dir.join("pronouns.tsv");
        let mut pronouns = BTreeMap::new();
        for (line, text) in read_lines(&pronouns_path)? {
            let cols: Vec<&str> = text.split('\t').collect();
            let [pronoun, number, gender, case] = cols.as_slice() else {
                return Err(LexiconError::Parse {
                    path: pronouns_path.clone(),
                    line,
                    message: format!(
                        "expected pronoun<TAB>number<TAB>gender<TAB>case, got {text:?}"
                    ),
                });
            };
            let bad = |field: &str, value: &str| LexiconError::Parse {
                path: pronouns_path.clone(),
                line,
                message: format!("bad {field} value {value:?}"),
            };
            let number = match number.trim() {
                "sg" => Number::Singular,
                "pl" => Number::Plural,
                other => return Err(bad("number", other)),
            };
            let gender = match gender.trim() {
                "m" => Gender::Masculine,
                "f" => Gender::Feminine,
                "n" => Gender::Neuter,
                "any" => Gender::Any,
                other => return Err(bad("gender", other)),
            };
            let case = match case.trim() {
                "subj" => PronounCase::Subject,
                "obj" => PronounCase::Object,
                "poss" => PronounCase::Possessive,
                other => return Err(bad("case", other)),
            };
            pronouns.insert(
                pronoun.trim().to_string(),
                PronounEntry {
                    number,
                    gender,
                    case,
                },
            );
        }

        let adjectives = parse_word_set(&dir.join("adjectives.tsv"))?;
        let adverbs = parse_word_set(&dir.join("adverbs.tsv"))?;

        let mut number_words = BTreeMap::new();
        let cardinals = [
            "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
        ];
        let ordinals = [
            "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth",
            "ninth", "tenth",
        ];
        let mut cardinal_values = BTreeMap::new();
        for (i, word) in cardinals.iter().enumerate() {
            number_words.insert(format!("{}", i + 1), word.to_string());
            cardinal_values.insert(word.to_string(), (i + 1) as u32);
        }
        for (i, word) in ordinals.iter().enumerate() {
            let n = i + 1;
            let suffix = match n {
                1 => "st",
                2 => "nd",
                3 => "rd",
                _ => "th",
            };
            number_words.insert(format!("{n}{suffix}"), word.to_string());
        }

        let mut nouns: BTreeSet<String> = noun_hypernyms.keys().cloned().collect();
        nouns.extend(noun_plurals.values().cloned());
        let mut verbs: BTreeSet<String> = verb_hypernyms.keys().cloned().collect();
        verbs.extend(verb_forms.keys().cloned());

        Ok(Lexicon {
            noun_hypernyms,
            verb_hypernyms,
            verb_forms,
            noun_plurals,
            pronouns,
            number_words,
            past_to_base,
            gerund_to_base,
            third_to_base,
            nouns,
            verbs,
            adjectives,
            adverbs,
            cardinal_values,
        })
    }

    fn graph(&self, kind: HypernymKind) -> &BTreeMap<String, BTreeSet<String>> {
        match kind {
            HypernymKind::Noun => &self.noun_hypernyms,
            HypernymKind::Verb => &self.verb_hypernyms,
        }
    }

    /// Is `parent` a (strict) hypernym of `child`: does a non-empty
    /// directed path child -> ... -> parent exist? Unknown lemmas and
    /// `child == parent` yield false.
    pub fn is_hypernym(&self, kind: HypernymKind, child: &str, parent: &str) -> bool {
        if child == parent {
            return false;
        }
        let graph = self.graph(kind);
        let mut stack: Vec<&str> = vec![child];
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        while let Some(node) = stack.pop() {
            let Some(parents) = graph.get(node) else {
                continue;
            };
            for p in parents {
                if p == parent {
                    return true;
                }
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        false
    }

    /// Normalize a past or past-participle verb form to present tense.
    /// Out-of-vocabulary forms pass through with `known: false`.
    pub fn to_present(&self, verb_form: &str) -> PresentForm {
        match self.past_to_base.get(verb_form) {
            Some(base) => PresentForm {
                base: base.clone(),
                third_singular: self.third_singular(base).unwrap_or_else(|| base.clone()),
                known: true,
            },
            None => {
                // A base form used as its own past or past participle
                // ("put", "run") is still known.
                if self
                    .verb_forms
                    .get(verb_form)
                    .is_some_and(|f| {
                        f.past.iter().chain(&f.past_participle).any(|p| p == verb_form)
                    })
                {
                    return PresentForm {
                        base: verb_form.to_string(),
                        third_singular: self
                            .third_singular(verb_form)
                            .unwrap_or_else(|| verb_form.to_string()),
                        known: true,
                    };
                }
                PresentForm {
                    base: verb_form.to_string(),
                    third_singular: verb_form.to_string(),
                    known: false,
                }
            }
        }
    }

    /// Singularize a noun: table lookup first, then a trailing-s
    /// heuristic, else unchanged.
    pub fn to_singular(&self, noun: &str) -> String {
        if let Some(singular) = self.noun_plurals.get(noun) {
            return singular.clone();
        }
        for suffix in ["ches", "shes", "sses", "xes", "zes"] {
            if let Some(stem) = noun.strip_suffix(suffix) {
                return format!("{stem}{}", &suffix[..suffix.len() - 2]);
            }
        }
        if noun.len() > 2 && !noun.ends_with("ss") {
            if let Some(stem) = noun.strip_suffix('s') {
                return stem.to_string();
            }
        }
        noun.to_string()
    }

    /// Base lemma for a gerund form ("running" -> "run").
    pub fn gerund_base(&self, form: &str) -> Option<&str> {
        self.gerund_to_base.get(form).map(|s| s.as_str())
    }

    /// Base lemma for a third-person-singular form ("runs" -> "run").
    pub fn third_singular_base(&self, form: &str) -> Option<&str> {
        self.third_to_base.get(form).map(|s| s.as_str())
    }

    /// Primary third-person-singular present of a base lemma.
    pub fn third_singular(&self, base: &str) -> Option<String> {
        self.verb_forms
            .get(base)
            .and_then(|f| f.third_singular.first().cloned())
    }

    /// Present-tense plural rendering of a base lemma (the base itself,
    /// except for "be" whose plural present is "are").
    pub fn present_plural(&self, base: &str) -> String {
        if base == "be" {
            "are".to_string()
        } else {
            base.to_string()
        }
    }

    pub fn verb_forms(&self, base: &str) -> Option<&VerbForms> {
        self.verb_forms.get(base)
    }

    pub fn pronoun(&self, word: &str) -> Option<&PronounEntry> {
        self.pronouns.get(word)
    }

    /// Word for a digit string: "2" -> "two", "3rd" -> "third".
    pub fn number_word(&self, digits: &str) -> Option<&str> {
        self.number_words.get(digits).map(|s| s.as_str())
    }

    /// Numeric value of a cardinal number word: "two" -> 2.
    pub fn cardinal_value(&self, word: &str) -> Option<u32> {
        self.cardinal_values.get(word).copied()
    }

    /// Is the word a known singular noun lemma?
    pub fn is_noun(&self, word: &str) -> bool {
        self.nouns.contains(word)
    }

    /// Is the word a plural form of a known noun?
    pub fn is_plural_noun(&self, word: &str) -> bool {
        if self.noun_plurals.contains_key(word) {
            return true;
        }
        let singular = self.to_singular(word);
        singular != word && self.nouns.contains(&singular)
    }

    /// Is the word a known verb lemma (base form)?
    pub fn is_verb(&self, word: &str) -> bool {
        self.verbs.contains(word)
    }

    pub fn is_adjective(&self, word: &str) -> bool {
        self.adjectives.contains(word) || self.cardinal_values.contains_key(word)
    }

    pub fn is_adverb(&self, word: &str) -> bool {
        self.adverbs.contains(word)
    }

    /// All noun lemmas known to the lexicon (graph nodes plus
    /// singularization targets).
    pub fn noun_lemmas(&self) -> impl Iterator<Item = &str> {
        self.nouns.iter().map(|s| s.as_str())
    }

    pub fn verb_lemmas(&self) -> impl Iterator<Item = &str> {
        self.verbs.iter().map(|s| s.as_str())
    }

    /// Direct hypernym edges, for property tests.
    pub fn edges(&self, kind: HypernymKind) -> Vec<(String, String)> {
        self.graph(kind)
            .iter()
            .flat_map(|(child, parents)| {
                parents.iter().map(move |p| (child.clone(), p.clone()))
            })
            .collect()
    }

    /// All nodes of one hypernym graph.
    pub fn graph_nodes(&self, kind: HypernymKind) -> Vec<String> {
        self.graph(kind).keys().cloned().collect()
    }
}
