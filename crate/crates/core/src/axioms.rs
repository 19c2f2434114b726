//! Background-axiom generation: taxonomy implications (set A) and
//! closed-world exclusions (set N) over the content words of a
//! sentence pair.
//!
//! For every ordered pair of distinct nouns occurring in the pair, a
//! hypernym edge in the lexicon yields an implication in A; noun pairs
//! unrelated in either direction yield a biconditional exclusion in N
//! (once per unordered pair). Verbs get the same treatment over both
//! the transitive (`predicate2`) and intransitive (`predicate1`) event
//! shapes. Axioms are generated only from words that actually occur in
//! the pair, never from the whole lexicon.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cnl::semantics::noun_atom;
use crate::fol::{Atom, Formula, Term};
use crate::lexicon::{HypernymKind, Lexicon};

/// Which semantic rule produced an axiom: S1 covers nouns, S2 verbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SemRule {
    S1,
    S2,
}

/// One generated axiom with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomEntry {
    pub formula: Formula,
    pub rule: SemRule,
    /// False for taxonomy implications (set A), true for closed-world
    /// exclusions (set N).
    pub closed_world: bool,
    pub words: (String, String),
    /// Stable TPTP formula name, e.g. `s1_n_woman_person` or
    /// `cwa_v_hug_run_p1`.
    pub name: String,
}

/// The axiom sets for one sentence pair.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AxiomSets {
    pub a: Vec<AxiomEntry>,
    pub n: Vec<AxiomEntry>,
}

impl AxiomSets {
    pub fn a_formulas(&self) -> Vec<Formula> {
        self.a.iter().map(|e| e.formula.clone()).collect()
    }

    pub fn n_formulas(&self) -> Vec<Formula> {
        self.n.iter().map(|e| e.formula.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty() && self.n.is_empty()
    }
}

/// Toggles for axiom generation.
#[derive(Debug, Clone, Copy)]
pub struct AxiomConfig {
    /// Generate noun axioms (rule S1).
    pub s1: bool,
    /// Generate verb axioms (rule S2).
    pub s2: bool,
    /// Weaken closed-world exclusions from biconditionals to one-way
    /// implications (`n1 -> ~n2`).
    pub weak_cwa: bool,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig {
            s1: true,
            s2: true,
            weak_cwa: false,
        }
    }
}

/// Collect the content words of a premise/hypothesis pair from their
/// logical forms: nouns from `object` (and the unary `human`) atoms,
/// verbs from `predicate1`/`predicate2` atoms. The copula `be` is not
/// a content verb. Nouns not recognized by the lexicon are
/// singularized defensively.
pub fn collect_content_words(
    premise: &Formula,
    hypothesis: &Formula,
    lex: &Lexicon,
) -> (BTreeSet<String>, BTreeSet<String>) {
    fn constant_name(term: &Term) -> Option<&str> {
        match term {
            Term::Constant(name) => Some(name),
            _ => None,
        }
    }

    fn scan(formula: &Formula, nouns: &mut BTreeSet<String>, verbs: &mut BTreeSet<String>) {
        match formula {
            Formula::Atom(atom) => visit_atom(atom, nouns, verbs),
            Formula::Not(inner) => scan(inner, nouns, verbs),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                scan(a, nouns, verbs);
                scan(b, nouns, verbs);
            }
            Formula::Forall(_, inner) | Formula::Exists(_, inner) => scan(inner, nouns, verbs),
        }
    }

    fn visit_atom(atom: &Atom, nouns: &mut BTreeSet<String>, verbs: &mut BTreeSet<String>) {
        match (atom.predicate.as_str(), atom.args.len()) {
            ("object", 2) => {
                if let Some(name) = constant_name(&atom.args[1]) {
                    nouns.insert(name.to_string());
                }
            }
            ("human", 1) => {
                nouns.insert("human".to_string());
            }
            ("predicate1", 3) | ("predicate2", 4) => {
                if let Some(name) = constant_name(&atom.args[1]) {
                    if name != "be" {
                        verbs.insert(name.to_string());
                    }
                }
            }
            _ => {}
        }
    }

    let mut nouns = BTreeSet::new();
    let mut verbs = BTreeSet::new();
    scan(premise, &mut nouns, &mut verbs);
    scan(hypothesis, &mut nouns, &mut verbs);
    let nouns = nouns
        .into_iter()
        .map(|n| {
            if lex.is_noun(&n) {
                n
            } else {
                lex.to_singular(&n)
            }
        })
        .collect();
    (nouns, verbs)
}

fn tptp_word(word: &str) -> String {
    word.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// `forall X. shape(n1, X) -> shape(n2, X)` over the noun shape
/// (`object(X, n)`, or `human(X)` for the lemma "human").
fn noun_implication(n1: &str, n2: &str) -> Formula {
    let x = Term::var("X");
    Formula::forall(
        "X",
        Formula::implies(noun_atom(n1, &x), noun_atom(n2, &x)),
    )
}

fn noun_exclusion(n1: &str, n2: &str, weak: bool) -> Formula {
    let x = Term::var("X");
    let left = noun_atom(n1, &x);
    let right = Formula::not(noun_atom(n2, &x));
    let body = if weak {
        Formula::implies(left, right)
    } else {
        Formula::iff(left, right)
    };
    Formula::forall("X", body)
}

fn pred2(verb: &str) -> Formula {
    Formula::atom(
        "predicate2",
        vec![
            Term::var("A"),
            Term::constant(verb),
            Term::var("B"),
            Term::var("C"),
        ],
    )
}

fn pred1(verb: &str) -> Formula {
    Formula::atom(
        "predicate1",
        vec![Term::var("A"), Term::constant(verb), Term::var("B")],
    )
}

fn close_abc(body: Formula, with_c: bool) -> Formula {
    let inner = if with_c {
        Formula::forall("C", body)
    } else {
        body
    };
    Formula::forall("A", Formula::forall("B", inner))
}

/// Taxonomy and exclusion axioms over a noun set.
pub fn noun_axioms(
    nouns: &BTreeSet<String>,
    lex: &Lexicon,
    weak_cwa: bool,
) -> (Vec<AxiomEntry>, Vec<AxiomEntry>) {
    let mut a = Vec::new();
    let mut n = Vec::new();
    let list: Vec<&String> = nouns.iter().collect();
    for (i, n1) in list.iter().enumerate() {
        for (j, n2) in list.iter().enumerate() {
            if i == j {
                continue;
            }
            let forward = lex.is_hypernym(HypernymKind::Noun, n1, n2);
            if forward {
                a.push(AxiomEntry {
                    formula: noun_implication(n1, n2),
                    rule: SemRule::S1,
                    closed_world: false,
                    words: ((*n1).clone(), (*n2).clone()),
                    name: format!("s1_n_{}_{}", tptp_word(n1), tptp_word(n2)),
                });
            }
            // Unordered pairs once: only from the lexicographically
            // smaller side.
            if i < j && !forward && !lex.is_hypernym(HypernymKind::Noun, n2, n1) {
                n.push(AxiomEntry {
                    formula: noun_exclusion(n1, n2, weak_cwa),
                    rule: SemRule::S1,
                    closed_world: true,
                    words: ((*n1).clone(), (*n2).clone()),
                    name: format!("cwa_n_{}_{}", tptp_word(n1), tptp_word(n2)),
                });
            }
        }
    }
    (a, n)
}

/// Taxonomy and exclusion axioms over a verb set, in both transitive
/// and intransitive event shapes.
pub fn verb_axioms(
    verbs: &BTreeSet<String>,
    lex: &Lexicon,
    weak_cwa: bool,
) -> (Vec<AxiomEntry>, Vec<AxiomEntry>) {
    fn entries(
        v1: &str,
        v2: &str,
        closed_world: bool,
        weak: bool,
    ) -> impl Iterator<Item = AxiomEntry> {
        let make = move |shape: fn(&str) -> Formula, with_c: bool, suffix: &str| {
            let left = shape(v1);
            let right = shape(v2);
            let body = if closed_world {
                let negated = Formula::not(right);
                if weak {
                    Formula::implies(left, negated)
                } else {
                    Formula::iff(left, negated)
                }
            } else {
                Formula::implies(left, right)
            };
            let prefix = if closed_world { "cwa_v" } else { "s2_v" };
            AxiomEntry {
                formula: close_abc(body, with_c),
                rule: SemRule::S2,
                closed_world,
                words: (v1.to_string(), v2.to_string()),
                name: format!(
                    "{prefix}_{}_{}_{suffix}",
                    tptp_word(v1),
                    tptp_word(v2)
                ),
            }
        };
        [make(pred2, true, "p2"), make(pred1, false, "p1")].into_iter()
    }

    let mut a = Vec::new();
    let mut n = Vec::new();
    let list: Vec<&String> = verbs.iter().collect();
    for (i, v1) in list.iter().enumerate() {
        for (j, v2) in list.iter().enumerate() {
            if i == j {
                continue;
            }
            let forward = lex.is_hypernym(HypernymKind::Verb, v1, v2);
            if forward {
                a.extend(entries(v1, v2, false, weak_cwa));
            }
            if i < j && !forward && !lex.is_hypernym(HypernymKind::Verb, v2, v1) {
                n.extend(entries(v1, v2, true, weak_cwa));
            }
        }
    }
    (a, n)
}

/// Generate the axiom sets for a pair's content words.
pub fn generate(
    nouns: &BTreeSet<String>,
    verbs: &BTreeSet<String>,
    lex: &Lexicon,
    config: &AxiomConfig,
) -> AxiomSets {
    let mut sets = AxiomSets::default();
    if config.s1 {
        let (a, n) = noun_axioms(nouns, lex, config.weak_cwa);
        sets.a.extend(a);
        sets.n.extend(n);
    }
    if config.s2 {
        let (a, n) = verb_axioms(verbs, lex, config.weak_cwa);
        sets.a.extend(a);
        sets.n.extend(n);
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnl::{parse_fragment, to_fol, tokenize_ace};
    use crate::fol::clausify::clausify;
    use crate::fol::ClauseOrigin;
    use std::path::Path;

    fn lex() -> Lexicon {
        Lexicon::load(Path::new(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../data/lexicon"
        )))
        .expect("bundled lexicon loads")
    }

    fn formula(lex: &Lexicon, text: &str) -> Formula {
        let tokens = tokenize_ace(text).expect("tokenizes");
        let parse = parse_fragment(&tokens, lex).expect("parses");
        to_fol(&parse).formula
    }

    fn set(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn collects_nouns_and_verbs_from_a_pair() {
        let lex = lex();
        let p = formula(&lex, "a woman hugs a boy .");
        let h = formula(&lex, "a person hugs a boy .");
        let (nouns, verbs) = collect_content_words(&p, &h, &lex);
        assert_eq!(nouns, set(&["boy", "person", "woman"]));
        assert_eq!(verbs, set(&["hug"]));
    }

    #[test]
    fn identical_sentences_collect_like_one() {
        let lex = lex();
        let p = formula(&lex, "a dog runs .");
        let (nouns, verbs) = collect_content_words(&p, &p, &lex);
        assert_eq!(nouns, set(&["dog"]));
        assert_eq!(verbs, set(&["run"]));
    }

    #[test]
    fn copula_is_not_a_content_verb() {
        let lex = lex();
        let p = formula(&lex, "there is a dog .");
        let h = formula(&lex, "a dog is in a field .");
        let (nouns, verbs) = collect_content_words(&p, &h, &lex);
        assert_eq!(nouns, set(&["dog", "field"]));
        assert!(verbs.is_empty(), "{verbs:?}");
    }

    #[test]
    fn nobody_sentences_contribute_the_human_noun() {
        let lex = lex();
        let p = formula(&lex, "nobody works .");
        let h = formula(&lex, "a man works .");
        let (nouns, verbs) = collect_content_words(&p, &h, &lex);
        assert_eq!(nouns, set(&["human", "man"]));
        assert_eq!(verbs, set(&["work"]));
    }

    #[test]
    fn hypernym_nouns_yield_one_implication_and_no_exclusion() {
        let lex = lex();
        let (a, n) = noun_axioms(&set(&["person", "woman"]), &lex, false);
        assert_eq!(a.len(), 1);
        assert!(n.is_empty());
        let expected = {
            let x = Term::var("X");
            Formula::forall(
                "X",
                Formula::implies(noun_atom("woman", &x), noun_atom("person", &x)),
            )
        };
        assert!(a[0].formula.alpha_eq(&expected), "{}", a[0].formula);
        assert_eq!(a[0].name, "s1_n_woman_person");
        assert_eq!(a[0].rule, SemRule::S1);
        assert!(!a[0].closed_world);
    }

    #[test]
    fn unrelated_nouns_yield_one_biconditional_exclusion() {
        let lex = lex();
        let (a, n) = noun_axioms(&set(&["cat", "dog"]), &lex, false);
        assert!(a.is_empty());
        assert_eq!(n.len(), 1);
        let expected = {
            let x = Term::var("X");
            Formula::forall(
                "X",
                Formula::iff(
                    noun_atom("cat", &x),
                    Formula::not(noun_atom("dog", &x)),
                ),
            )
        };
        assert!(n[0].formula.alpha_eq(&expected), "{}", n[0].formula);
        assert_eq!(n[0].name, "cwa_n_cat_dog");
        assert!(n[0].closed_world);
    }

    #[test]
    fn weak_cwa_downgrades_exclusions_to_implications() {
        let lex = lex();
        let (_, n) = noun_axioms(&set(&["cat", "dog"]), &lex, true);
        let expected = {
            let x = Term::var("X");
            Formula::forall(
                "X",
                Formula::implies(
                    noun_atom("cat", &x),
                    Formula::not(noun_atom("dog", &x)),
                ),
            )
        };
        assert!(n[0].formula.alpha_eq(&expected), "{}", n[0].formula);
    }

    #[test]
    fn singleton_and_empty_sets_generate_nothing() {
        let lex = lex();
        let (a, n) = noun_axioms(&set(&["dog"]), &lex, false);
        assert!(a.is_empty() && n.is_empty());
        let (a, n) = verb_axioms(&BTreeSet::new(), &lex, false);
        assert!(a.is_empty() && n.is_empty());
    }

    #[test]
    fn human_noun_uses_its_unary_shape() {
        let lex = lex();
        let (a, _) = noun_axioms(&set(&["human", "man"]), &lex, false);
        assert_eq!(a.len(), 1, "man -> human only");
        let expected = {
            let x = Term::var("X");
            Formula::forall(
                "X",
                Formula::implies(noun_atom("man", &x), noun_atom("human", &x)),
            )
        };
        assert!(a[0].formula.alpha_eq(&expected), "{}", a[0].formula);
        assert_eq!(a[0].name, "s1_n_man_human");
    }

    #[test]
    fn hypernym_verbs_yield_both_event_shapes() {
        let lex = lex();
        let (a, n) = verb_axioms(&set(&["run", "sprint"]), &lex, false);
        assert!(n.is_empty());
        assert_eq!(a.len(), 2);
        assert_eq!(a[0].name, "s2_v_sprint_run_p2");
        assert_eq!(a[1].name, "s2_v_sprint_run_p1");
        let expected_p1 = Formula::forall(
            "A",
            Formula::forall(
                "B",
                Formula::implies(pred1("sprint"), pred1("run")),
            ),
        );
        assert!(a[1].formula.alpha_eq(&expected_p1), "{}", a[1].formula);
        let expected_p2 = Formula::forall(
            "A",
            Formula::forall(
                "B",
                Formula::forall("C", Formula::implies(pred2("sprint"), pred2("run"))),
            ),
        );
        assert!(a[0].formula.alpha_eq(&expected_p2), "{}", a[0].formula);
    }

    #[test]
    fn unrelated_verbs_yield_exclusions_in_both_shapes() {
        let lex = lex();
        let (a, n) = verb_axioms(&set(&["hug", "run"]), &lex, false);
        assert!(a.is_empty());
        assert_eq!(n.len(), 2);
        assert_eq!(n[0].name, "cwa_v_hug_run_p2");
        assert_eq!(n[1].name, "cwa_v_hug_run_p1");
        let expected_p1 = Formula::forall(
            "A",
            Formula::forall(
                "B",
                Formula::iff(pred1("hug"), Formula::not(pred1("run"))),
            ),
        );
        assert!(n[1].formula.alpha_eq(&expected_p1), "{}", n[1].formula);
    }

    #[test]
    fn generated_formulas_are_closed_and_clausify() {
        let lex = lex();
        let nouns = set(&["boy", "dog", "human", "man", "person", "woman"]);
        let verbs = set(&["hug", "run", "sprint", "walk"]);
        let sets = generate(&nouns, &verbs, &lex, &AxiomConfig::default());
        assert!(!sets.is_empty());
        for entry in sets.a.iter().chain(&sets.n) {
            assert!(entry.formula.is_closed(), "{}", entry.formula);
            clausify(&entry.formula, ClauseOrigin::AxiomA)
                .unwrap_or_else(|e| panic!("{} failed to clausify: {e}", entry.name));
        }
    }

    #[test]
    fn every_noun_pair_lands_in_exactly_one_set() {
        let lex = lex();
        let nouns = set(&["animal", "cat", "dog", "person"]);
        let (a, n) = noun_axioms(&nouns, &lex, false);
        let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
        for entry in a.iter().chain(&n) {
            let (x, y) = entry.words.clone();
            let key = if x < y { (x, y) } else { (y, x) };
            seen.insert(key);
        }
        // Every unordered pair of the four nouns accounted for.
        assert_eq!(seen.len(), 6);
        // And no pair appears in both A and N.
        for entry in &n {
            let (x, y) = &entry.words;
            assert!(
                !a.iter().any(|e| {
                    let (p, q) = &e.words;
                    (p == x && q == y) || (p == y && q == x)
                }),
                "pair {x}/{y} in both sets"
            );
        }
    }

    #[test]
    fn generation_is_deterministic_and_toggleable() {
        let lex = lex();
        let nouns = set(&["cat", "dog"]);
        let verbs = set(&["hug", "run"]);
        let config = AxiomConfig::default();
        let first = generate(&nouns, &verbs, &lex, &config);
        let second = generate(&nouns, &verbs, &lex, &config);
        assert_eq!(first, second);

        let no_s1 = generate(
            &nouns,
            &verbs,
            &lex,
            &AxiomConfig {
                s1: false,
                ..config
            },
        );
        assert!(no_s1.a.iter().chain(&no_s1.n).all(|e| e.rule == SemRule::S2));
        let no_s2 = generate(
            &nouns,
            &verbs,
            &lex,
            &AxiomConfig {
                s2: false,
                ..config
            },
        );
        assert!(no_s2.a.iter().chain(&no_s2.n).all(|e| e.rule == SemRule::S1));
    }
}
