//! Coreference resolution and rewriting (R2).
//!
//! Pronouns are not part of the controlled fragment, so every pronoun
//! and proper-noun mention is replaced by a `p:`-marked name. Chains
//! are found either by a small rule-based resolver (nearest preceding
//! noun-phrase head agreeing in number and gender) or, when
//! configured, by an external HTTP service; service failures fall back
//! to the built-in resolver with a warning.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

use crate::corpus::ParseTree;
use crate::lexicon::{Gender, Lexicon, Number};

/// How a mention refers: a proper name, a pronoun, or a common-noun
/// phrase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MentionKind {
    Proper,
    Pronominal,
    Nominal,
}

/// One mention inside a coreference chain. `start..end` is a range of
/// leaf indices in the sentence's parse tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    pub start: usize,
    pub end: usize,
    pub kind: MentionKind,
    pub number: Number,
    /// True for possessive pronoun occurrences (PRP$), which render as
    /// `p:Name's` instead of `p:Name`.
    pub possessive: bool,
}

/// A coreference chain: the mentions plus the name they will all be
/// replaced with. `name` is `None` until a generated name is
/// allocated; chains containing a proper noun carry it from the start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorefChain {
    pub name: Option<String>,
    pub mentions: Vec<Mention>,
}

/// Allocator for generated chain names, shared across the two
/// sentences of a pair so that `DefaultName{k}` never repeats.
#[derive(Debug, Default)]
pub struct NameAllocator {
    next: usize,
}

impl NameAllocator {
    pub fn new() -> NameAllocator {
        NameAllocator::default()
    }

    pub fn next_name(&mut self) -> String {
        let n = self.next;
        self.next += 1;
        format!("DefaultName{n}")
    }
}

/// Configuration of the optional external coreference service.
#[derive(Debug, Clone)]
pub struct CorefEndpoint {
    pub url: String,
    pub timeout: Duration,
}

#[derive(Debug, Error)]
pub enum R2Error {
    #[error(
        "coreference chains contain overlapping replacement spans \
         ({0}..{1} and {2}..{3})"
    )]
    OverlappingSpans(usize, usize, usize, usize),
    #[error("coreference mention span {0}..{1} is outside the sentence ({2} tokens)")]
    SpanOutOfRange(usize, usize, usize),
}

struct LeafInfo {
    label: String,
    token: String,
    lower: String,
}

fn collect_leaves(tree: &ParseTree, out: &mut Vec<LeafInfo>) {
    if tree.is_leaf() {
        let token = tree.token.clone().unwrap_or_default();
        out.push(LeafInfo {
            label: tree.label.clone(),
            lower: token.to_lowercase(),
            token,
        });
        return;
    }
    for child in &tree.children {
        collect_leaves(child, out);
    }
}

/// Verbs whose expletive subject "it" never refers to anything.
const WEATHER_VERBS: [&str; 8] = [
    "rain", "snow", "hail", "drizzle", "pour", "thunder", "storm", "sleet",
];

/// Generic heads that make poor antecedents.
const HEAD_STOP_LIST: [&str; 12] = [
    "nobody",
    "somebody",
    "someone",
    "anybody",
    "anyone",
    "everybody",
    "everyone",
    "nothing",
    "something",
    "anything",
    "everything",
    "one",
];

/// Noun lemmas (and everything below them in the hypernym graph) that
/// fix grammatical gender for pronoun agreement.
const FEMININE_SEEDS: [&str; 16] = [
    "woman",
    "girl",
    "lady",
    "mother",
    "grandmother",
    "daughter",
    "sister",
    "aunt",
    "niece",
    "bride",
    "queen",
    "princess",
    "wife",
    "actress",
    "waitress",
    "nun",
];

const MASCULINE_SEEDS: [&str; 14] = [
    "man",
    "boy",
    "gentleman",
    "father",
    "grandfather",
    "son",
    "brother",
    "uncle",
    "nephew",
    "groom",
    "king",
    "prince",
    "husband",
    "monk",
];

fn under_any(lex: &Lexicon, noun: &str, seeds: &[&str]) -> bool {
    seeds.iter().any(|seed| {
        noun == *seed || lex.is_hypernym(crate::lexicon::HypernymKind::Noun, noun, seed)
    })
}

/// Grammatical gender of a noun lemma, inferred by hypernym descent.
fn noun_gender(lex: &Lexicon, lemma: &str) -> Gender {
    if under_any(lex, lemma, &FEMININE_SEEDS) {
        Gender::Feminine
    } else if under_any(lex, lemma, &MASCULINE_SEEDS) {
        Gender::Masculine
    } else {
        Gender::Any
    }
}

fn genders_compatible(a: Gender, b: Gender) -> bool {
    matches!((a, b), (Gender::Any, _) | (_, Gender::Any)) || a == b
}

/// An antecedent candidate: a proper-noun run or a base noun phrase.
struct Candidate {
    start: usize,
    end: usize,
    kind: MentionKind,
    number: Number,
    gender: Gender,
    /// Proper candidates carry their name (marker prefix stripped).
    name: Option<String>,
    /// Index into the chain list once this candidate has joined one.
    chain: Option<usize>,
}

/// Collect antecedent candidates: maximal runs of sibling NNP/NNPS
/// leaves, and NPs with a direct common-noun head.
fn collect_candidates(
    tree: &ParseTree,
    lex: &Lexicon,
    leaf_base: &mut usize,
    out: &mut Vec<Candidate>,
) {
    if tree.is_leaf() {
        *leaf_base += 1;
        return;
    }
    fn flush_run(
        run: &mut Option<(usize, usize, bool)>,
        children: &[ParseTree],
        child_offsets: &[usize],
        out: &mut Vec<Candidate>,
    ) {
        if let Some((s, e, plural)) = run.take() {
            // Name comes from the run's last token.
            let last_idx = child_offsets
                .iter()
                .position(|&o| o == e - 1)
                .expect("offset present");
            let token = children[last_idx].token.as_deref().unwrap_or("");
            let name = token.strip_prefix("p:").unwrap_or(token).to_string();
            out.push(Candidate {
                start: s,
                end: e,
                kind: MentionKind::Proper,
                number: if plural {
                    Number::Plural
                } else {
                    Number::Singular
                },
                gender: Gender::Any,
                name: Some(name),
                chain: None,
            });
        }
    }

    let start_base = *leaf_base;
    // Proper-noun runs among direct children.
    let mut offset = 0usize;
    let mut run: Option<(usize, usize, bool)> = None; // (start, end, plural)
    let mut child_offsets = Vec::with_capacity(tree.children.len());
    for child in &tree.children {
        child_offsets.push(start_base + offset);
        if child.is_leaf() {
            let idx = start_base + offset;
            if child.label == "NNP" || child.label == "NNPS" {
                let plural = child.label == "NNPS";
                run = match run {
                    Some((s, _, p)) => Some((s, idx + 1, p || plural)),
                    None => Some((idx, idx + 1, plural)),
                };
            } else {
                flush_run(&mut run, &tree.children, &child_offsets, out);
            }
            offset += 1;
        } else {
            flush_run(&mut run, &tree.children, &child_offsets, out);
            offset += child.leaves().len();
        }
    }
    flush_run(&mut run, &tree.children, &child_offsets, out);

    // Base noun phrase: an NP with a direct common-noun leaf child.
    if tree.label == "NP" {
        let head = tree
            .children
            .iter()
            .rev()
            .find(|c| c.is_leaf() && matches!(c.label.as_str(), "NN" | "NNS"));
        if let Some(head) = head {
            let surface = head.token.as_deref().unwrap_or("").to_lowercase();
            let surface = surface.strip_prefix("n:").unwrap_or(&surface).to_string();
            let lemma = if head.label == "NNS" {
                lex.to_singular(&surface)
            } else {
                surface.clone()
            };
            if !HEAD_STOP_LIST.contains(&lemma.as_str()) {
                let len = tree.leaves().len();
                out.push(Candidate {
                    start: start_base,
                    end: start_base + len,
                    kind: MentionKind::Nominal,
                    number: if head.label == "NNS" {
                        Number::Plural
                    } else {
                        Number::Singular
                    },
                    gender: noun_gender(lex, &lemma),
                    name: None,
                    chain: None,
                });
            }
        }
    }

    // Recurse.
    let mut base = start_base;
    for child in &tree.children {
        collect_candidates(child, lex, &mut base, out);
    }
    *leaf_base = base;
}

/// Is this "it" an expletive subject of a weather verb? Looks at the
/// next verb leaf after the pronoun.
fn is_weather_expletive(leaves: &[LeafInfo], index: usize, lex: &Lexicon) -> bool {
    for leaf in &leaves[index + 1..] {
        if leaf.label.starts_with("VB") {
            let base = {
                let present = lex.to_present(&leaf.lower);
                if present.known {
                    present.base
                } else if let Some(b) = lex.third_singular_base(&leaf.lower) {
                    b.to_string()
                } else if let Some(b) = lex.gerund_base(&leaf.lower) {
                    b.to_string()
                } else {
                    leaf.lower.clone()
                }
            };
            return WEATHER_VERBS.contains(&base.as_str());
        }
    }
    false
}

/// Rule-based coreference: proper names each anchor a chain; every
/// pronoun links to the nearest preceding candidate that agrees in
/// number and gender, or forms a singleton chain when none exists.
pub fn rule_based_chains(tree: &ParseTree, lex: &Lexicon) -> Vec<CorefChain> {
    let mut leaves = Vec::new();
    collect_leaves(tree, &mut leaves);

    let mut candidates = Vec::new();
    let mut base = 0usize;
    collect_candidates(tree, lex, &mut base, &mut candidates);

    let mut chains: Vec<CorefChain> = Vec::new();
    // Chain index by proper name, so repeated names share a chain.
    let mut by_name: BTreeMap<String, usize> = BTreeMap::new();

    // Proper candidates anchor chains eagerly, in textual order.
    let mut proper_order: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].kind == MentionKind::Proper)
        .collect();
    proper_order.sort_by_key(|&i| (candidates[i].start, candidates[i].end));
    for i in proper_order {
        let name = candidates[i].name.clone().expect("proper has name");
        let chain_idx = *by_name.entry(name.clone()).or_insert_with(|| {
            chains.push(CorefChain {
                name: Some(name.clone()),
                mentions: Vec::new(),
            });
            chains.len() - 1
        });
        candidates[i].chain = Some(chain_idx);
        chains[chain_idx].mentions.push(Mention {
            start: candidates[i].start,
            end: candidates[i].end,
            kind: MentionKind::Proper,
            number: candidates[i].number,
            possessive: false,
        });
    }

    // Pronouns, left to right.
    for (i, leaf) in leaves.iter().enumerate() {
        if !matches!(leaf.label.as_str(), "PRP" | "PRP$") {
            continue;
        }
        let word = leaf.lower.as_str();
        if word == "there" {
            continue;
        }
        let Some(entry) = lex.pronoun(word) else {
            continue;
        };
        if (word == "it" || word == "its") && is_weather_expletive(&leaves, i, lex) {
            continue;
        }
        let mention = Mention {
            start: i,
            end: i + 1,
            kind: MentionKind::Pronominal,
            number: entry.number,
            possessive: leaf.label == "PRP$",
        };
        // Nearest preceding agreeing candidate: latest end, then
        // latest start (innermost).
        let antecedent = candidates
            .iter_mut()
            .filter(|c| c.end <= i)
            .filter(|c| c.number == entry.number)
            .filter(|c| genders_compatible(entry.gender, c.gender))
            .max_by_key(|c| (c.end, c.start));
        match antecedent {
            Some(ante) => {
                let chain_idx = match ante.chain {
                    Some(idx) => idx,
                    None => {
                        chains.push(CorefChain {
                            name: None,
                            mentions: vec![Mention {
                                start: ante.start,
                                end: ante.end,
                                kind: ante.kind,
                                number: ante.number,
                                possessive: false,
                            }],
                        });
                        let idx = chains.len() - 1;
                        ante.chain = Some(idx);
                        idx
                    }
                };
                chains[chain_idx].mentions.push(mention);
            }
            None => {
                chains.push(CorefChain {
                    name: None,
                    mentions: vec![mention],
                });
            }
        }
    }

    chains
}

#[derive(Deserialize)]
struct EndpointResponse {
    chains: Vec<EndpointChain>,
}

#[derive(Deserialize)]
struct EndpointChain {
    #[allow(dead_code)]
    head: Option<String>,
    mentions: Vec<EndpointMention>,
}

#[derive(Deserialize)]
struct EndpointMention {
    start: usize,
    end: usize,
    kind: String,
    number: Option<String>,
    #[allow(dead_code)]
    gender: Option<String>,
}

/// Fetch chains from an external service. The sentence is posted as
/// plain text (tokens separated by single spaces), so the service's
/// token offsets line up with the tree's leaf indices.
fn endpoint_chains(
    endpoint: &CorefEndpoint,
    tree: &ParseTree,
) -> Result<Vec<CorefChain>, String> {
    let mut leaves = Vec::new();
    collect_leaves(tree, &mut leaves);
    let text = leaves
        .iter()
        .map(|l| l.token.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    let client = reqwest::blocking::Client::builder()
        .timeout(endpoint.timeout)
        .build()
        .map_err(|e| format!("building HTTP client: {e}"))?;
    let response = client
        .post(&endpoint.url)
        .header(reqwest::header::CONTENT_TYPE, "text/plain")
        .body(text)
        .send()
        .map_err(|e| format!("request failed: {e}"))?
        .error_for_status()
        .map_err(|e| format!("service returned an error: {e}"))?;
    let parsed: EndpointResponse = response
        .json()
        .map_err(|e| format!("malformed JSON response: {e}"))?;

    let mut chains = Vec::new();
    for chain in parsed.chains {
        let mut mentions = Vec::new();
        let mut name = None;
        for m in chain.mentions {
            if m.start >= m.end || m.end > leaves.len() {
                return Err(format!(
                    "mention span {}..{} outside the {}-token sentence",
                    m.start,
                    m.end,
                    leaves.len()
                ));
            }
            let kind = match m.kind.as_str() {
                "proper" => MentionKind::Proper,
                "pronominal" => MentionKind::Pronominal,
                "nominal" => MentionKind::Nominal,
                other => return Err(format!("unknown mention kind '{other}'")),
            };
            if kind == MentionKind::Proper && name.is_none() {
                let token = &leaves[m.end - 1].token;
                name = Some(token.strip_prefix("p:").unwrap_or(token).to_string());
            }
            let number = match m.number.as_deref() {
                Some("pl") => Number::Plural,
                _ => Number::Singular,
            };
            let possessive =
                kind == MentionKind::Pronominal && leaves[m.start].label == "PRP$";
            mentions.push(Mention {
                start: m.start,
                end: m.end,
                kind,
                number,
                possessive,
            });
        }
        if !mentions.is_empty() {
            chains.push(CorefChain { name, mentions });
        }
    }
    Ok(chains)
}

/// Resolve coreference chains for one sentence. Uses the external
/// endpoint when configured, falling back to the rule-based resolver
/// (with a warning) on any service failure.
pub fn resolve_coref(
    tree: &ParseTree,
    lex: &Lexicon,
    endpoint: Option<&CorefEndpoint>,
    warnings: &mut Vec<String>,
) -> Vec<CorefChain> {
    if let Some(endpoint) = endpoint {
        match endpoint_chains(endpoint, tree) {
            Ok(chains) => return chains,
            Err(why) => warnings.push(format!(
                "coreference service at {} unavailable ({why}); using the built-in resolver",
                endpoint.url
            )),
        }
    }
    rule_based_chains(tree, lex)
}

enum LeafAction {
    Keep,
    Replace { label: String, token: String },
    Delete,
}

/// R2: replace every proper and pronominal mention with its chain's
/// `p:`-marked name, and append "p:NAME is <phrase>." for each
/// singular nominal mention. Returns the rewritten tree and the
/// appended sentences as token sequences.
pub fn r2_coreference(
    tree: &ParseTree,
    chains: &[CorefChain],
    alloc: &mut NameAllocator,
) -> Result<(ParseTree, Vec<Vec<String>>), R2Error> {
    let mut leaves = Vec::new();
    collect_leaves(tree, &mut leaves);
    let n = leaves.len();

    // Assign names: proper chains keep theirs, others get generated
    // names in chain order.
    let names: Vec<String> = chains
        .iter()
        .map(|c| c.name.clone().unwrap_or_else(|| alloc.next_name()))
        .collect();

    // Plan replacements, checking spans and overlap as we go.
    let mut actions: Vec<LeafAction> = (0..n).map(|_| LeafAction::Keep).collect();
    let mut claimed: Vec<Option<(usize, usize)>> = vec![None; n];
    for (chain, name) in chains.iter().zip(&names) {
        for mention in &chain.mentions {
            if mention.kind == MentionKind::Nominal {
                continue;
            }
            if mention.start >= mention.end || mention.end > n {
                return Err(R2Error::SpanOutOfRange(mention.start, mention.end, n));
            }
            for i in mention.start..mention.end {
                if let Some((s, e)) = claimed[i] {
                    if (s, e) != (mention.start, mention.end) {
                        return Err(R2Error::OverlappingSpans(
                            s,
                            e,
                            mention.start,
                            mention.end,
                        ));
                    }
                }
                claimed[i] = Some((mention.start, mention.end));
            }
            let last = &leaves[mention.end - 1];
            let token = if mention.possessive {
                format!("p:{name}'s")
            } else {
                format!("p:{name}")
            };
            let label = match mention.kind {
                MentionKind::Pronominal if mention.possessive => last.label.clone(),
                MentionKind::Pronominal => "NNP".to_string(),
                _ => last.label.clone(),
            };
            actions[mention.start] = LeafAction::Replace { label, token };
            for action in actions
                .iter_mut()
                .take(mention.end)
                .skip(mention.start + 1)
            {
                *action = LeafAction::Delete;
            }
        }
    }

    // Final token of each leaf after substitution (None = deleted),
    // used both for the rebuilt tree and for appended sentences.
    let final_tokens: Vec<Option<String>> = (0..n)
        .map(|i| match &actions[i] {
            LeafAction::Keep => Some(leaves[i].token.clone()),
            LeafAction::Replace { token, .. } => Some(token.clone()),
            LeafAction::Delete => None,
        })
        .collect();

    // Appended sentences: one per singular nominal mention.
    let mut appended = Vec::new();
    for (chain, name) in chains.iter().zip(&names) {
        for mention in &chain.mentions {
            if mention.kind != MentionKind::Nominal || mention.number != Number::Singular {
                continue;
            }
            if mention.start >= mention.end || mention.end > n {
                return Err(R2Error::SpanOutOfRange(mention.start, mention.end, n));
            }
            let mut sentence = vec![format!("p:{name}"), "is".to_string()];
            sentence.extend(
                final_tokens[mention.start..mention.end]
                    .iter()
                    .flatten()
                    .cloned(),
            );
            sentence.push(".".to_string());
            appended.push(sentence);
        }
    }

    // Rebuild the tree.
    fn rebuild(
        node: &ParseTree,
        actions: &[LeafAction],
        counter: &mut usize,
    ) -> Option<ParseTree> {
        if node.is_leaf() {
            let i = *counter;
            *counter += 1;
            return match &actions[i] {
                LeafAction::Keep => Some(node.clone()),
                LeafAction::Replace { label, token } => {
                    Some(ParseTree::leaf(label.clone(), token.clone()))
                }
                LeafAction::Delete => None,
            };
        }
        let children: Vec<ParseTree> = node
            .children
            .iter()
            .filter_map(|c| rebuild(c, actions, counter))
            .collect();
        if children.is_empty() {
            return None;
        }
        Some(ParseTree::node(node.label.clone(), children))
    }
    let mut counter = 0usize;
    let rebuilt = rebuild(tree, &actions, &mut counter).unwrap_or_else(|| tree.clone());

    Ok((rebuilt, appended))
}
