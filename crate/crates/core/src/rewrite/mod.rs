//! Sentence rewriting: a fixed pipeline of syntactic rules that move
//! parse trees toward the controlled fragment (pronoun and name
//! replacement, tense normalization, numeral words, predeterminer
//! removal, adverb reordering, part-of-speech markers).
//!
//! Rules apply in the order R2, R3, R8, R4, R5, R6, R7, R1. Names
//! generated by R2 are unique across the two sentences of a pair, so
//! rewriting is always driven through [`apply_all`] (pairs) or
//! [`rewrite_single`] (one sentence).

pub mod coref;
pub mod rules;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::corpus::ParseTree;
use crate::lexicon::Lexicon;

pub use coref::{CorefChain, CorefEndpoint, Mention, MentionKind, NameAllocator, R2Error};

/// Identifier of one rewrite rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl RuleId {
    pub const ALL: [RuleId; 8] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::R6 => "R6",
            RuleId::R7 => "R7",
            RuleId::R8 => "R8",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rewrite rule '{0}' (expected R1..R8)")]
pub struct ParseRuleIdError(String);

impl FromStr for RuleId {
    type Err = ParseRuleIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "R1" => Ok(RuleId::R1),
            "R2" => Ok(RuleId::R2),
            "R3" => Ok(RuleId::R3),
            "R4" => Ok(RuleId::R4),
            "R5" => Ok(RuleId::R5),
            "R6" => Ok(RuleId::R6),
            "R7" => Ok(RuleId::R7),
            "R8" => Ok(RuleId::R8),
            _ => Err(ParseRuleIdError(s.to_string())),
        }
    }
}

/// Which rules run, and where coreference chains come from.
#[derive(Debug, Clone)]
pub struct RewriteConfig {
    pub enabled: BTreeSet<RuleId>,
    pub coref_endpoint: Option<CorefEndpoint>,
}

impl Default for RewriteConfig {
    fn default() -> Self {
        RewriteConfig {
            enabled: RuleId::ALL.into_iter().collect(),
            coref_endpoint: None,
        }
    }
}

impl RewriteConfig {
    /// Configuration with every rule disabled (identity rewrite).
    pub fn none() -> Self {
        RewriteConfig {
            enabled: BTreeSet::new(),
            coref_endpoint: None,
        }
    }

    pub fn with_endpoint(mut self, url: impl Into<String>, timeout: Duration) -> Self {
        self.coref_endpoint = Some(CorefEndpoint {
            url: url.into(),
            timeout,
        });
        self
    }

    pub fn disable(mut self, rule: RuleId) -> Self {
        self.enabled.remove(&rule);
        self
    }

    fn on(&self, rule: RuleId) -> bool {
        self.enabled.contains(&rule)
    }
}

/// Result of rewriting one sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewrittenSentence {
    /// Token sequence of the rewritten sentence, period-terminated.
    pub main: Vec<String>,
    /// Extra sentences added by coreference rewriting, as token
    /// sequences, each period-terminated.
    pub appended: Vec<Vec<String>>,
    /// Rules that actually changed this sentence.
    pub applied_rules: BTreeSet<RuleId>,
    /// The final tree.
    pub tree: ParseTree,
    /// Human-readable notes: unknown words, coreference service
    /// fallbacks, skipped rules.
    pub warnings: Vec<String>,
}

impl RewrittenSentence {
    /// The rewritten sentence as display text (no space before
    /// punctuation).
    pub fn main_text(&self) -> String {
        render_tokens(&self.main)
    }

    pub fn appended_texts(&self) -> Vec<String> {
        self.appended.iter().map(|t| render_tokens(t)).collect()
    }
}

/// Join tokens with spaces, omitting the space before punctuation.
pub fn render_tokens(tokens: &[String]) -> String {
    let mut out = String::new();
    for token in tokens {
        let punctuation = matches!(token.as_str(), "." | "," | ";" | ":" | "!" | "?");
        if !out.is_empty() && !punctuation {
            out.push(' ');
        }
        out.push_str(token);
    }
    out
}

fn terminated_leaves(tree: &ParseTree) -> Vec<String> {
    let mut tokens: Vec<String> = tree.leaves().iter().map(|s| s.to_string()).collect();
    match tokens.last().map(|t| t.as_str()) {
        Some(".") | Some("!") | Some("?") => {}
        _ => tokens.push(".".to_string()),
    }
    tokens
}

/// Rewrite any number of sentences with one shared name allocator.
fn rewrite_batch(
    trees: &[&ParseTree],
    lex: &Lexicon,
    config: &RewriteConfig,
) -> Vec<RewrittenSentence> {
    let mut states: Vec<RewrittenSentence> = trees
        .iter()
        .map(|t| RewrittenSentence {
            main: Vec::new(),
            appended: Vec::new(),
            applied_rules: BTreeSet::new(),
            tree: (*t).clone(),
            warnings: Vec::new(),
        })
        .collect();

    // R2 first: chains are resolved per sentence, but names are
    // allocated pair-wide, and an error in either sentence skips the
    // rule for the whole pair.
    if config.on(RuleId::R2) {
        let mut alloc = NameAllocator::new();
        let mut results = Vec::with_capacity(states.len());
        let mut failure: Option<R2Error> = None;
        for state in &mut states {
            let chains = coref::resolve_coref(
                &state.tree,
                lex,
                config.coref_endpoint.as_ref(),
                &mut state.warnings,
            );
            match coref::r2_coreference(&state.tree, &chains, &mut alloc) {
                Ok(result) => results.push(result),
                Err(error) => {
                    failure = Some(error);
                    break;
                }
            }
        }
        match failure {
            None => {
                for (state, (tree, appended)) in states.iter_mut().zip(results) {
                    if tree != state.tree || !appended.is_empty() {
                        state.applied_rules.insert(RuleId::R2);
                    }
                    state.tree = tree;
                    state.appended = appended;
                }
            }
            Some(error) => {
                for state in &mut states {
                    state
                        .warnings
                        .push(format!("coreference rewriting skipped for this pair: {error}"));
                }
            }
        }
    }

    for state in &mut states {
        let step = |rule: RuleId,
                    tree: &ParseTree,
                    warnings: &mut Vec<String>|
         -> Option<ParseTree> {
            if !config.on(rule) {
                return None;
            }
            let next = match rule {
                RuleId::R3 => rules::r3_past_tense(tree, lex, warnings),
                RuleId::R8 => rules::r8_progressive(tree, lex, warnings),
                RuleId::R4 => rules::r4_numbers(tree, lex),
                RuleId::R5 => rules::r5_predeterminers(tree),
                RuleId::R6 => rules::r6_advp_order(tree),
                RuleId::R7 => rules::r7_adv_conjunction(tree),
                RuleId::R1 => rules::r1_adjective_phrases(tree),
                RuleId::R2 => unreachable!("R2 is handled pair-wide"),
            };
            Some(next)
        };
        for rule in [
            RuleId::R3,
            RuleId::R8,
            RuleId::R4,
            RuleId::R5,
            RuleId::R6,
            RuleId::R7,
            RuleId::R1,
        ] {
            let mut warnings = Vec::new();
            if let Some(next) = step(rule, &state.tree, &mut warnings) {
                if next != state.tree {
                    state.applied_rules.insert(rule);
                    state.tree = next;
                }
            }
            state.warnings.append(&mut warnings);
        }
        state.main = terminated_leaves(&state.tree);
    }

    states
}

/// Rewrite both sentences of a premise/hypothesis pair. Generated
/// coreference names are unique across the pair.
pub fn apply_all(
    premise: &ParseTree,
    hypothesis: &ParseTree,
    lex: &Lexicon,
    config: &RewriteConfig,
) -> (RewrittenSentence, RewrittenSentence) {
    let mut batch = rewrite_batch(&[premise, hypothesis], lex, config);
    let second = batch.pop().expect("two results");
    let first = batch.pop().expect("two results");
    (first, second)
}

/// Rewrite one sentence on its own.
pub fn rewrite_single(
    tree: &ParseTree,
    lex: &Lexicon,
    config: &RewriteConfig,
) -> RewrittenSentence {
    rewrite_batch(&[tree], lex, config)
        .pop()
        .expect("one result")
}
