//! Natural-language inference over a controlled English fragment.
//!
//! The pipeline turns a premise/hypothesis sentence pair into a verdict
//! (entailment, contradiction, neutral, or uncovered) in four stages:
//!
//! 1. **Rewrite** (`rewrite`): normalize raw English toward the
//!    controlled fragment — tense, number words, particle order,
//!    pronoun resolution — guided by each sentence's constituency
//!    parse.
//! 2. **Parse & translate** (`cnl`): parse the controlled fragment
//!    and compositionally translate it to first-order logic. Sentences
//!    outside the fragment make the pair *uncovered*.
//! 3. **Augment** (`axioms`): add background axioms from a lexicon of
//!    hypernym relations — taxonomy implications and closed-world
//!    exclusions among the content words of the pair.
//! 4. **Prove** ([`prover`]): run a bounded resolution prover over the
//!    clausified problem ([`fol`]) and read the verdict off which of a
//!    fixed sequence of proof attempts succeeds (`classify`).
//!
//! `report` evaluates the whole pipeline over a labeled corpus and
//! [`modelcheck`] provides brute-force semantic ground truth for tests.

pub mod axioms;
pub mod classify;
pub mod cnl;
pub mod corpus;
pub mod fol;
pub mod lexicon;
pub mod modelcheck;
pub mod prover;
pub mod report;
pub mod rewrite;

pub use classify::{classify, ClassifyConfig, Label, SentenceInput, Stage, Verdict};
pub use corpus::{load_jsonl, CorpusStats, GoldLabel, Pair, ParseTree};
pub use fol::{Atom, Clause, ClauseOrigin, Formula, Literal, Term};
pub use lexicon::Lexicon;
pub use prover::{saturate, ProofResult, ProofStatus, DEFAULT_CLAUSE_LIMIT};
pub use report::{confusion_matrix, evaluate_pairs, run_eval, EvalConfig, EvalReport, PairReport};
pub use rewrite::{apply_all, rewrite_single, RewriteConfig, RewrittenSentence, RuleId};
