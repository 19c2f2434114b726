//! Pair classification: the staged decision procedure that turns a
//! premise/hypothesis pair into an entailment / contradiction /
//! neutral / uncovered verdict.
//!
//! Each sentence is first parsed against the controlled fragment as
//! written; if either side fails, the rewrite pipeline runs on the
//! pair's constituency trees and the rewritten sentences are parsed
//! instead (sides that already parsed keep their original reading).
//! Pairs with an unparseable side are *uncovered*. Covered pairs then
//! go through up to three proving stages — no axioms, taxonomy axioms
//! (A), taxonomy plus closed-world axioms (A∪N) — checking entailment
//! before contradiction at each stage, with a consistency guard before
//! the closed-world stage. Every prover call gets a fresh clause
//! budget.

use serde::Serialize;

use crate::axioms::{self, AxiomConfig, AxiomSets};
use crate::cnl::{parse_fragment, to_fol, tokenize_ace};
use crate::corpus::ParseTree;
use crate::fol::clausify::clausify_formulas;
use crate::fol::tptp::{serialize_tptp, Role};
use crate::fol::{ClauseOrigin, Formula};
use crate::lexicon::Lexicon;
use crate::prover::{saturate, ProofStatus, DEFAULT_CLAUSE_LIMIT};
use crate::rewrite::{
    apply_all, render_tokens, rewrite_single, RewriteConfig, RewrittenSentence, RuleId,
};

/// Final label for a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Entailment,
    Contradiction,
    Neutral,
    Uncovered,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Entailment => "entailment",
            Label::Contradiction => "contradiction",
            Label::Neutral => "neutral",
            Label::Uncovered => "uncovered",
        }
    }
}

/// Which proving stage decided the label. `None` for neutral and
/// uncovered verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Base,
    WithA,
    WithAAndN,
    None,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Base => "base",
            Stage::WithA => "with_a",
            Stage::WithAAndN => "with_a_and_n",
            Stage::None => "none",
        }
    }
}

/// What a prover call was trying to establish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Entailment,
    Contradiction,
    Consistency,
}

/// Accounting for one saturation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProverCall {
    pub stage: Stage,
    pub check: Check,
    pub status: ProofStatus,
    pub clauses_created: usize,
}

/// Per-sentence coverage report.
#[derive(Debug, Clone, Serialize)]
pub struct SideReport {
    /// Did the sentence parse as written, before any rewriting?
    pub covered_raw: bool,
    /// Did it parse at all (possibly after rewriting)?
    pub covered: bool,
    /// Rewrite rules that changed the sentence (empty when the raw
    /// reading was used).
    pub applied_rules: Vec<RuleId>,
    /// The sentence text whose reading was used, or the last text that
    /// failed to parse.
    pub text: String,
}

/// TPTP renderings of the pair's two proof problems (final-stage
/// axiom sets included).
#[derive(Debug, Clone, Serialize)]
pub struct TptpDump {
    /// Premise and axioms as `axiom` statements, hypothesis as a
    /// `conjecture`: unsatisfiable after negation iff entailed.
    pub entailment: String,
    /// Premise, axioms, and hypothesis all as `axiom` statements:
    /// unsatisfiable iff contradictory.
    pub contradiction: String,
}

/// The classification outcome for one pair.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub label: Label,
    pub stage: Stage,
    pub prover_stats: Vec<ProverCall>,
    pub premise: SideReport,
    pub hypothesis: SideReport,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tptp: Option<TptpDump>,
}

/// Everything that shapes a classification run.
#[derive(Debug, Clone, Default)]
pub struct ClassifyConfig {
    pub rewrite: RewriteConfig,
    pub axioms: AxiomConfig,
    /// Clause-creation budget per prover call; `None` means the
    /// default budget.
    pub clause_limit: Option<usize>,
    /// Record TPTP problem files in the verdict.
    pub record_tptp: bool,
}

impl ClassifyConfig {
    pub fn effective_clause_limit(&self) -> usize {
        self.clause_limit.unwrap_or(DEFAULT_CLAUSE_LIMIT)
    }
}

/// One sentence as presented to the classifier: its text plus,
/// optionally, a constituency parse for the rewrite pipeline to work
/// on. Without a parse, a sentence that fails the raw fragment parse
/// is uncovered.
#[derive(Debug, Clone)]
pub struct SentenceInput {
    pub text: String,
    pub tree: Option<ParseTree>,
}

impl SentenceInput {
    pub fn new(text: impl Into<String>, tree: Option<ParseTree>) -> SentenceInput {
        SentenceInput {
            text: text.into(),
            tree,
        }
    }
}

/// A sentence reading: its logical form plus how it was obtained.
struct SideReading {
    formula: Option<Formula>,
    report: SideReport,
    warnings: Vec<String>,
}

fn parse_to_formula(text: &str, lex: &Lexicon) -> Result<Formula, String> {
    let tokens = tokenize_ace(text).map_err(|e| e.to_string())?;
    let parse = parse_fragment(&tokens, lex).map_err(|e| e.to_string())?;
    Ok(to_fol(&parse).formula)
}

/// Conjoin a rewritten sentence's main and appended parts into one
/// formula, or report the first part that falls outside the fragment.
fn rewritten_to_formula(
    main: &[String],
    appended: &[Vec<String>],
    lex: &Lexicon,
) -> Result<Formula, String> {
    let main_text = render_tokens(main);
    let mut formula = parse_to_formula(&main_text, lex)
        .map_err(|e| format!("rewritten sentence {main_text:?}: {e}"))?;
    for extra in appended {
        let extra_text = render_tokens(extra);
        let part = parse_to_formula(&extra_text, lex)
            .map_err(|e| format!("appended sentence {extra_text:?}: {e}"))?;
        formula = Formula::and(formula, part);
    }
    Ok(formula)
}

/// Classify one premise/hypothesis pair.
pub fn classify(
    premise: &SentenceInput,
    hypothesis: &SentenceInput,
    lex: &Lexicon,
    config: &ClassifyConfig,
) -> Verdict {
    let mut warnings = Vec::new();

    // Attempt the raw fragment parse of both sentences.
    let raw: Vec<Result<Formula, String>> = [&premise.text, &hypothesis.text]
        .iter()
        .map(|text| parse_to_formula(text, lex))
        .collect();
    let both_raw = raw.iter().all(Result::is_ok);

    // Rewrite the pair when either side needs it (and trees exist).
    // With only one tree available, that sentence is rewritten alone.
    let rewritten: (Option<RewrittenSentence>, Option<RewrittenSentence>) = if !both_raw {
        match (&premise.tree, &hypothesis.tree) {
            (Some(p), Some(h)) => {
                let (rp, rh) = apply_all(p, h, lex, &config.rewrite);
                (Some(rp), Some(rh))
            }
            (Some(p), None) => (Some(rewrite_single(p, lex, &config.rewrite)), None),
            (None, Some(h)) => (None, Some(rewrite_single(h, lex, &config.rewrite))),
            (None, None) => (None, None),
        }
    } else {
        (None, None)
    };

    let mut sides: Vec<SideReading> = Vec::with_capacity(2);
    for (i, (input, raw_result)) in [premise, hypothesis].into_iter().zip(raw).enumerate() {
        let side = match raw_result {
            Ok(formula) => SideReading {
                formula: Some(formula),
                report: SideReport {
                    covered_raw: true,
                    covered: true,
                    applied_rules: Vec::new(),
                    text: input.text.clone(),
                },
                warnings: Vec::new(),
            },
            Err(raw_error) => {
                let rewritten_side = if i == 0 {
                    rewritten.0.as_ref()
                } else {
                    rewritten.1.as_ref()
                };
                match rewritten_side {
                    Some(rw) => {
                        let mut side_warnings = rw.warnings.clone();
                        match rewritten_to_formula(&rw.main, &rw.appended, lex) {
                            Ok(formula) => SideReading {
                                formula: Some(formula),
                                report: SideReport {
                                    covered_raw: false,
                                    covered: true,
                                    applied_rules: rw.applied_rules.iter().copied().collect(),
                                    text: rw.main_text(),
                                },
                                warnings: side_warnings,
                            },
                            Err(rewrite_error) => {
                                side_warnings.push(rewrite_error);
                                SideReading {
                                    formula: None,
                                    report: SideReport {
                                        covered_raw: false,
                                        covered: false,
                                        applied_rules: rw.applied_rules.iter().copied().collect(),
                                        text: rw.main_text(),
                                    },
                                    warnings: side_warnings,
                                }
                            }
                        }
                    }
                    None => SideReading {
                        formula: None,
                        report: SideReport {
                            covered_raw: false,
                            covered: false,
                            applied_rules: Vec::new(),
                            text: input.text.clone(),
                        },
                        warnings: vec![raw_error],
                    },
                }
            }
        };
        sides.push(side);
    }

    let hypothesis_side = sides.pop().expect("two sides");
    let premise_side = sides.pop().expect("two sides");
    warnings.extend(premise_side.warnings.iter().cloned());
    warnings.extend(hypothesis_side.warnings.iter().cloned());

    let (Some(p_formula), Some(h_formula)) =
        (premise_side.formula.as_ref(), hypothesis_side.formula.as_ref())
    else {
        return Verdict {
            label: Label::Uncovered,
            stage: Stage::None,
            prover_stats: Vec::new(),
            premise: premise_side.report,
            hypothesis: hypothesis_side.report,
            warnings,
            tptp: None,
        };
    };

    // Axiom sets over the pair's content words.
    let (nouns, verbs) = axioms::collect_content_words(p_formula, h_formula, lex);
    let sets = axioms::generate(&nouns, &verbs, lex, &config.axioms);

    let tptp = if config.record_tptp {
        match render_tptp(p_formula, h_formula, &sets) {
            Ok(dump) => Some(dump),
            Err(why) => {
                warnings.push(format!("TPTP dump skipped: {why}"));
                None
            }
        }
    } else {
        None
    };

    let limit = config.effective_clause_limit();
    let mut stats: Vec<ProverCall> = Vec::new();

    // Run one prover check; Ok(true) means unsatisfiable.
    let attempt = |formulas: Vec<(Formula, ClauseOrigin)>,
                       stage: Stage,
                       check: Check,
                       stats: &mut Vec<ProverCall>|
     -> Result<bool, String> {
        let clauses = clausify_formulas(&formulas).map_err(|e| e.to_string())?;
        let outcome = saturate(&clauses, limit);
        stats.push(ProverCall {
            stage,
            check,
            status: outcome.status,
            clauses_created: outcome.clauses_created,
        });
        Ok(outcome.status == ProofStatus::Unsatisfiable)
    };

    let entailment_inputs = |extra: &[AxiomEntrySlice]| -> Vec<(Formula, ClauseOrigin)> {
        let mut v = vec![
            (p_formula.clone(), ClauseOrigin::Premise),
            (Formula::not(h_formula.clone()), ClauseOrigin::NegatedHypothesis),
        ];
        extend_axioms(&mut v, extra);
        v
    };
    let contradiction_inputs = |extra: &[AxiomEntrySlice]| -> Vec<(Formula, ClauseOrigin)> {
        let mut v = vec![
            (p_formula.clone(), ClauseOrigin::Premise),
            (h_formula.clone(), ClauseOrigin::Hypothesis),
        ];
        extend_axioms(&mut v, extra);
        v
    };

    let a_only: Vec<AxiomEntrySlice> = vec![(&sets.a, ClauseOrigin::AxiomA)];
    let a_and_n: Vec<AxiomEntrySlice> = vec![
        (&sets.a, ClauseOrigin::AxiomA),
        (&sets.n, ClauseOrigin::AxiomN),
    ];

    let decided = (|| -> Result<Option<(Label, Stage)>, String> {
        // Base stage: no axioms.
        if attempt(entailment_inputs(&[]), Stage::Base, Check::Entailment, &mut stats)? {
            return Ok(Some((Label::Entailment, Stage::Base)));
        }
        if attempt(
            contradiction_inputs(&[]),
            Stage::Base,
            Check::Contradiction,
            &mut stats,
        )? {
            return Ok(Some((Label::Contradiction, Stage::Base)));
        }
        // Taxonomy stage: identical checks are skipped when A adds
        // nothing.
        if !sets.a.is_empty() {
            if attempt(
                entailment_inputs(&a_only),
                Stage::WithA,
                Check::Entailment,
                &mut stats,
            )? {
                return Ok(Some((Label::Entailment, Stage::WithA)));
            }
            if attempt(
                contradiction_inputs(&a_only),
                Stage::WithA,
                Check::Contradiction,
                &mut stats,
            )? {
                return Ok(Some((Label::Contradiction, Stage::WithA)));
            }
        }
        // Closed-world stage, guarded: when the axioms alone (plus the
        // premise) are inconsistent, any verdict would be vacuous, so
        // the stage is skipped.
        if !sets.n.is_empty() {
            let mut guard = vec![(p_formula.clone(), ClauseOrigin::Premise)];
            extend_axioms(&mut guard, &a_and_n);
            if attempt(guard, Stage::WithAAndN, Check::Consistency, &mut stats)? {
                return Ok(None);
            }
            if attempt(
                entailment_inputs(&a_and_n),
                Stage::WithAAndN,
                Check::Entailment,
                &mut stats,
            )? {
                return Ok(Some((Label::Entailment, Stage::WithAAndN)));
            }
            if attempt(
                contradiction_inputs(&a_and_n),
                Stage::WithAAndN,
                Check::Contradiction,
                &mut stats,
            )? {
                return Ok(Some((Label::Contradiction, Stage::WithAAndN)));
            }
        }
        Ok(None)
    })();

    let (label, stage) = match decided {
        Ok(Some((label, stage))) => (label, stage),
        Ok(None) => (Label::Neutral, Stage::None),
        Err(why) => {
            warnings.push(format!("proving error, defaulting to neutral: {why}"));
            (Label::Neutral, Stage::None)
        }
    };

    Verdict {
        label,
        stage,
        prover_stats: stats,
        premise: premise_side.report,
        hypothesis: hypothesis_side.report,
        warnings,
        tptp,
    }
}

type AxiomEntrySlice<'a> = (&'a [axioms::AxiomEntry], ClauseOrigin);

fn extend_axioms(target: &mut Vec<(Formula, ClauseOrigin)>, parts: &[AxiomEntrySlice]) {
    for (entries, origin) in parts {
        for entry in *entries {
            target.push((entry.formula.clone(), origin.clone()));
        }
    }
}

fn render_tptp(
    premise: &Formula,
    hypothesis: &Formula,
    sets: &AxiomSets,
) -> Result<TptpDump, String> {
    let mut shared = Vec::new();
    shared.push(serialize_tptp(premise, "premise", Role::Axiom).map_err(|e| e.to_string())?);
    for entry in sets.a.iter().chain(&sets.n) {
        shared.push(
            serialize_tptp(&entry.formula, &entry.name, Role::Axiom)
                .map_err(|e| e.to_string())?,
        );
    }
    let mut entailment = shared.clone();
    entailment.push(
        serialize_tptp(hypothesis, "hypothesis", Role::Conjecture).map_err(|e| e.to_string())?,
    );
    let mut contradiction = shared;
    contradiction.push(
        serialize_tptp(hypothesis, "hypothesis", Role::Axiom).map_err(|e| e.to_string())?,
    );
    Ok(TptpDump {
        entailment: entailment.join("\n") + "\n",
        contradiction: contradiction.join("\n") + "\n",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_ptb;
    use crate::fol::tptp::parse_tptp;
    use std::path::Path;

    fn lex() -> Lexicon {
        Lexicon::load(Path::new(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../data/lexicon"
        )))
        .expect("bundled lexicon loads")
    }

    fn bare(text: &str) -> SentenceInput {
        SentenceInput::new(text, None)
    }

    fn with_tree(text: &str, ptb: &str) -> SentenceInput {
        SentenceInput::new(text, Some(parse_ptb(ptb).expect("test tree parses")))
    }

    #[test]
    fn identical_pair_is_entailment_at_base() {
        let lex = lex();
        let verdict = classify(
            &bare("a dog runs ."),
            &bare("a dog runs ."),
            &lex,
            &ClassifyConfig::default(),
        );
        assert_eq!(verdict.label, Label::Entailment);
        assert_eq!(verdict.stage, Stage::Base);
        assert_eq!(verdict.prover_stats.len(), 1);
        assert_eq!(verdict.prover_stats[0].check, Check::Entailment);
        assert_eq!(verdict.prover_stats[0].status, ProofStatus::Unsatisfiable);
        assert!(verdict.premise.covered_raw && verdict.hypothesis.covered_raw);
    }

    #[test]
    fn explicit_negation_is_contradiction_at_base() {
        let lex = lex();
        let verdict = classify(
            &bare("no man runs ."),
            &bare("a man runs ."),
            &lex,
            &ClassifyConfig::default(),
        );
        assert_eq!(verdict.label, Label::Contradiction);
        assert_eq!(verdict.stage, Stage::Base);
    }

    #[test]
    fn hypernym_entailment_decided_with_taxonomy_axioms() {
        let lex = lex();
        let verdict = classify(
            &bare("a woman hugs a boy ."),
            &bare("a person hugs a boy ."),
            &lex,
            &ClassifyConfig::default(),
        );
        assert_eq!(verdict.label, Label::Entailment);
        assert_eq!(verdict.stage, Stage::WithA);
        // Base stage ran and failed first.
        assert!(verdict
            .prover_stats
            .iter()
            .any(|c| c.stage == Stage::Base && c.status != ProofStatus::Unsatisfiable));
    }

    #[test]
    fn nobody_contradicts_via_taxonomy() {
        let lex = lex();
        let verdict = classify(
            &bare("nobody works ."),
            &bare("a man works ."),
            &lex,
            &ClassifyConfig::default(),
        );
        assert_eq!(verdict.label, Label::Contradiction);
        assert_eq!(verdict.stage, Stage::WithA);
    }

    #[test]
    fn unrelated_sentences_are_neutral_with_stage_none() {
        let lex = lex();
        let verdict = classify(
            &bare("a dog runs ."),
            &bare("a cat sits ."),
            &lex,
            &ClassifyConfig::default(),
        );
        assert_eq!(verdict.label, Label::Neutral);
        assert_eq!(verdict.stage, Stage::None);
        // The closed-world stage ran its consistency guard.
        assert!(verdict
            .prover_stats
            .iter()
            .any(|c| c.check == Check::Consistency));
    }

    #[test]
    fn three_unrelated_nouns_trip_the_consistency_guard() {
        let lex = lex();
        let verdict = classify(
            &bare("a dog runs ."),
            &bare("a cat sees a bird ."),
            &lex,
            &ClassifyConfig::default(),
        );
        assert_eq!(verdict.label, Label::Neutral);
        assert_eq!(verdict.stage, Stage::None);
        let guard = verdict
            .prover_stats
            .iter()
            .find(|c| c.check == Check::Consistency)
            .expect("guard ran");
        assert_eq!(guard.status, ProofStatus::Unsatisfiable);
        // The guard firing means no closed-world verdict checks ran.
        assert!(!verdict
            .prover_stats
            .iter()
            .any(|c| c.stage == Stage::WithAAndN && c.check != Check::Consistency));
    }

    #[test]
    fn unparseable_sentence_without_tree_is_uncovered() {
        let lex = lex();
        let verdict = classify(
            &bare("John's dog runs ."),
            &bare("a dog runs ."),
            &lex,
            &ClassifyConfig::default(),
        );
        assert_eq!(verdict.label, Label::Uncovered);
        assert_eq!(verdict.stage, Stage::None);
        assert!(verdict.prover_stats.is_empty());
        assert!(!verdict.premise.covered);
        assert!(verdict.hypothesis.covered);
    }

    #[test]
    fn rewriting_rescues_past_tense_premise() {
        let lex = lex();
        let premise = with_tree(
            "A dog walked .",
            "(ROOT (S (NP (DT A) (NN dog)) (VP (VBD walked)) (. .)))",
        );
        let verdict = classify(
            &premise,
            &bare("a dog walks ."),
            &lex,
            &ClassifyConfig::default(),
        );
        assert_eq!(verdict.label, Label::Entailment);
        assert_eq!(verdict.stage, Stage::Base);
        assert!(!verdict.premise.covered_raw);
        assert!(verdict.premise.covered);
        assert!(verdict.premise.applied_rules.contains(&RuleId::R3));
        assert_eq!(verdict.premise.text, "A n:dog walks.");
    }

    #[test]
    fn tptp_dump_replays_to_the_same_entailment() {
        let lex = lex();
        let config = ClassifyConfig {
            record_tptp: true,
            ..ClassifyConfig::default()
        };
        let verdict = classify(
            &bare("a woman hugs a boy ."),
            &bare("a person hugs a boy ."),
            &lex,
            &config,
        );
        assert_eq!(verdict.label, Label::Entailment);
        let dump = verdict.tptp.expect("dump recorded");
        let statements = parse_tptp(&dump.entailment).expect("dump parses");
        let inputs: Vec<(Formula, ClauseOrigin)> = statements
            .into_iter()
            .map(|s| match s.role {
                Role::Conjecture => (
                    Formula::not(s.formula),
                    ClauseOrigin::NegatedHypothesis,
                ),
                Role::Axiom => (s.formula, ClauseOrigin::AxiomA),
            })
            .collect();
        let clauses = clausify_formulas(&inputs).expect("clausifies");
        let outcome = saturate(&clauses, DEFAULT_CLAUSE_LIMIT);
        assert_eq!(outcome.status, ProofStatus::Unsatisfiable);
    }

    #[test]
    fn zero_clause_budget_gives_neutral() {
        let lex = lex();
        let config = ClassifyConfig {
            clause_limit: Some(0),
            ..ClassifyConfig::default()
        };
        let verdict = classify(&bare("a dog runs ."), &bare("a dog runs ."), &lex, &config);
        assert_eq!(verdict.label, Label::Neutral);
        assert_eq!(verdict.stage, Stage::None);
        // The base entailment check needs at least one resolution step,
        // so a zero budget stops it short of the proof.
        assert_eq!(verdict.prover_stats[0].check, Check::Entailment);
        assert_eq!(verdict.prover_stats[0].status, ProofStatus::LimitReached);
        assert!(!verdict
            .prover_stats
            .iter()
            .any(|c| c.status == ProofStatus::Unsatisfiable));
    }

    #[test]
    fn disabling_semantic_rules_blocks_axiom_stages() {
        let lex = lex();
        let config = ClassifyConfig {
            axioms: AxiomConfig {
                s1: false,
                s2: false,
                weak_cwa: false,
            },
            ..ClassifyConfig::default()
        };
        let verdict = classify(
            &bare("a woman hugs a boy ."),
            &bare("a person hugs a boy ."),
            &lex,
            &config,
        );
        assert_eq!(verdict.label, Label::Neutral);
        assert_eq!(verdict.stage, Stage::None);
        assert!(verdict
            .prover_stats
            .iter()
            .all(|c| c.stage == Stage::Base));
    }

    #[test]
    fn stage_is_none_exactly_for_neutral_and_uncovered() {
        let lex = lex();
        let config = ClassifyConfig::default();
        let cases = [
            ("a dog runs .", "a dog runs ."),
            ("no man runs .", "a man runs ."),
            ("a dog runs .", "a cat sits ."),
            ("John's dog runs .", "a dog runs ."),
            ("a woman hugs a boy .", "a person hugs a boy ."),
        ];
        for (p, h) in cases {
            let verdict = classify(&bare(p), &bare(h), &lex, &config);
            let none_expected =
                matches!(verdict.label, Label::Neutral | Label::Uncovered);
            assert_eq!(
                verdict.stage == Stage::None,
                none_expected,
                "pair {p:?} / {h:?} gave {:?} at {:?}",
                verdict.label,
                verdict.stage
            );
        }
    }
}
