//! Batch evaluation: coverage statistics, a column-normalized confusion
//! matrix, and a stable per-pair record of every verdict.
//!
//! The JSON report is deterministic: pairs are classified in parallel
//! but assembled in pair-id order, all collections are vectors (no
//! hash-ordered maps), and every figure is a pure function of the
//! corpus, lexicon, and configuration.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify, ClassifyConfig, Label, SentenceInput, Stage};
use crate::corpus::{load_jsonl, CorpusStats, GoldLabel, Pair};
use crate::lexicon::Lexicon;
use crate::rewrite::RuleId;

/// Row/column order of the confusion matrix: entailment, neutral,
/// contradiction.
const MATRIX_AXIS: [&str; 3] = ["E", "N", "C"];

/// One evaluated pair, as recorded in the report.
#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub id: String,
    pub gold: GoldLabel,
    pub verdict: Label,
    pub stage: Stage,
    /// Rewrite rules that changed either sentence.
    pub rules: Vec<RuleId>,
    pub premise_covered: bool,
    pub hypothesis_covered: bool,
    pub warnings: Vec<String>,
}

/// Aggregate results of an evaluation run.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub total_pairs: usize,
    pub covered_pairs: usize,
    /// Fraction of pairs where both sentences parse as written.
    pub coverage_before_rewrite: f64,
    /// Fraction of pairs where both sentences parse, possibly after
    /// rewriting.
    pub coverage_after_rewrite: f64,
    /// Same two figures counted over individual sentences rather than
    /// pairs.
    pub sentence_coverage_before_rewrite: f64,
    pub sentence_coverage_after_rewrite: f64,
    /// `matrix[actual][predicted]`, axes ordered E, N, C; each column
    /// is normalized to sum to 1 over the pairs with that prediction.
    pub matrix: [[f64; 3]; 3],
    pub per_pair: Vec<PairReport>,
}

/// Evaluation-run configuration beyond the per-pair classifier knobs.
#[derive(Debug, Clone, Default)]
pub struct EvalConfig {
    pub classify: ClassifyConfig,
    /// Worker threads for the pair fan-out; `None` uses the global
    /// default pool.
    pub jobs: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("failed to read corpus: {0}")]
    Corpus(#[from] crate::corpus::CorpusError),
    #[error("failed to load lexicon: {0}")]
    Lexicon(#[from] crate::lexicon::LexiconError),
    #[error("failed to build worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("failed to write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

fn gold_axis(gold: GoldLabel) -> Option<usize> {
    match gold {
        GoldLabel::Entailment => Some(0),
        GoldLabel::Neutral => Some(1),
        GoldLabel::Contradiction => Some(2),
        GoldLabel::Unlabeled => None,
    }
}

fn label_axis(label: Label) -> Option<usize> {
    match label {
        Label::Entailment => Some(0),
        Label::Neutral => Some(1),
        Label::Contradiction => Some(2),
        Label::Uncovered => None,
    }
}

/// Column-normalized confusion matrix over (gold, predicted) records:
/// `cell[a][p] = count(gold=a ∧ pred=p) / count(pred=p)`. Columns with
/// no predictions stay all-zero; uncovered predictions and unlabeled
/// gold values are excluded.
pub fn confusion_matrix(records: &[(GoldLabel, Label)]) -> [[f64; 3]; 3] {
    let mut counts = [[0usize; 3]; 3];
    for &(gold, pred) in records {
        if let (Some(a), Some(p)) = (gold_axis(gold), label_axis(pred)) {
            counts[a][p] += 1;
        }
    }
    let mut out = [[0.0; 3]; 3];
    for p in 0..3 {
        let column_total: usize = (0..3).map(|a| counts[a][p]).sum();
        if column_total > 0 {
            for a in 0..3 {
                out[a][p] = counts[a][p] as f64 / column_total as f64;
            }
        }
    }
    out
}

fn fraction(numerator: usize, denominator: usize) -> f64 {
    if denominator == 0 {
        0.0
    } else {
        numerator as f64 / denominator as f64
    }
}

/// Classify every pair and assemble the report. Pairs fan out across
/// the current rayon pool; the report lists them sorted by pair id.
pub fn evaluate_pairs(pairs: &[Pair], lex: &Lexicon, config: &ClassifyConfig) -> EvalReport {
    let mut evaluated: Vec<(PairReport, bool, bool, bool, bool)> = pairs
        .par_iter()
        .map(|pair| {
            let premise = SentenceInput {
                text: pair.premise_text.clone(),
                tree: Some(pair.premise_parse.clone()),
            };
            let hypothesis = SentenceInput {
                text: pair.hypothesis_text.clone(),
                tree: Some(pair.hypothesis_parse.clone()),
            };
            let verdict = classify(&premise, &hypothesis, lex, config);
            let mut rules: Vec<RuleId> = verdict
                .premise
                .applied_rules
                .iter()
                .chain(verdict.hypothesis.applied_rules.iter())
                .copied()
                .collect();
            rules.sort();
            rules.dedup();
            let report = PairReport {
                id: pair.id.clone(),
                gold: pair.gold_label,
                verdict: verdict.label,
                stage: verdict.stage,
                rules,
                premise_covered: verdict.premise.covered,
                hypothesis_covered: verdict.hypothesis.covered,
                warnings: verdict.warnings.clone(),
            };
            (
                report,
                verdict.premise.covered_raw,
                verdict.hypothesis.covered_raw,
                verdict.premise.covered,
                verdict.hypothesis.covered,
            )
        })
        .collect();
    evaluated.sort_by(|a, b| a.0.id.cmp(&b.0.id));

    let total_pairs = evaluated.len();
    let mut covered_before = 0usize;
    let mut covered_after = 0usize;
    let mut sentences_before = 0usize;
    let mut sentences_after = 0usize;
    let mut records: Vec<(GoldLabel, Label)> = Vec::with_capacity(total_pairs);
    for (report, p_raw, h_raw, p_cov, h_cov) in &evaluated {
        if *p_raw && *h_raw {
            covered_before += 1;
        }
        if *p_cov && *h_cov {
            covered_after += 1;
        }
        sentences_before += usize::from(*p_raw) + usize::from(*h_raw);
        sentences_after += usize::from(*p_cov) + usize::from(*h_cov);
        records.push((report.gold, report.verdict));
    }
    let matrix = confusion_matrix(&records);
    let per_pair: Vec<PairReport> = evaluated.into_iter().map(|entry| entry.0).collect();
    let covered_pairs = per_pair
        .iter()
        .filter(|p| p.verdict != Label::Uncovered)
        .count();

    EvalReport {
        total_pairs,
        covered_pairs,
        coverage_before_rewrite: fraction(covered_before, total_pairs),
        coverage_after_rewrite: fraction(covered_after, total_pairs),
        sentence_coverage_before_rewrite: fraction(sentences_before, total_pairs * 2),
        sentence_coverage_after_rewrite: fraction(sentences_after, total_pairs * 2),
        matrix,
        per_pair,
    }
}

impl EvalReport {
    /// Pretty-printed JSON, trailing newline included. Stable across
    /// runs with the same inputs.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// The confusion matrix as CSV: a header row, then one row per
    /// actual label E/N/C.
    pub fn matrix_csv(&self) -> String {
        let mut out = String::from("actual,pred_E,pred_N,pred_C\n");
        for (a, row) in self.matrix.iter().enumerate() {
            out.push_str(MATRIX_AXIS[a]);
            for cell in row {
                out.push_str(&format!(",{cell:.6}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Load the corpus and lexicon from disk, evaluate every labeled pair,
/// and write the JSON report (and optionally the matrix CSV).
pub fn run_eval(
    corpus: &Path,
    lexicon: &Path,
    out: &Path,
    matrix_csv: Option<&Path>,
    config: &EvalConfig,
) -> Result<(EvalReport, CorpusStats), EvalError> {
    let stats = load_jsonl(corpus)?;
    let lex = Lexicon::load(lexicon)?;
    let report = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()?
            .install(|| evaluate_pairs(&stats.pairs, &lex, &config.classify)),
        None => evaluate_pairs(&stats.pairs, &lex, &config.classify),
    };
    let write = |path: &Path, contents: &str| -> Result<(), EvalError> {
        std::fs::write(path, contents).map_err(|source| EvalError::Write {
            path: path.display().to_string(),
            source,
        })
    };
    write(out, &report.to_json())?;
    if let Some(csv_path) = matrix_csv {
        write(csv_path, &report.matrix_csv())?;
    }
    Ok((report, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        crate::lexicon::Lexicon::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/lexicon").as_path())
            .expect("bundled lexicon loads")
    }

    /// A flat constituency tree over the sentence's whitespace tokens;
    /// enough for classification tests that exercise the raw parse.
    fn flat_tree(text: &str) -> crate::corpus::ParseTree {
        use crate::corpus::ParseTree;
        let leaves: Vec<ParseTree> = text
            .split_whitespace()
            .map(|t| ParseTree::leaf("XX", t))
            .collect();
        ParseTree::node("ROOT", vec![ParseTree::node("S", leaves)])
    }

    fn pair(id: &str, gold: GoldLabel, premise: &str, hypothesis: &str) -> Pair {
        Pair {
            id: id.to_string(),
            premise_text: premise.to_string(),
            hypothesis_text: hypothesis.to_string(),
            gold_label: gold,
            premise_parse: flat_tree(premise),
            hypothesis_parse: flat_tree(hypothesis),
        }
    }

    #[test]
    fn empty_records_give_all_zero_matrix() {
        let matrix = confusion_matrix(&[]);
        assert_eq!(matrix, [[0.0; 3]; 3]);
    }

    #[test]
    fn single_correct_entailment_gives_identity_like_column() {
        let matrix = confusion_matrix(&[(GoldLabel::Entailment, Label::Entailment)]);
        assert_eq!(matrix[0][0], 1.0);
        assert_eq!(matrix[1][0], 0.0);
        assert_eq!(matrix[2][0], 0.0);
        // Other columns saw no predictions and stay zero.
        assert_eq!(matrix[0][1], 0.0);
        assert_eq!(matrix[0][2], 0.0);
    }

    #[test]
    fn columns_with_predictions_sum_to_one() {
        let records = vec![
            (GoldLabel::Entailment, Label::Entailment),
            (GoldLabel::Neutral, Label::Entailment),
            (GoldLabel::Contradiction, Label::Entailment),
            (GoldLabel::Neutral, Label::Neutral),
            (GoldLabel::Contradiction, Label::Neutral),
            (GoldLabel::Entailment, Label::Uncovered),
        ];
        let matrix = confusion_matrix(&records);
        for p in 0..2 {
            let column: f64 = (0..3).map(|a| matrix[a][p]).sum();
            assert!((column - 1.0).abs() < 1e-9, "column {p} sums to {column}");
        }
        // The uncovered record is excluded entirely.
        assert_eq!(matrix[0][0], 1.0 / 3.0);
    }

    #[test]
    fn uncovered_predictions_never_reach_the_matrix() {
        let records = vec![
            (GoldLabel::Entailment, Label::Uncovered),
            (GoldLabel::Neutral, Label::Uncovered),
        ];
        assert_eq!(confusion_matrix(&records), [[0.0; 3]; 3]);
    }

    #[test]
    fn evaluate_orders_pairs_by_id_and_counts_coverage() {
        let lex = lex();
        let pairs = vec![
            pair("b-2", GoldLabel::Entailment, "a dog runs .", "a dog runs ."),
            pair("a-1", GoldLabel::Neutral, "a dog runs .", "a cat sits ."),
            pair(
                "c-3",
                GoldLabel::Neutral,
                "John's dog runs .",
                "a dog runs .",
            ),
        ];
        let report = evaluate_pairs(&pairs, &lex, &ClassifyConfig::default());
        assert_eq!(report.total_pairs, 3);
        let ids: Vec<&str> = report.per_pair.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["a-1", "b-2", "c-3"]);
        assert_eq!(report.covered_pairs, 2);
        assert_eq!(report.coverage_before_rewrite, 2.0 / 3.0);
        assert_eq!(report.coverage_after_rewrite, 2.0 / 3.0);
        // Five of six individual sentences parse.
        assert_eq!(report.sentence_coverage_before_rewrite, 5.0 / 6.0);
        assert_eq!(report.per_pair[2].verdict, Label::Uncovered);
        assert!(!report.per_pair[2].premise_covered);
        assert!(report.per_pair[2].hypothesis_covered);
        // Entailment column: one prediction, gold entailment.
        assert_eq!(report.matrix[0][0], 1.0);
    }

    #[test]
    fn coverage_counts_match_non_uncovered_verdicts() {
        let lex = lex();
        let pairs = vec![
            pair("p1", GoldLabel::Entailment, "a dog runs .", "a dog runs ."),
            pair("p2", GoldLabel::Neutral, "a dog runs%%% .", "a dog runs ."),
        ];
        let report = evaluate_pairs(&pairs, &lex, &ClassifyConfig::default());
        let non_uncovered = report
            .per_pair
            .iter()
            .filter(|p| p.verdict != Label::Uncovered)
            .count();
        assert_eq!(report.covered_pairs, non_uncovered);
        assert!(report.covered_pairs <= report.total_pairs);
    }

    #[test]
    fn json_report_is_byte_identical_across_runs() {
        let lex = lex();
        let pairs = vec![
            pair("x1", GoldLabel::Entailment, "a woman hugs a boy .", "a person hugs a boy ."),
            pair("x2", GoldLabel::Neutral, "a dog runs .", "a cat sits ."),
        ];
        let first = evaluate_pairs(&pairs, &lex, &ClassifyConfig::default()).to_json();
        let second = evaluate_pairs(&pairs, &lex, &ClassifyConfig::default()).to_json();
        assert_eq!(first, second);
        assert!(first.ends_with('\n'));
    }

    #[test]
    fn matrix_csv_has_header_and_three_rows() {
        let lex = lex();
        let pairs = vec![pair(
            "only",
            GoldLabel::Entailment,
            "a dog runs .",
            "a dog runs .",
        )];
        let report = evaluate_pairs(&pairs, &lex, &ClassifyConfig::default());
        let csv = report.matrix_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "actual,pred_E,pred_N,pred_C");
        assert_eq!(lines[1], "E,1.000000,0.000000,0.000000");
        assert!(lines[2].starts_with("N,"));
        assert!(lines[3].starts_with("C,"));
    }

    #[test]
    fn identical_sentences_normalize_to_single_entailment_cell() {
        let lex = lex();
        let pairs = vec![pair(
            "same",
            GoldLabel::Entailment,
            "a man walks .",
            "a man walks .",
        )];
        let report = evaluate_pairs(&pairs, &lex, &ClassifyConfig::default());
        assert_eq!(report.matrix[0][0], 1.0);
        for a in 1..3 {
            assert_eq!(report.matrix[a][0], 0.0);
        }
    }

    #[test]
    fn run_eval_writes_report_and_csv() {
        let dir = tempfile::tempdir().expect("tempdir");
        let corpus_path = dir.path().join("corpus.jsonl");
        let parse = "(ROOT (S (NP (DT A) (NN dog)) (VP (VBZ runs)) (. .)))";
        let line = serde_json::json!({
            "pairID": "w1",
            "sentence1": "A dog runs.",
            "sentence2": "A dog runs.",
            "sentence1_parse": parse,
            "sentence2_parse": parse,
            "gold_label": "entailment",
        });
        std::fs::write(&corpus_path, format!("{line}\n")).expect("corpus written");
        let out = dir.path().join("report.json");
        let csv = dir.path().join("matrix.csv");
        let lexicon_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/lexicon");
        let config = EvalConfig {
            jobs: Some(2),
            ..EvalConfig::default()
        };
        let (report, stats) = run_eval(
            &corpus_path,
            &lexicon_dir,
            &out,
            Some(csv.as_path()),
            &config,
        )
        .expect("eval runs");
        assert_eq!(report.total_pairs, 1);
        assert_eq!(stats.pairs.len(), 1);
        let written = std::fs::read_to_string(&out).expect("report readable");
        assert_eq!(written, report.to_json());
        let csv_written = std::fs::read_to_string(&csv).expect("csv readable");
        assert_eq!(csv_written, report.matrix_csv());
    }
}
