//! End-to-end acceptance checks for the inference engine.
//!
//! Each test covers one release criterion and prints a single
//! `PASS: ...` line on success (visible with `--nocapture`; the test
//! name itself reports pass/fail in normal harness output). Failures
//! panic with a `FAIL: ...` message.

use nli_core::fol::tptp::{Role, TptpStatement};
use nli_core::fol::{clausify_formulas, parse_tptp};
use nli_core::modelcheck::{
    enumerate_clause_sat, enumerate_formula_sat, ground_unsat_witness, EnumSat,
};
use nli_core::prover::ProofStatus;
use nli_core::rewrite::RuleId;
use nli_core::{
    classify, confusion_matrix, corpus, evaluate_pairs, load_jsonl, rewrite_single, Atom,
    ClassifyConfig, Clause, ClauseOrigin, Formula, GoldLabel, Label, Lexicon, Literal,
    RewriteConfig, SentenceInput, Stage, Term,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

fn repo_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn lexicon() -> Lexicon {
    Lexicon::load(&repo_path("data/lexicon")).expect("bundled lexicon loads")
}

fn mini_corpus() -> Vec<nli_core::Pair> {
    let stats = load_jsonl(&repo_path("data/mini_snli.jsonl")).expect("mini corpus loads");
    assert!(stats.line_errors.is_empty(), "corpus must be clean");
    stats.pairs
}

fn ptb(text: &str) -> nli_core::ParseTree {
    corpus::parse_ptb(text).expect("fixture parse is well formed")
}

/// Random ground clause over a fixed signature of three unary
/// predicates and four constants (at most 12 distinct atoms).
fn random_ground_clause(rng: &mut ChaCha8Rng) -> Clause {
    let preds = ["p", "q", "r"];
    let consts = ["a", "b", "c", "d"];
    let n_lits = rng.gen_range(1..=3);
    let lits = (0..n_lits)
        .map(|_| Literal {
            positive: rng.gen_bool(0.5),
            atom: Atom::new(
                preds[rng.gen_range(0..preds.len())],
                vec![Term::constant(consts[rng.gen_range(0..consts.len())])],
            ),
        })
        .collect();
    Clause::new(lits, ClauseOrigin::Premise)
}

#[test]
fn c1_prover_agrees_with_truth_tables_on_ground_clause_sets() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE55);
    let batteries = 120;
    for case in 0..batteries {
        let n_clauses = rng.gen_range(2..=8);
        let clauses: Vec<Clause> = (0..n_clauses)
            .map(|_| random_ground_clause(&mut rng))
            .collect();
        let atom_count: BTreeSet<&Atom> = clauses
            .iter()
            .flat_map(|c| c.literals.iter().map(|l| &l.atom))
            .collect();
        assert!(atom_count.len() <= 12, "battery stays within 12 atoms");
        let semantic = enumerate_clause_sat(&clauses);
        let result = nli_core::saturate(&clauses, 50_000);
        let agreed = matches!(
            (semantic, result.status),
            (EnumSat::Unsatisfiable, ProofStatus::Unsatisfiable)
                | (EnumSat::Satisfiable, ProofStatus::Saturated)
        );
        assert!(
            agreed,
            "FAIL: case {case}: prover said {:?} but enumeration said {semantic:?} on {clauses:?}",
            result.status
        );
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "FAIL: {batteries} clause-set batteries took {elapsed:?} (budget 60s)"
    );
    println!(
        "PASS: prover matched truth-table satisfiability on {batteries} random ground clause sets in {elapsed:?}"
    );
}

/// Random quantifier-free ground formula over two unary predicates and
/// four constants (eight possible atoms).
fn random_ground_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        let preds = ["p", "q"];
        let consts = ["a", "b", "c", "d"];
        return Formula::atom(
            preds[rng.gen_range(0..preds.len())],
            vec![Term::constant(consts[rng.gen_range(0..consts.len())])],
        );
    }
    let a = random_ground_formula(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => Formula::not(a),
        1 => Formula::and(a, random_ground_formula(rng, depth - 1)),
        2 => Formula::or(a, random_ground_formula(rng, depth - 1)),
        3 => Formula::implies(a, random_ground_formula(rng, depth - 1)),
        _ => Formula::iff(a, random_ground_formula(rng, depth - 1)),
    }
}

#[test]
fn c2_clausifier_preserves_satisfiability_on_ground_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1A0);
    let cases = 500;
    for case in 0..cases {
        let formula = random_ground_formula(&mut rng, 3);
        let direct = enumerate_formula_sat(&formula);
        assert_ne!(
            direct,
            EnumSat::Unsupported,
            "generator must stay enumerable"
        );
        let clauses = clausify_formulas(&[(formula.clone(), ClauseOrigin::Premise)])
            .unwrap_or_else(|e| panic!("FAIL: case {case}: clausify error {e} on {formula:?}"));
        // An empty clause set (everything was tautological) is satisfiable.
        let clausal = if clauses.is_empty() {
            EnumSat::Satisfiable
        } else {
            enumerate_clause_sat(&clauses)
        };
        assert_eq!(
            direct, clausal,
            "FAIL: case {case}: formula {formula:?} is {direct:?} but its CNF is {clausal:?}"
        );
    }
    println!("PASS: clausifier preserved satisfiability on {cases} random ground formulas");
}

#[test]
fn c3_worked_examples_show_exact_strings_and_labels() {
    let lex = lexicon();
    let config = ClassifyConfig::default();

    // (a) progressive aspect collapses to simple present.
    let nobody = rewrite_single(
        &ptb("(ROOT (S (NP (NN Nobody)) (VP (VBZ is) (VP (VBG working))) (. .)))"),
        &lex,
        &RewriteConfig::default(),
    );
    assert_eq!(nobody.main_text(), "Nobody works.", "FAIL: example (a)");
    assert!(
        nobody.applied_rules.contains(&RuleId::R8),
        "FAIL: example (a) must be rewritten by R8, got {:?}",
        nobody.applied_rules
    );

    // (b) coreference chains collapse onto explicit names, keeping the
    // first nominal mention and appending a copy sentence for the name.
    let john = rewrite_single(
        &ptb(
            "(ROOT (S (S (NP (NNP John)) (VP (VBZ loves) (NP (PRP$ his) (NN wife)))) \
             (CC and) (S (NP (PRP she)) (VP (VBZ is) (VP (VBG laughing) \
             (PP (IN at) (NP (PRP him)))))) (. .)))",
        ),
        &lex,
        &RewriteConfig::default(),
    );
    assert_eq!(
        john.main_text(),
        "p:John loves p:John's wife and p:DefaultName0 is laughing at p:John.",
        "FAIL: example (b) main sentence"
    );
    assert_eq!(
        john.appended_texts(),
        vec!["p:DefaultName0 is p:John's wife."],
        "FAIL: example (b) appended sentence"
    );

    // (c) hypernym stage proves woman -> person.
    let c = classify(
        &SentenceInput::new("A woman hugs a boy.", None),
        &SentenceInput::new("A person hugs a boy.", None),
        &lex,
        &config,
    );
    assert_eq!(
        (c.label, c.stage),
        (Label::Entailment, Stage::WithA),
        "FAIL: example (c)"
    );

    // (d) nothing connects hugging to being happy: neutral.
    let d = classify(
        &SentenceInput::new("Two young girls hug.", None),
        &SentenceInput::new("The girls are happy.", None),
        &lex,
        &config,
    );
    assert_eq!(d.label, Label::Neutral, "FAIL: example (d)");

    println!("PASS: all four worked examples matched their expected strings and labels");
}

#[test]
fn c4_base_stage_entailments_are_all_correct_and_semantically_verified() {
    let lex = lexicon();
    let pairs = mini_corpus();
    let report = evaluate_pairs(&pairs, &lex, &ClassifyConfig::default());

    let base_entailments: Vec<_> = report
        .per_pair
        .iter()
        .filter(|p| p.verdict == Label::Entailment && p.stage == Stage::Base)
        .collect();
    assert!(
        base_entailments.len() >= 10,
        "FAIL: expected a healthy population of base-stage entailments, got {}",
        base_entailments.len()
    );
    for p in &base_entailments {
        assert_eq!(
            p.gold,
            GoldLabel::Entailment,
            "FAIL: base-stage entailment verdict on {} disagrees with gold label",
            p.id
        );
    }

    // Independent semantic witness: for every base-stage entailment,
    // the premise plus the negated hypothesis must be unsatisfiable
    // under brute-force ground model checking, with no resolution
    // involved.
    let config = ClassifyConfig {
        record_tptp: true,
        ..ClassifyConfig::default()
    };
    for p in &base_entailments {
        let pair = pairs.iter().find(|x| x.id == p.id).expect("pair exists");
        let verdict = classify(
            &SentenceInput::new(pair.premise_text.clone(), Some(pair.premise_parse.clone())),
            &SentenceInput::new(
                pair.hypothesis_text.clone(),
                Some(pair.hypothesis_parse.clone()),
            ),
            &lex,
            &config,
        );
        let dump = verdict.tptp.expect("dump recorded");
        let statements = parse_tptp(&dump.entailment).expect("dump parses back");
        let inputs: Vec<(Formula, ClauseOrigin)> = statements
            .into_iter()
            .filter_map(|TptpStatement { name, role, formula }| match role {
                // Keep only the base problem: premise plus negated
                // hypothesis, no background axioms.
                Role::Conjecture => {
                    Some((Formula::not(formula), ClauseOrigin::NegatedHypothesis))
                }
                Role::Axiom if name == "premise" => Some((formula, ClauseOrigin::Premise)),
                Role::Axiom => None,
            })
            .collect();
        assert_eq!(inputs.len(), 2, "dump has premise and hypothesis");
        let clauses = clausify_formulas(&inputs).expect("dump clausifies");
        assert_eq!(
            ground_unsat_witness(&clauses),
            EnumSat::Unsatisfiable,
            "FAIL: model checking found no refutation for base-stage entailment {}",
            p.id
        );
    }
    println!(
        "PASS: {} base-stage entailments all agree with gold labels and carry a ground model-checking witness",
        base_entailments.len()
    );
}

#[test]
fn c5_rewriting_strictly_raises_coverage_and_every_rule_rescues() {
    let lex = lexicon();
    let pairs = mini_corpus();
    let report = evaluate_pairs(&pairs, &lex, &ClassifyConfig::default());
    assert!(
        report.coverage_after_rewrite > report.coverage_before_rewrite,
        "FAIL: pair coverage did not strictly increase ({} -> {})",
        report.coverage_before_rewrite,
        report.coverage_after_rewrite
    );
    assert!(
        report.sentence_coverage_after_rewrite > report.sentence_coverage_before_rewrite,
        "FAIL: sentence coverage did not strictly increase ({} -> {})",
        report.sentence_coverage_before_rewrite,
        report.sentence_coverage_after_rewrite
    );

    // Every rewrite rule individually converts at least one bundled
    // sentence from uncovered to covered.
    let all_rules = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
    ];
    let fixtures = std::fs::read_to_string(repo_path("data/rule_fixtures.jsonl"))
        .expect("rule fixtures load");
    let mut seen = BTreeSet::new();
    for line in fixtures.lines().filter(|l| !l.trim().is_empty()) {
        let v: serde_json::Value = serde_json::from_str(line).expect("fixture line parses");
        let rule = match v["rule"].as_str().expect("rule name") {
            "R1" => RuleId::R1,
            "R2" => RuleId::R2,
            "R3" => RuleId::R3,
            "R4" => RuleId::R4,
            "R5" => RuleId::R5,
            "R6" => RuleId::R6,
            "R7" => RuleId::R7,
            "R8" => RuleId::R8,
            other => panic!("unknown rule {other}"),
        };
        let sentence = v["sentence"].as_str().expect("sentence").to_string();
        let tree = ptb(v["parse"].as_str().expect("parse"));
        let covered_with = |rewrite: RewriteConfig| {
            let config = ClassifyConfig {
                rewrite,
                ..ClassifyConfig::default()
            };
            let verdict = classify(
                &SentenceInput::new(sentence.clone(), Some(tree.clone())),
                &SentenceInput::new(sentence.clone(), Some(tree.clone())),
                &lex,
                &config,
            );
            verdict.premise.covered
        };
        let none_enabled = all_rules
            .iter()
            .fold(RewriteConfig::default(), |c, r| c.disable(*r));
        assert!(
            !covered_with(none_enabled),
            "FAIL: fixture for {rule:?} ({sentence:?}) is covered without any rewriting"
        );
        let only_this = all_rules
            .iter()
            .filter(|r| **r != rule)
            .fold(RewriteConfig::default(), |c, r| c.disable(*r));
        assert!(
            covered_with(only_this),
            "FAIL: rule {rule:?} alone does not rescue {sentence:?}"
        );
        seen.insert(rule);
    }
    assert_eq!(
        seen.len(),
        all_rules.len(),
        "FAIL: fixture file must exercise every rule, got {seen:?}"
    );
    println!(
        "PASS: coverage rose strictly ({:.4} -> {:.4} pairs, {:.4} -> {:.4} sentences) and each of the 8 rules rescued a sentence",
        report.coverage_before_rewrite,
        report.coverage_after_rewrite,
        report.sentence_coverage_before_rewrite,
        report.sentence_coverage_after_rewrite
    );
}

#[test]
fn c6_three_clause_syllogism_refutes_within_five_clauses() {
    let text = std::fs::read_to_string(repo_path("data/socrates.p")).expect("problem file loads");
    let statements = parse_tptp(&text).expect("problem parses");
    let inputs: Vec<(Formula, ClauseOrigin)> = statements
        .into_iter()
        .map(|s| match s.role {
            Role::Conjecture => (Formula::not(s.formula), ClauseOrigin::NegatedHypothesis),
            Role::Axiom => (s.formula, ClauseOrigin::Premise),
        })
        .collect();
    let clauses = clausify_formulas(&inputs).expect("problem clausifies");
    assert_eq!(clauses.len(), 3, "the syllogism is three clauses");
    let result = nli_core::saturate(&clauses, nli_core::DEFAULT_CLAUSE_LIMIT);
    assert_eq!(
        result.status,
        ProofStatus::Unsatisfiable,
        "FAIL: syllogism did not refute"
    );
    assert!(
        result.clauses_created <= 5,
        "FAIL: refutation took {} created clauses (budget 5)",
        result.clauses_created
    );
    println!(
        "PASS: syllogism refuted with status unsatisfiable in {} created clauses",
        result.clauses_created
    );
}

#[test]
fn c7_eval_reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for out in [&out_a, &out_b] {
        let status = Command::new(env!("CARGO_BIN_EXE_nli"))
            .args([
                "eval",
                "--corpus",
                repo_path("data/mini_snli.jsonl").to_str().unwrap(),
                "--lexicon",
                repo_path("data/lexicon").to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .expect("binary runs");
        assert!(status.success(), "FAIL: eval run exited {status:?}");
    }
    let a = std::fs::read(&out_a).expect("first report");
    let b = std::fs::read(&out_b).expect("second report");
    assert!(
        !a.is_empty() && a == b,
        "FAIL: consecutive eval runs differ ({} vs {} bytes)",
        a.len(),
        b.len()
    );
    println!(
        "PASS: two eval runs produced byte-identical {}-byte JSON reports",
        a.len()
    );
}

#[test]
fn c8_eval_completes_within_time_budget_single_threaded() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = dir.path().join("report.json");
    let started = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_nli"))
        .args([
            "eval",
            "--jobs",
            "1",
            "--corpus",
            repo_path("data/mini_snli.jsonl").to_str().unwrap(),
            "--lexicon",
            repo_path("data/lexicon").to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .expect("binary runs");
    let elapsed = started.elapsed();
    assert!(status.success(), "FAIL: eval run exited {status:?}");
    assert!(
        elapsed.as_secs() < 30,
        "FAIL: single-threaded eval took {elapsed:?} (budget 30s)"
    );
    println!("PASS: single-threaded eval of the full mini-corpus finished in {elapsed:?}");
}

#[test]
fn c9_confusion_matrix_reproduces_reference_ratios() {
    // Synthetic verdict multiset in fixed column ratios, denominator
    // 1000 per predicted label.
    let columns: [(Label, [(GoldLabel, usize); 3]); 3] = [
        (
            Label::Entailment,
            [
                (GoldLabel::Entailment, 383),
                (GoldLabel::Neutral, 228),
                (GoldLabel::Contradiction, 389),
            ],
        ),
        (
            Label::Neutral,
            [
                (GoldLabel::Entailment, 439),
                (GoldLabel::Neutral, 341),
                (GoldLabel::Contradiction, 220),
            ],
        ),
        (
            Label::Contradiction,
            [
                (GoldLabel::Entailment, 406),
                (GoldLabel::Neutral, 219),
                (GoldLabel::Contradiction, 375),
            ],
        ),
    ];
    let mut outcomes = Vec::new();
    for (pred, golds) in &columns {
        for (gold, n) in golds {
            for _ in 0..*n {
                outcomes.push((*gold, *pred));
            }
        }
    }
    let matrix = confusion_matrix(&outcomes);
    let expected = [
        [0.383, 0.439, 0.406],
        [0.228, 0.341, 0.219],
        [0.389, 0.220, 0.375],
    ];
    let tolerance = 1.0 / 1000.0;
    for (row, expected_row) in matrix.iter().zip(expected.iter()) {
        for (got, want) in row.iter().zip(expected_row.iter()) {
            assert!(
                (got - want).abs() <= tolerance,
                "FAIL: matrix cell {got} differs from reference {want} by more than {tolerance}"
            );
        }
    }
    println!("PASS: confusion matrix reproduced all nine reference cells within 1/1000");
}
