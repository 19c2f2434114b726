//! `nli` — classify premise/hypothesis pairs, evaluate corpora, and
//! replay TPTP problem files against the bundled resolution prover.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use nli_core::axioms::AxiomConfig;
use nli_core::classify::{classify, ClassifyConfig, SentenceInput, Verdict};
use nli_core::corpus::parse_ptb;
use nli_core::fol::clausify_formulas;
use nli_core::fol::tptp::{parse_tptp, Role};
use nli_core::fol::{ClauseOrigin, Formula};
use nli_core::prover::{saturate, DEFAULT_CLAUSE_LIMIT};
use nli_core::report::{run_eval, EvalConfig};
use nli_core::rewrite::{RewriteConfig, RuleId};
use nli_core::Lexicon;

const DEFAULT_LEXICON: &str = "data/lexicon";
const DEFAULT_COREF_TIMEOUT_MS: u64 = 5000;

#[derive(Parser)]
#[command(
    name = "nli",
    version,
    about = "Natural-language inference over a controlled English fragment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one premise/hypothesis pair.
    Classify(ClassifyArgs),
    /// Classify every pair in a JSONL corpus and write a report.
    Eval(EvalArgs),
    /// Run the resolution prover on a TPTP problem file.
    Prove(ProveArgs),
}

/// Knobs shared by `classify` and `eval`. Command-line values override
/// the config file, which overrides built-in defaults.
#[derive(Args, Debug, Default)]
struct Knobs {
    /// TOML configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Lexicon directory (TSV files).
    #[arg(long, value_name = "DIR")]
    lexicon: Option<PathBuf>,

    /// Clause-creation budget per prover call.
    #[arg(long, value_name = "N")]
    clause_limit: Option<usize>,

    /// Rules to disable: any of R1..R8 (rewriting) and S1, S2 (axioms).
    #[arg(long, value_name = "RULES", value_delimiter = ',')]
    disable_rule: Vec<String>,

    /// Generate implication-only closed-world axioms.
    #[arg(long)]
    weak_cwa: bool,

    /// Coreference service URL; on failure the built-in resolver runs.
    #[arg(long, value_name = "URL")]
    coref_endpoint: Option<String>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// Premise sentence.
    #[arg(long, value_name = "SENTENCE")]
    premise: String,

    /// Hypothesis sentence.
    #[arg(long, value_name = "SENTENCE")]
    hypothesis: String,

    /// Premise constituency parse (PTB bracketing).
    #[arg(long, value_name = "PTB")]
    premise_parse: Option<String>,

    /// Hypothesis constituency parse (PTB bracketing).
    #[arg(long, value_name = "PTB")]
    hypothesis_parse: Option<String>,

    /// Write the pair's TPTP problem files into this directory.
    #[arg(long, value_name = "DIR")]
    dump_tptp: Option<PathBuf>,

    #[command(flatten)]
    knobs: Knobs,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// JSONL corpus (SNLI layout).
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,

    /// JSON report output path.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,

    /// Also write the confusion matrix as CSV.
    #[arg(long, value_name = "FILE")]
    matrix_csv: Option<PathBuf>,

    /// Worker threads for the pair fan-out.
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,

    #[command(flatten)]
    knobs: Knobs,
}

#[derive(Args, Debug)]
struct ProveArgs {
    /// TPTP problem file; conjectures are negated before saturation.
    #[arg(long, value_name = "FILE")]
    tptp: PathBuf,

    /// Clause-creation budget.
    #[arg(long, value_name = "N")]
    clause_limit: Option<usize>,

    /// TOML configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

/// Optional values read from a TOML config file.
#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    lexicon: Option<PathBuf>,
    clause_limit: Option<usize>,
    disable_rules: Option<Vec<String>>,
    weak_cwa: Option<bool>,
    coref_endpoint: Option<String>,
    coref_timeout_ms: Option<u64>,
    jobs: Option<usize>,
}

/// A failure, tagged with the exit code it should produce.
enum CliError {
    /// Bad invocation: exit code 2.
    Usage(String),
    /// Failure while running: exit code 1.
    Runtime(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }

    fn runtime(msg: impl std::fmt::Display) -> CliError {
        CliError::Runtime(msg.to_string())
    }
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::runtime(format!("bad config {}: {e}", path.display())))
}

/// Everything the subcommands need after merging CLI flags, the config
/// file, and defaults.
struct Resolved {
    classify: ClassifyConfig,
    lexicon: PathBuf,
    jobs: Option<usize>,
}

/// One `--disable-rule` entry: a rewrite rule or an axiom generator.
enum Disable {
    Rewrite(RuleId),
    S1,
    S2,
}

fn parse_disable(name: &str) -> Result<Disable, String> {
    let upper = name.trim().to_ascii_uppercase();
    match upper.as_str() {
        "S1" => Ok(Disable::S1),
        "S2" => Ok(Disable::S2),
        _ => upper
            .parse::<RuleId>()
            .map(Disable::Rewrite)
            .map_err(|_| format!("unknown rule {name:?} (expected R1..R8, S1, or S2)")),
    }
}

fn resolve(knobs: &Knobs, cli_jobs: Option<usize>) -> Result<Resolved, CliError> {
    let file = load_file_config(knobs.config.as_deref())?;

    let mut rewrite = RewriteConfig::default();
    let mut axioms = AxiomConfig::default();

    // The config file's rule list applies only when the flag is absent.
    let (disable_list, from_file): (Vec<String>, bool) = if knobs.disable_rule.is_empty() {
        (file.disable_rules.clone().unwrap_or_default(), true)
    } else {
        (knobs.disable_rule.clone(), false)
    };
    for name in &disable_list {
        let parsed = parse_disable(name).map_err(|msg| {
            if from_file {
                CliError::runtime(format!("config disable_rules: {msg}"))
            } else {
                CliError::usage(format!("--disable-rule: {msg}"))
            }
        })?;
        match parsed {
            Disable::Rewrite(rule) => rewrite = rewrite.disable(rule),
            Disable::S1 => axioms.s1 = false,
            Disable::S2 => axioms.s2 = false,
        }
    }

    axioms.weak_cwa = knobs.weak_cwa || file.weak_cwa.unwrap_or(false);

    let endpoint = knobs
        .coref_endpoint
        .clone()
        .or_else(|| file.coref_endpoint.clone());
    if let Some(url) = endpoint {
        let timeout =
            Duration::from_millis(file.coref_timeout_ms.unwrap_or(DEFAULT_COREF_TIMEOUT_MS));
        rewrite = rewrite.with_endpoint(url, timeout);
    }

    let classify = ClassifyConfig {
        rewrite,
        axioms,
        clause_limit: knobs.clause_limit.or(file.clause_limit),
        record_tptp: false,
    };
    let lexicon = knobs
        .lexicon
        .clone()
        .or(file.lexicon)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_LEXICON));
    Ok(Resolved {
        classify,
        lexicon,
        jobs: cli_jobs.or(file.jobs),
    })
}

fn load_lexicon(dir: &Path) -> Result<Lexicon, CliError> {
    Lexicon::load(dir)
        .map_err(|e| CliError::runtime(format!("cannot load lexicon {}: {e}", dir.display())))
}

fn parse_tree_arg(which: &str, ptb: &str) -> Result<nli_core::ParseTree, CliError> {
    parse_ptb(ptb).map_err(|e| CliError::usage(format!("--{which}: invalid PTB parse: {e}")))
}

fn rules_line(rules: &[RuleId]) -> String {
    if rules.is_empty() {
        "-".to_string()
    } else {
        rules
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn print_verdict(verdict: &Verdict) {
    println!("label: {}", verdict.label.as_str());
    println!("stage: {}", verdict.stage.as_str());
    for (name, side) in [("premise", &verdict.premise), ("hypothesis", &verdict.hypothesis)] {
        let coverage = if side.covered {
            if side.covered_raw {
                "covered"
            } else {
                "covered after rewriting"
            }
        } else {
            "uncovered"
        };
        println!("{name}: {coverage}");
        println!("  text: {}", side.text);
        println!("  rules: {}", rules_line(&side.applied_rules));
    }
    if verdict.prover_stats.is_empty() {
        println!("prover calls: none");
    } else {
        println!("prover calls:");
        for call in &verdict.prover_stats {
            println!(
                "  {} {}: {} ({} clauses created)",
                call.stage.as_str(),
                match call.check {
                    nli_core::classify::Check::Entailment => "entailment",
                    nli_core::classify::Check::Contradiction => "contradiction",
                    nli_core::classify::Check::Consistency => "consistency",
                },
                call.status.as_str(),
                call.clauses_created
            );
        }
    }
    for warning in &verdict.warnings {
        eprintln!("warning: {warning}");
    }
}

fn cmd_classify(args: &ClassifyArgs) -> Result<(), CliError> {
    if args.premise.trim().is_empty() {
        return Err(CliError::usage("--premise must not be empty"));
    }
    if args.hypothesis.trim().is_empty() {
        return Err(CliError::usage("--hypothesis must not be empty"));
    }
    let mut resolved = resolve(&args.knobs, None)?;
    resolved.classify.record_tptp = args.dump_tptp.is_some();
    let lex = load_lexicon(&resolved.lexicon)?;

    let premise = SentenceInput {
        text: args.premise.clone(),
        tree: args
            .premise_parse
            .as_deref()
            .map(|ptb| parse_tree_arg("premise-parse", ptb))
            .transpose()?,
    };
    let hypothesis = SentenceInput {
        text: args.hypothesis.clone(),
        tree: args
            .hypothesis_parse
            .as_deref()
            .map(|ptb| parse_tree_arg("hypothesis-parse", ptb))
            .transpose()?,
    };

    let verdict = classify(&premise, &hypothesis, &lex, &resolved.classify);
    print_verdict(&verdict);

    if let Some(dir) = &args.dump_tptp {
        match &verdict.tptp {
            Some(dump) => {
                std::fs::create_dir_all(dir).map_err(|e| {
                    CliError::runtime(format!("cannot create {}: {e}", dir.display()))
                })?;
                let write = |name: &str, contents: &str| -> Result<(), CliError> {
                    let path = dir.join(name);
                    std::fs::write(&path, contents).map_err(|e| {
                        CliError::runtime(format!("cannot write {}: {e}", path.display()))
                    })?;
                    println!("tptp: {}", path.display());
                    Ok(())
                };
                write("entailment.p", &dump.entailment)?;
                write("contradiction.p", &dump.contradiction)?;
            }
            None => eprintln!("warning: no TPTP dump produced (pair not covered)"),
        }
    }
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let resolved = resolve(&args.knobs, args.jobs)?;
    let config = EvalConfig {
        classify: resolved.classify,
        jobs: resolved.jobs,
    };
    let (report, stats) = run_eval(
        &args.corpus,
        &resolved.lexicon,
        &args.out,
        args.matrix_csv.as_deref(),
        &config,
    )
    .map_err(CliError::runtime)?;

    for (line_no, reason) in &stats.line_errors {
        eprintln!("warning: corpus line {line_no} skipped: {reason}");
    }
    println!(
        "pairs: {} ({} unlabeled skipped, {} malformed lines)",
        report.total_pairs,
        stats.skipped_unlabeled,
        stats.line_errors.len()
    );
    println!(
        "pair coverage: {:.4} before rewriting, {:.4} after",
        report.coverage_before_rewrite, report.coverage_after_rewrite
    );
    println!(
        "sentence coverage: {:.4} before rewriting, {:.4} after",
        report.sentence_coverage_before_rewrite, report.sentence_coverage_after_rewrite
    );
    println!("report: {}", args.out.display());
    if let Some(csv) = &args.matrix_csv {
        println!("matrix: {}", csv.display());
    }
    Ok(())
}

fn cmd_prove(args: &ProveArgs) -> Result<(), CliError> {
    let file = load_file_config(args.config.as_deref())?;
    let limit = args
        .clause_limit
        .or(file.clause_limit)
        .unwrap_or(DEFAULT_CLAUSE_LIMIT);
    let text = std::fs::read_to_string(&args.tptp).map_err(|e| {
        CliError::runtime(format!("cannot read {}: {e}", args.tptp.display()))
    })?;
    let statements = parse_tptp(&text)
        .map_err(|e| CliError::runtime(format!("bad TPTP in {}: {e}", args.tptp.display())))?;
    if statements.is_empty() {
        return Err(CliError::runtime(format!(
            "{} contains no statements",
            args.tptp.display()
        )));
    }
    let inputs: Vec<(Formula, ClauseOrigin)> = statements
        .into_iter()
        .map(|s| match s.role {
            Role::Conjecture => (Formula::not(s.formula), ClauseOrigin::NegatedHypothesis),
            Role::Axiom => (s.formula, ClauseOrigin::Premise),
        })
        .collect();
    let clauses = clausify_formulas(&inputs)
        .map_err(|e| CliError::runtime(format!("cannot clausify: {e}")))?;
    let result = saturate(&clauses, limit);
    println!("status: {}", result.status.as_str());
    println!("clauses created: {}", result.clauses_created);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Prove(args) => cmd_prove(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
