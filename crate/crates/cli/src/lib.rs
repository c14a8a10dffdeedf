//! Command-line front end: argument types and command runners. The binary
//! is a thin wrapper around [`run`]; tests call the runners directly.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use truthpred_core::engine::{
    explain, fixed_point, rule_name, EngineError, Evaluator, Fragment, FragmentConfig, Semantics,
    Verdict,
};
use truthpred_core::norms::{Suite, SuiteConfig};
use truthpred_core::object::{LanguageVocabulary, ObjectLanguage, ObjectModel};
use truthpred_core::syntax::{parse_checked, Name, Sentence};

/// The model used when `--model` is not given.
pub const EXAMPLE_MODEL: &str = include_str!("../../../models/example.json");

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OUTSIDE: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_NORMS: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "truthpred",
    version,
    about = "Grounded truth predicate over a finite object language"
)]
pub struct Cli {
    /// Object model (JSON); the bundled example model when omitted.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Rank bound of the fragment.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: u32,
    /// Unfolded-size bound of the fragment.
    #[arg(long, global = true, default_value_t = 4)]
    pub size: u32,
    /// Maximum number of fragment members.
    #[arg(long, global = true, default_value_t = FragmentConfig::default().cap)]
    pub cap: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a sentence.
    Eval { sentence: String },
    /// Build the fragment and compute the least fixed point.
    Saturate,
    /// Run the law checks and report the norms.
    Norms,
    /// Print the class (P1, P2 or P3) of a predicate.
    Classify { pred: String },
    /// Show the derivation that decides a sentence.
    Explain { sentence: String },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(code: i32, msg: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

pub fn load_model(cli: &Cli) -> Result<ObjectModel, String> {
    match &cli.model {
        Some(p) => ObjectModel::load(p).map_err(|e| e.to_string()),
        None => ObjectModel::from_json_str(EXAMPLE_MODEL).map_err(|e| e.to_string()),
    }
}

/// Runs `cli` with the reference evaluator.
pub fn run(cli: &Cli) -> Outcome {
    run_with(cli, |lang| Box::new(Evaluator::new(lang)))
}

/// Runs `cli` with the semantics built by `make`; saturation is unaffected.
pub fn run_with<F>(cli: &Cli, make: F) -> Outcome
where
    F: for<'a> Fn(&'a dyn ObjectLanguage) -> Box<dyn Semantics + 'a>,
{
    if cli.depth == 0 {
        return Outcome::error(EXIT_USAGE, EngineError::InvalidDepth(0));
    }
    let model = match load_model(cli) {
        Ok(m) => m,
        Err(e) => return Outcome::error(EXIT_USAGE, e),
    };
    let outcome = match &cli.command {
        Command::Eval { sentence } => cmd_eval(cli, &*make(&model), sentence),
        Command::Saturate => cmd_saturate(cli, &model),
        Command::Norms => cmd_norms(cli, &model, &*make(&model)),
        Command::Classify { pred } => cmd_classify(cli, &model, pred),
        Command::Explain { sentence } => cmd_explain(cli, &model, sentence),
    };
    match &cli.out {
        Some(path) if outcome.stderr.is_empty() || !outcome.stdout.is_empty() => {
            match std::fs::write(path, &outcome.stdout) {
                Ok(()) => Outcome {
                    stdout: String::new(),
                    ..outcome
                },
                Err(e) => Outcome::error(EXIT_USAGE, format!("{}: {e}", path.display())),
            }
        }
        _ => outcome,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn parse_in(lang: &dyn ObjectLanguage, text: &str) -> Result<Sentence, Outcome> {
    parse_checked(text, &LanguageVocabulary(lang)).map_err(|e| Outcome::error(EXIT_USAGE, e))
}

fn fragment_config(cli: &Cli) -> FragmentConfig {
    FragmentConfig {
        depth: cli.depth,
        max_size: cli.size,
        cap: cli.cap,
    }
}

fn engine_failure(e: EngineError) -> Outcome {
    let code = match e {
        EngineError::FragmentTooLarge { .. } => EXIT_CAP,
        EngineError::InvalidDepth(_) | EngineError::Vocabulary(_) => EXIT_USAGE,
        EngineError::InconsistencyDetected(_) | EngineError::NotACode(_) => EXIT_FAILURE,
    };
    Outcome::error(code, e)
}

#[derive(Serialize)]
struct EvalJson {
    schema_version: u32,
    sentence: String,
    verdict: &'static str,
    stage: Option<u32>,
}

pub fn cmd_eval(cli: &Cli, sem: &dyn Semantics, text: &str) -> Outcome {
    let s = match parse_in(sem.language(), text) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let v = sem.verdict(&s);
    let stdout = match cli.format {
        Format::Text => format!("{v}\n"),
        Format::Json => to_json(&EvalJson {
            schema_version: 1,
            sentence: s.to_string(),
            verdict: match v {
                Verdict::True(_) => "True",
                Verdict::False(_) => "False",
                Verdict::OutsideL0 => "OutsideL0",
            },
            stage: v.stage(),
        }),
    };
    let code = if v.is_decided() {
        EXIT_OK
    } else {
        EXIT_OUTSIDE
    };
    Outcome::ok(code, stdout)
}

pub fn cmd_saturate(cli: &Cli, lang: &dyn ObjectLanguage) -> Outcome {
    let fragment = match Fragment::build(lang, &fragment_config(cli)) {
        Ok(f) => f,
        Err(e) => return engine_failure(e),
    };
    let sets = match fixed_point(&fragment) {
        Ok(s) => s,
        Err(e) => return engine_failure(e),
    };
    let r = sets.report();
    let stdout = match cli.format {
        Format::Json => to_json(&r),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "fragment: {} sentences ({} core)",
                r.fragment_size, r.core_size
            );
            let _ = writeln!(s, "stages: {:?}", r.stages);
            let _ = writeln!(s, "fixed point at stage {}", r.fixed_point_stage);
            let _ = writeln!(
                s,
                "true: {}, false: {}, outside: {}",
                r.g_size, r.f_size, r.outside_l0
            );
            let _ = writeln!(s, "consistent: {}", r.consistent);
            s
        }
    };
    Outcome::ok(if r.consistent { EXIT_OK } else { EXIT_FAILURE }, stdout)
}

pub fn cmd_norms(cli: &Cli, lang: &dyn ObjectLanguage, sem: &dyn Semantics) -> Outcome {
    let fragment = match Fragment::build(lang, &fragment_config(cli)) {
        Ok(f) => f,
        Err(e) => return engine_failure(e),
    };
    let sets = match fixed_point(&fragment) {
        Ok(s) => s,
        Err(e) => return engine_failure(e),
    };
    let config = SuiteConfig {
        seed: cli.seed,
        ..SuiteConfig::default()
    };
    let report = match Suite::new(sem, &sets, config) {
        Ok(suite) => suite.report(),
        Err(e) => return Outcome::error(EXIT_USAGE, e),
    };
    let stdout = match cli.format {
        Format::Json => format!("{}\n", report.to_json()),
        Format::Text => report.to_string(),
    };
    if report.all_verified() {
        return Outcome::ok(EXIT_OK, stdout);
    }
    let mut stderr = String::new();
    for c in report.failed_checks() {
        let _ = writeln!(stderr, "check {} failed", c.id);
        for s in &c.counterexamples {
            let _ = writeln!(stderr, "  counterexample: {s}");
        }
    }
    Outcome {
        code: EXIT_NORMS,
        stdout,
        stderr,
    }
}

pub fn cmd_classify(cli: &Cli, lang: &dyn ObjectLanguage, pred: &str) -> Outcome {
    let name = match Name::new(pred) {
        Ok(n) => n,
        Err(e) => return Outcome::error(EXIT_USAGE, e),
    };
    match lang.classify(&name) {
        Ok(c) => Outcome::ok(
            EXIT_OK,
            match cli.format {
                Format::Text => format!("{c:?}\n"),
                Format::Json => to_json(&serde_json::json!({ "predicate": pred, "class": c })),
            },
        ),
        Err(e) => Outcome::error(EXIT_USAGE, e),
    }
}

#[derive(Serialize)]
struct StepJson {
    depth: usize,
    sentence: String,
    rule: String,
    stage: u32,
    level: u32,
    repeated: bool,
}

pub fn cmd_explain(cli: &Cli, lang: &dyn ObjectLanguage, text: &str) -> Outcome {
    let s = match parse_in(lang, text) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let outside = || Outcome::ok(EXIT_OUTSIDE, format!("{s} is outside L0\n"));
    if !Evaluator::new(lang).verdict(&s).is_decided() {
        return outside();
    }
    let fragment = match Fragment::from_sentences(lang, [&s], cli.cap) {
        Ok(f) => f,
        Err(e) => return engine_failure(e),
    };
    let sets = match fixed_point(&fragment) {
        Ok(x) => x,
        Err(e) => return engine_failure(e),
    };
    let Some(e) = fragment
        .index_of_sentence(&s)
        .and_then(|i| explain(&sets, i))
    else {
        return outside();
    };
    let stdout = match cli.format {
        Format::Text => e.to_string(),
        Format::Json => to_json(&serde_json::json!({
            "schema_version": 1,
            "sentence": e.sentence.to_string(),
            "value": e.value,
            "steps": e.steps.iter().map(|st| StepJson {
                depth: st.depth,
                sentence: st.sentence.to_string(),
                rule: rule_name(&st.provenance.rule),
                stage: st.provenance.stage,
                level: st.provenance.level,
                repeated: st.repeated,
            }).collect::<Vec<_>>(),
        })),
    };
    Outcome::ok(EXIT_OK, stdout)
}
