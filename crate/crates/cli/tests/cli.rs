use std::process::Command;

use clap::Parser;
use serde_json::Value;
use truthpred_cli::{run, run_with, Cli};
use truthpred_core::engine::{Evaluator, Semantics, Verdict};
use truthpred_core::norms::CHECK_IDS;
use truthpred_core::object::ObjectLanguage;
use truthpred_core::syntax::{parse, Connective, Sentence};

fn truthpred(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_truthpred"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn cli(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("truthpred").chain(args.iter().copied())).unwrap()
}

#[test]
fn eval_verdicts_and_exit_codes() {
    assert_eq!(
        truthpred(&["eval", "existsT"]),
        (0, "True (stage 1)\n".into(), String::new())
    );
    assert_eq!(
        truthpred(&["eval", "forallT"]),
        (0, "False (stage 1)\n".into(), String::new())
    );
    assert_eq!(
        truthpred(&["eval", "T[17]"]),
        (3, "OutsideL0\n".into(), String::new())
    );
    let o = run(&cli(&["eval", "T[#'T[#'P.ev(1)']']"]));
    assert_eq!((o.code, o.stdout.as_str()), (0, "False (stage 2)\n"));
}

#[test]
fn eval_rejects_bad_input() {
    let (code, _, err) = truthpred(&["eval", "(existsT &"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"), "{err}");
    let (code, _, err) = truthpred(&["eval", "P.odd(1)"]);
    assert_eq!(code, 2);
    assert!(err.contains("odd"), "{err}");
    assert_eq!(truthpred(&["eval", "P.ev(7)"]).0, 2);
}

#[test]
fn eval_json() {
    let o = run(&cli(&["eval", "--format", "json", "!T[#'forallT']"]));
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "True");
    assert_eq!(v["stage"], 2);
    assert_eq!(v["sentence"], "!T[#'forallT']");
}

#[test]
fn saturate_default_depth() {
    let o = run(&cli(&["saturate", "--format", "json"]));
    assert_eq!(o.code, 0);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert!(v["fixed_point_stage"].as_u64().unwrap() >= 2);
    assert_eq!(v["consistent"], true);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn saturate_depth_one_stages() {
    let o = run(&cli(&["saturate", "--depth", "1", "--format", "json"]));
    assert_eq!(o.code, 0);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    let stages: Vec<u64> = v["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert!(stages.len() >= 2);
    let k = v["fixed_point_stage"].as_u64().unwrap() as usize;
    assert!(stages[..=k].windows(2).all(|w| w[0] < w[1]));
    assert!(stages[k..].iter().all(|&s| s == stages[k]));
}

#[test]
fn missing_model_names_the_path() {
    let (code, _, err) = truthpred(&["saturate", "--model", "/no/such/model.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("/no/such/model.json"), "{err}");
}

#[test]
fn config_errors() {
    assert_eq!(run(&cli(&["saturate", "--depth", "0"])).code, 2);
    let o = run(&cli(&["saturate", "--cap", "500"]));
    assert_eq!(o.code, 4);
    assert!(o.stderr.contains("500"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"domain": [], "predicates": {}}"#).unwrap();
    assert_eq!(
        run(&cli(&["saturate", "--model", bad.to_str().unwrap()])).code,
        2
    );
}

#[test]
fn custom_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(
        &path,
        r#"{"domain": ["a", "b"], "predicates": {"R": {"dom": ["a", "b"], "true_at": ["a", "b"]}}}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(run(&cli(&["classify", "R", "--model", p])).stdout, "P1\n");
    let o = run(&cli(&["eval", "forallTP P.R", "--model", p]));
    assert_eq!(o.stdout, "True (stage 1)\n");
}

#[test]
fn classify_predicates() {
    for (p, c) in [("refl", "P1\n"), ("never", "P2\n"), ("ev", "P3\n")] {
        assert_eq!(run(&cli(&["classify", p])).stdout, c);
    }
    assert_eq!(run(&cli(&["classify", "odd"])).code, 2);
}

#[test]
fn explain_traces() {
    let o = run(&cli(&["explain", "T[#'P.ev(2)']"]));
    assert_eq!(o.code, 0);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert!(
        lines[1].contains("D1(U)") && lines[1].contains("stage 1"),
        "{}",
        o.stdout
    );
    assert!(lines[2].contains("P.ev(2)") && lines[2].contains("W") && lines[2].contains("stage 0"));

    let o = run(&cli(&["explain", "--format", "json", "!!existsT"]));
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["steps"][0]["rule"], "G^0");
    assert_eq!(v["steps"][1]["sentence"], "existsT");

    let o = run(&cli(&["explain", "P.ev(1)"]));
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("false"));

    assert_eq!(truthpred(&["explain", "T[17]"]).0, 3);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&cli(&[
        "saturate",
        "--depth",
        "1",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]));
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["consistent"], true);
}

#[test]
fn norms_json_schema() {
    let o = run(&cli(&[
        "norms", "--depth", "2", "--size", "2", "--format", "json",
    ]));
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    let norms = v["norms"].as_object().unwrap();
    let keys: Vec<&String> = norms.keys().collect();
    assert_eq!(keys.len(), 10);
    for k in 1..=10 {
        let s = norms[&format!("n{k}")].as_str().unwrap();
        let expected = if [2, 6, 10].contains(&k) {
            "ASSERTED"
        } else {
            "VERIFIED"
        };
        assert_eq!(s, expected, "n{k}");
    }
    let checks = v["checks"].as_array().unwrap();
    let ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, CHECK_IDS);
    for c in checks {
        assert!(c["universe"].as_u64().unwrap() > 0);
        assert_eq!(c["pass"], true);
        assert!(c["counterexamples"].as_array().unwrap().is_empty());
        assert_eq!(c.as_object().unwrap().len(), 4);
    }
}

/// Reads `A -> B` as `A | B`.
struct FlippedImplication<'a>(Evaluator<'a>);

impl Semantics for FlippedImplication<'_> {
    fn verdict(&self, s: &Sentence) -> Verdict {
        match s {
            Sentence::Binary(Connective::Implies, a, b) => {
                self.0.verdict(&Sentence::or((**a).clone(), (**b).clone()))
            }
            _ => self.0.verdict(s),
        }
    }

    fn language(&self) -> &dyn ObjectLanguage {
        self.0.language()
    }
}

#[test]
fn mutated_engine_fails_norms() {
    let o = run_with(
        &cli(&["norms", "--depth", "2", "--size", "2", "--format", "json"]),
        |lang| Box::new(FlippedImplication(Evaluator::new(lang))),
    );
    assert_eq!(o.code, 5);
    assert!(o.stderr.contains("check t4 failed"), "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["norms"]["n7"], "FAILED");
    let t4 = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "t4")
        .unwrap();
    let ranks: Vec<u32> = t4["counterexamples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| parse(s.as_str().unwrap()).unwrap().rank())
        .collect();
    assert!(!ranks.is_empty());
    // An implication between primes is the smallest possible failure.
    assert_eq!(ranks[0], 1);
    assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
}
