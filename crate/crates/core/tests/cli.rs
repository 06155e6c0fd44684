use std::path::PathBuf;
use std::process::{Command, Output};

use fuzzint::schema;
use fuzzint::{BinaryOp, Bindings, Checker, LawId, Realization, Semicopula, Verdict};

const BIN: &str = env!("CARGO_BIN_EXE_fuzzint");

const TWO_POINT_CAP: &str = r#"{"points": ["a", "b"], "mu": {"a": "1/2", "b": "3/10", "a,b": "1"}}"#;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fuzzint-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn eval(cap: &str, f: &str, extra: &[&str]) -> Output {
    let c = scratch(&format!("cap-{}.json", cap.len() + f.len() + extra.len()), cap);
    let g = scratch(&format!("f-{}-{}.json", cap.len(), f.len() + extra.len()), f);
    let mut args = vec![
        "eval",
        "--semicopula",
        "prod",
        "--capacity",
        c.to_str().unwrap(),
        "--function",
        g.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn eval_two_point_instance() {
    let o = eval(TWO_POINT_CAP, r#"{"f": {"a": "1", "b": "2/5"}}"#, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        j,
        serde_json::json!({"value": "1/2", "argmax_t": "1", "method": "exact-threshold"})
    );

    let o = eval(
        TWO_POINT_CAP,
        r#"{"f": {"a": 0.8, "b": 0.6}}"#,
        &["--grid-step", "1/100"],
    );
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["value"], "3/5");
    assert_eq!(j["method"], "grid-oracle");

    let o = eval(TWO_POINT_CAP, r#"{"f": {"a": "1", "b": "2/5"}}"#, &["--restrict", "b"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["value"], "3/25");
}

#[test]
fn eval_float_and_text() {
    let o = eval(
        TWO_POINT_CAP,
        r#"{"f": {"a": "1", "b": "0.4"}}"#,
        &["--realization", "float", "--format", "text"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("0.5 "), "{}", stdout(&o));
}

#[test]
fn subset_keys_normalize_and_completion() {
    let cap = r#"{"points": ["a", "b"], "mu": {"b,a": "1", "a": "1/2", "b": "3/10"}}"#;
    let o = eval(cap, r#"{"f": {"a": "1", "b": "2/5"}}"#, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let empty = r#"{"points": ["a", "b"], "mu": {}, "complete": "lower-envelope"}"#;
    let o = eval(empty, r#"{"f": {"a": "1", "b": "2/5"}}"#, &[]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // μ = 0 off X, so the integral is S(min f, 1)
    assert_eq!(j["value"], "2/5");
}

#[test]
fn input_errors_exit_one_with_path() {
    let o = eval(
        r#"{"points": ["a", "b"], "mu": {"a": "1/2", "b": "oops", "a,b": "1"}}"#,
        r#"{"f": {"a": "1", "b": "0"}}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("$.mu.b"), "{}", stderr(&o));
    let o = eval(
        r#"{"points": ["a", "b"], "mu": {"a": "0.7", "b": "0.2", "a,b": "0.6"}}"#,
        r#"{"f": {"a": "1", "b": "0"}}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("mu(a) = 7/10 exceeds mu(a,b) = 3/5"),
        "{}",
        stderr(&o)
    );
    assert_eq!(run(&["check", "no-such-law"]).status.code(), Some(1));
    assert_eq!(run(&["eval"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn repro_exits_zero() {
    let o = run(&["repro"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["passed"], true);
    assert_eq!(run(&["repro", "--beta", "1"]).status.code(), Some(0));
    assert_eq!(run(&["repro", "--realization", "float"]).status.code(), Some(0));
}

#[test]
fn check_exit_codes() {
    let o = run(&["check", "shift", "--semicopula", "drastic", "--grid-step", "1/10"]);
    assert_eq!(o.status.code(), Some(2));
    let report = schema::parse_report(&stdout(&o)).unwrap();
    assert_eq!(report.verdict, Verdict::Fails);
    let o = run(&["check", "shift", "--semicopula", "prod", "--grid-step", "1/20"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "check",
        "maxitivity",
        "--semicopula",
        "lukasiewicz",
        "--cases",
        "200",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["axioms", "--op", "mean", "--grid-step", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["axioms", "--op", "lukasiewicz", "--grid-step", "1/20"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn search_then_replay() {
    let args = [
        "search",
        "--law",
        "commuting",
        "--n",
        "2",
        "--denominator",
        "10",
        "--budget",
        "100000",
        "--seed",
        "7",
        "--semicopula",
        "prod",
        "--op",
        "meet",
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(stdout(&run(&args)), text);
    let report = schema::parse_report(&text).unwrap();
    let path = scratch("search-report.json", &text);
    let replay = run(&[
        "check",
        "commuting",
        "--semicopula",
        "prod",
        "--op",
        "meet",
        "--instance",
        path.to_str().unwrap(),
    ]);
    assert_eq!(replay.status.code(), Some(2));
    let replayed = schema::parse_report(&stdout(&replay)).unwrap();
    assert_eq!(replayed.sides(), report.sides());

    let inst = report.witness.unwrap().instance.unwrap();
    let b = Bindings::new(Semicopula::product()).with_op(BinaryOp::meet());
    let again = Checker::default().check_instance(LawId::Commuting, &b, &inst).unwrap();
    assert_eq!(again.sides(), replayed.sides());
    assert_eq!(
        schema::parse_instance(&schema::to_text(&schema::instance_json(&inst)), Realization::Exact).unwrap(),
        inst
    );
}

#[test]
fn thread_cap_env() {
    let o = Command::new(BIN)
        .args(["repro"])
        .env("FUZZINT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(BIN)
        .args(["repro"])
        .env("FUZZINT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
