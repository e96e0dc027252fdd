use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_layerfield");

const Z_HALF_THIRD: &str = r#"{"base": ["1"], "generators": [{"num": "1/2"}, {"num": "1/3"}]}"#;
const Z_G: &str = r#"{"base": ["1"], "generators": [{"sym": "g"}]}"#;
const SQRT2: &str = r#"{"m": {"poly": {"2": "1", "0": "-2"}}, "interval": ["1", "2"]}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn run_json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fail_json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert_eq!(out.status.code(), Some(1), "{args:?} should fail");
    assert!(!out.stderr.is_empty());
    serde_json::from_slice::<Value>(&out.stdout).unwrap()["error"].clone()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn decompose_half_third() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "zq.json", Z_HALF_THIRD);
    let r = run_json(&["decompose", p(&f)])["result"].clone();
    assert_eq!(r["t"], json!(0));
    assert_eq!(r["orders"], json!([6]));
    assert_eq!(r["rank"], json!("6"));
    assert_eq!(r["semifield"], json!(true));

    // classes of k1/2 + k2/3 modulo Z
    let classes: BTreeSet<i64> = (0..12i64)
        .flat_map(|k1| (0..12).map(move |k2| (k1, k2)))
        .map(|(k1, k2)| (3 * k1 + 2 * k2).rem_euclid(6))
        .collect();
    assert_eq!(classes.len().to_string(), r["rank"].as_str().unwrap());
    for g in r["regeneration"].as_array().unwrap() {
        assert!(g["free"].as_array().unwrap().is_empty());
    }
}

#[test]
fn decompose_symbolic_is_free() {
    let r = run_json(&["decompose", Z_G])["result"].clone();
    assert_eq!(r["t"], json!(1));
    assert_eq!(r["orders"], json!([]));
    assert_eq!(r["rank"], json!("inf"));
    assert_eq!(r["free"][0]["value"], json!("g"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", "{\n  \"base\": [\"1\"],\n  \"generators\": [{\"num\": \"1/2\"}\n}\n");
    let e = fail_json(&["decompose", p(&f)]);
    assert_eq!(e["kind"], json!("ParseError"));
    assert_eq!((e["line"].as_u64(), e["column"].as_u64()), (Some(4), Some(1)));
    let text = run(&["decompose", p(&f)]);
    assert!(String::from_utf8_lossy(&text.stderr).contains("line 4, column 1"));
}

#[test]
fn inconsistent_relations_forwarded() {
    let e = fail_json(&["decompose", r#"{"base": ["1"], "generators": [{"num": "1/2"}], "relations": [{"exps": [2], "beta": "1/3"}]}"#]);
    assert_eq!(e["kind"], json!("InconsistentRelations"));
}

#[test]
fn eval_thirteen_layers() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "f.json",
        r#"[{"layer": "1", "value": "0", "exp": 2}, {"layer": "1", "value": "0", "exp": 1}, {"layer": "1", "value": "0", "exp": 0}]"#,
    );
    let a = write(&dir, "a.json", r#"{"layer": "3", "value": "0"}"#);
    let r = run_json(&["eval", p(&f), p(&a)])["result"].clone();
    // all three terms tie at value 0, so the layers add: 3^2 + 3 + 1
    assert_eq!(r["layer"], json!((9 + 3 + 1).to_string()));
    assert_eq!(r["value"], json!("0"));
    assert_eq!(r["essential"], json!([0, 1, 2]));
}

#[test]
fn eval_constant_echoes() {
    let r = run_json(&["eval", r#"[{"layer": "2", "value": "5", "exp": 0}]"#, r#"{"layer": "7", "value": "-3/2"}"#])["result"].clone();
    assert_eq!((r["layer"].clone(), r["value"].clone(), r["essential"].clone()), (json!("2"), json!("5"), json!([0])));
}

#[test]
fn eval_descriptor_mismatch() {
    let f = r#"[{"layer": "1", "value": "0", "exp": 1}]"#;
    let desc = r#"{"sort": {"kind": "base"}, "value": {"base": ["1"], "generators": []}}"#;
    let e = fail_json(&["eval", f, r#"{"layer": "1", "value": "1/2"}"#, "--descriptor", desc]);
    assert_eq!(e["kind"], json!("DescriptorMismatch"));
    let e = fail_json(&["eval", r#"[{"layer": "1", "value": "1/3", "exp": 1}]"#, r#"{"layer": "1", "value": "1"}"#, "--descriptor", desc]);
    assert_eq!(e["kind"], json!("DescriptorMismatch"));
    let ok = run_json(&["eval", f, r#"{"layer": "1", "value": "2"}"#, "--descriptor", desc]);
    assert_eq!(ok["result"]["value"], json!("2"));
}

#[test]
fn closure_sqrt2_half() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", r#"{"sort": {"kind": "base"}, "value": {"base": ["1"], "generators": []}}"#);
    let a = write(&dir, "a.json", &format!(r#"{{"layer": {{"algebraic": {SQRT2}, "coeffs": ["0", "1"]}}, "value": "1/2"}}"#));
    let r = run_json(&["closure", p(&h), p(&a)])["result"].clone();
    assert_eq!(r["text"], json!("Q>0[θ], θ root of x^2 - 2 in (1, 2) ⊙ Z[1/2]"));
    assert_eq!(r["semifield"], json!(true));
    assert_eq!(r["descriptor"]["sort"]["kind"], json!("algebraic"));
    assert_eq!(r["descriptor"]["value"]["generators"], json!([{"num": "1/2"}]));
    assert_eq!(r["layerset"]["semiring"], json!(false));

    // the closure descriptor is itself a valid input, and closing again changes nothing
    let c = write(&dir, "c.json", &r["descriptor"].to_string());
    let again = run_json(&["closure", p(&c), p(&a)])["result"].clone();
    assert_eq!(again["descriptor"], r["descriptor"]);
    assert_eq!(run_json(&["semifield", p(&c)])["result"]["semifield"], json!(true));
}

#[test]
fn closure_bound_limits_tie_pairs() {
    let h = r#"{"sort": {"kind": "base"}, "value": {"base": ["1"], "generators": []}}"#;
    let a = r#"{"layer": "2", "value": "1/2"}"#;
    let pairs = |b: &str| run_json(&["closure", h, a, "--bound", b])["result"]["layerset"]["tie_pairs"].as_array().unwrap().len();
    // gaps of 2 tie: (0,2), (1,3), ...
    assert_eq!(pairs("3"), 2);
    assert_eq!(pairs("8"), 7 + 5 + 3 + 1);
    // default bound is 8
    let default = run_json(&["closure", h, a])["result"].clone();
    let eight = run_json(&["closure", h, a, "--bound", "8"])["result"].clone();
    assert_eq!(default, eight);
}

#[test]
fn kernel_examples() {
    let r = run_json(&["kernel", r#""x^2""#, r#""2""#, SQRT2])["result"].clone();
    assert_eq!(r["in_kernel"], json!(true));
    assert_eq!(r["remainder"], json!("0"));
    let r = run_json(&["kernel", r#""x^3 + 1""#, r#""2*x + 1""#, SQRT2])["result"].clone();
    assert_eq!(r["in_kernel"], json!(true));
    let r = run_json(&["kernel", r#""x""#, r#""1""#, SQRT2])["result"].clone();
    assert_eq!(r["in_kernel"], json!(false));
    assert_eq!(r["remainder"], json!("x - 1"));
    let e = fail_json(&["kernel", r#""x - 1""#, r#""1""#, SQRT2]);
    assert_eq!(e["kind"], json!("InvalidInput"));
}

#[test]
fn semifield_examples() {
    let zg = format!(r#"{{"sort": {{"kind": "base"}}, "value": {Z_G}}}"#);
    let r = run_json(&["semifield", &zg])["result"].clone();
    assert_eq!((r["semifield"].clone(), r["sort_semifield"].clone(), r["value_semifield"].clone()), (json!(false), json!(true), json!(false)));
    let free = r#"{"sort": {"kind": "free"}, "value": {"base": ["1"], "generators": []}}"#;
    assert_eq!(run_json(&["semifield", free])["result"]["semifield"], json!(false));
    let frac = r#"{"sort": {"kind": "free", "fractions": true}, "value": {"base": ["1"], "generators": [{"num": "2/3"}]}}"#;
    assert_eq!(run_json(&["semifield", frac])["result"]["semifield"], json!(true));
}

#[test]
fn torsion_degree_and_rank() {
    let r = run_json(&["torsion-degree", Z_HALF_THIRD, "--exps", "1,1"])["result"].clone();
    assert_eq!(r["degree"], json!("6"));
    assert_eq!(r["base_element"], json!("5"));
    let r = run_json(&["torsion-degree", Z_HALF_THIRD, "--exps", "-2,3"])["result"].clone();
    assert_eq!(r["degree"], json!("1"));
    let r = run_json(&["torsion-degree", Z_G, "--exps", "2"])["result"].clone();
    assert_eq!((r["degree"].clone(), r["base_element"].clone()), (json!("inf"), Value::Null));

    assert_eq!(run_json(&["rank", Z_HALF_THIRD])["result"]["rank"], json!("6"));
    assert_eq!(run_json(&["rank", Z_HALF_THIRD, "--sub", "0"])["result"]["rank"], json!("3"));
    let half = r#"{"base": ["1"], "generators": [{"num": "1/2"}]}"#;
    assert_eq!(run_json(&["rank", Z_HALF_THIRD, "--over", half])["result"]["rank"], json!("3"));
    let e = fail_json(&["rank", half, "--over", Z_HALF_THIRD]);
    assert_eq!(e["kind"], json!("Bipotent"));
    let e = fail_json(&["torsion-degree", Z_G, "--exps", "1,x"]);
    assert_eq!(e["kind"], json!("Argument"));
}

#[test]
fn stdin_input() {
    let mut child = Command::new(BIN).args(["--json", "decompose"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(Z_HALF_THIRD.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["orders"], json!([6]));
}

#[test]
fn session_bindings_and_log() {
    let dir = TempDir::new().unwrap();
    let session = json!({
        "bindings": [
            {"name": "zq", "kind": "presentation", "value": serde_json::from_str::<Value>(Z_HALF_THIRD).unwrap()},
            {"name": "sqrt2", "kind": "generator", "value": serde_json::from_str::<Value>(SQRT2).unwrap()},
            {"name": "two", "kind": "poly", "value": "2"}
        ]
    });
    let s = write(&dir, "session.json", &session.to_string());
    let r = run_json(&["--session", p(&s), "rank", "@zq"]);
    assert_eq!(r["result"]["rank"], json!("6"));
    let r = run_json(&["--session", p(&s), "kernel", r#""x^2""#, "@two", "@sqrt2"]);
    assert_eq!(r["result"]["in_kernel"], json!(true));
    let e = fail_json(&["--session", p(&s), "decompose", "@sqrt2"]);
    assert_eq!(e["kind"], json!("BindingKind"));
    let e = fail_json(&["decompose", "@zq"]);
    assert_eq!(e["kind"], json!("NoSession"));

    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap();
    assert_eq!(saved["bindings"], session["bindings"]);
    let log = saved["log"].as_array().unwrap();
    assert_eq!(log.len(), 2);
    assert_eq!(log[0], json!(["--json", "--session", p(&s), "rank", "@zq"]));
}

#[test]
fn reports_round_trip_and_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", r#"{"sort": {"kind": "base"}, "value": {"base": ["1"], "generators": []}}"#);
    let a = write(&dir, "a.json", r#"{"layer": {"free": "x + 1"}, "value": {"sym": "g"}}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec!["decompose", Z_HALF_THIRD],
        vec!["closure", p(&h), p(&a)],
        vec!["kernel", r#""x^2""#, r#""2""#, SQRT2],
        vec!["semifield", p(&h)],
        vec!["torsion-degree", Z_HALF_THIRD, "--exps", "1,0"],
        vec!["rank", Z_G],
        vec!["eval", r#"[{"layer": "1", "value": "1", "exp": 3}]"#, r#"{"layer": "2", "value": "1"}"#],
    ];
    for args in cases {
        for notes in [false, true] {
            let mut all = vec!["--json"];
            if notes {
                all.push("--notes");
            }
            all.extend_from_slice(&args);
            let first = run(&all);
            let second = run(&all);
            assert!(first.status.success(), "{args:?}");
            assert_eq!(first.stdout, second.stdout, "{args:?} not deterministic");
            let v: Value = serde_json::from_slice(&first.stdout).unwrap();
            let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
            assert_eq!(v, again);
            assert_eq!(v["command"][0], json!("--json"));
            assert_eq!(v.get("notes").is_some(), notes, "{args:?}");
            if notes {
                for n in v["notes"].as_array().unwrap() {
                    let field = n["field"].as_str().unwrap().split('.').next().unwrap();
                    assert!(v["result"].get(field).is_some(), "{args:?}: note for missing field {field}");
                }
            }
            let text = run(&all[1..]);
            assert_eq!(text.stdout, run(&all[1..]).stdout);
            assert!(String::from_utf8(text.stdout).unwrap().lines().next().unwrap().contains(args[0]));
        }
    }
}

#[test]
fn usage_errors() {
    let out = run(&["frobnicate"]);
    assert!(!out.status.success());
    let out = run(&["rank", Z_G, "--over", Z_G, "--sub", "0"]);
    assert!(!out.status.success());
    let out = run(&["decompose", "/nonexistent/p.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn results_carry_schema_fields() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas/report.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let h = r#"{"sort": {"kind": "base"}, "value": {"base": ["1"], "generators": []}}"#;
    let cases: Vec<Vec<&str>> = vec![
        vec!["decompose", Z_HALF_THIRD],
        vec!["eval", r#"[{"layer": "2", "value": "5", "exp": 0}]"#, r#"{"layer": "1", "value": "0"}"#],
        vec!["closure", h, r#"{"layer": "2", "value": "1/2"}"#],
        vec!["kernel", r#""x^2""#, r#""2""#, SQRT2],
        vec!["semifield", h],
        vec!["torsion-degree", Z_HALF_THIRD, "--exps", "1,0"],
        vec!["rank", Z_HALF_THIRD],
    ];
    for args in cases {
        let report = run_json(&args);
        let required = schema["$defs"][args[0]]["required"].as_array().unwrap();
        let got: BTreeSet<&str> = report["result"].as_object().unwrap().keys().map(String::as_str).collect();
        let want: BTreeSet<&str> = required.iter().map(|k| k.as_str().unwrap()).collect();
        assert_eq!(got, want, "{}", args[0]);
    }
    let err = fail_json(&["rank", "{"]);
    for k in schema["$defs"]["error"]["properties"]["error"]["required"].as_array().unwrap() {
        assert!(err.get(k.as_str().unwrap()).is_some());
    }
}
