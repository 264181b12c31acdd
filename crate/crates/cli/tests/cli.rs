use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_goeritz");

fn goeritz(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn goeritz_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(goeritz_cli::SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(doc: &Value) {
    let v = validator();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{}: {e}", e.instance_path())).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

#[test]
fn extended_decision_reports_swapped_block() {
    let out = goeritz(&["--json", "decide", "--k", "12,-5,17,5", "--kp", "12,-7,19,7", "--extended"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_valid(&doc);
    let r = &doc["report"];
    assert_eq!(r["kind"], "decide-extended");
    assert_eq!(r["plain"]["outcome"], "NotEquivalent");
    assert_eq!(r["epsilon"]["outcome"], "Equivalent");
    assert_eq!(r["epsilon"]["witnesses"][0]["block"], json!([[1, 1], [2, 1]]));
    assert_eq!(r["epsilon"]["witnesses"][0]["d"], -1);
}

#[test]
fn text_outputs() {
    let out = goeritz(&["verify-relators"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("13/13 relators map to identity"));

    let out = goeritz(&["sp", "--vector", "1,0,0,0"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0");

    let out = goeritz(&["decide", "--k", "5,-2,2,2", "--kp", "5,-3,3,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("NotEquivalent (failed: gcd_second)"));
}

#[test]
fn exit_codes() {
    assert_eq!(goeritz(&["decide", "--k", "1,2,x,4", "--kp", "1,1,1,1"]).status.code(), Some(2));
    assert_eq!(goeritz(&["decide", "--k", "1,2,3", "--kp", "1,1,1,1"]).status.code(), Some(2));
    assert_eq!(goeritz(&["nonsense"]).status.code(), Some(2));
    assert_eq!(goeritz(&[]).status.code(), Some(2));
    assert_eq!(goeritz(&["factor", "--block", "2,0,0,2"]).status.code(), Some(2));
    assert_eq!(goeritz(&["case", "--q", "2", "--m", "1"]).status.code(), Some(2));
    assert_eq!(goeritz(&["word-eval", "--word", "a z"]).status.code(), Some(2));
    assert_eq!(goeritz(&["decide", "--k", "1,1,1,-1", "--kp", "1,1,1,-1"]).status.code(), Some(2));
    assert_eq!(goeritz(&["sp", "--vector", "9223372036854775807,0,2,0"]).status.code(), Some(3));
    assert_eq!(goeritz(&["--help"]).status.code(), Some(0));
}

#[test]
fn errors_carry_positions() {
    let out = goeritz(&["--json", "word-eval", "--word", "a b q"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json_of(&out);
    assert_valid(&doc);
    assert_eq!(doc["error"]["kind"], "parse");
    assert_eq!(doc["error"]["position"], 4);

    let out = goeritz(&["--json", "sp", "--vector", "1,2,,4"]);
    let doc = json_of(&out);
    assert_eq!(doc["error"]["position"], 4);
}

#[test]
fn every_report_kind_validates() {
    let cases: &[&[&str]] = &[
        &["sp", "--vector", "12,-5,17,5"],
        &["decide", "--k", "12,-5,17,5", "--kp", "12,-5,17,5"],
        &["decide", "--k", "2,3,5,7", "--kp", "3,2,7,5"],
        &["decide", "--k", "12,-5,17,5", "--kp", "12,-7,19,7", "--zero-slope-screen"],
        &["decide", "--k", "2,-6,9,3", "--kp", "3,-6,4,2", "--zero-slope-screen"],
        &["screen", "--k", "2,-6,9,3", "--kp", "2,-12,7,1"],
        &["screen", "--k", "1,0,0,1", "--kp", "1,0,0,1"],
        &["factor", "--block", "1,1,2,1"],
        &["factor", "--block", "-1,0,0,-1"],
        &["word-eval", "--word", "case_g", "--vector", "12,-5,17,5"],
        &["word-eval", "--word", "e d^-3"],
        &["verify-relators"],
        &["ttk", "--p", "17", "--q", "12", "--r", "5", "--n", "-1"],
        &["case", "--q", "12", "--m", "5"],
        &["case", "--q", "7", "--m", "1"],
        &["sweep", "--qmax", "10"],
        &["--metadata", "sp", "--vector", "1,2,3,4"],
    ];
    for args in cases {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let out = goeritz(&full);
        let doc = json_of(&out);
        assert_valid(&doc);
        let expected = if doc.get("error").is_some() { 2 } else { 0 };
        assert_eq!(out.status.code(), Some(expected), "{args:?}");
    }
}

#[test]
fn schema_flag_prints_the_schema() {
    let out = goeritz(&["--schema"]);
    assert_eq!(out.status.code(), Some(0));
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    let shipped: Value =
        serde_json::from_str(&std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json")).unwrap())
            .unwrap();
    assert_eq!(printed, shipped);
}

#[test]
fn batch_isolates_failures_and_keeps_order() {
    let input = json!({"items": [
        {"op": "decide", "k": [5, -2, 2, 2], "kp": [5, -3, 3, 3]},
        {"op": "decide-extended", "k": [12, -5, 17, 5], "kp": [12, -7, 19, 7]},
        {"op": "sp", "vector": [1, 2, 3]},
        {"op": "screen", "k": [2, -6, 9, 3], "kp": [3, -6, 4, 2]},
        {"op": "no-such-op"},
        {"op": "factor", "block": [[2, 0], [0, 2]]},
        {"op": "sp", "vector": [9223372036854775807i64, 0, 2, 0]},
        {"op": "verify-relators"},
        {"op": "case", "q": 5, "m": 2},
        {"op": "ttk", "p": 7, "q": 5, "r": 2, "n": -1}
    ]});
    let out = goeritz_stdin(&["--json", "batch", "-"], &input.to_string());
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_valid(&doc);
    let items = doc["report"]["items"].as_array().unwrap();
    assert_eq!(items.len(), 10);
    for (i, item) in items.iter().enumerate() {
        assert_eq!(item["index"], i);
        assert_eq!(item["input"], input["items"][i]);
    }
    let errors: Vec<usize> = items.iter().enumerate().filter(|(_, x)| x.get("error").is_some()).map(|(i, _)| i).collect();
    assert_eq!(errors, vec![2, 4, 5, 6]);
    assert_eq!(items[6]["error"]["kind"], "arithmetic");
    assert_eq!(
        doc["report"]["summary"],
        json!({"total": 10, "equivalent": 1, "not_equivalent": 1, "undecidable": 1, "other": 3, "errors": 4})
    );
}

#[test]
fn batch_from_file_and_bare_array() {
    let dir = std::env::temp_dir().join(format!("goeritz-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("batch.json");
    std::fs::write(&path, r#"[{"op":"sp","vector":[1,0,0,0]}]"#).unwrap();
    let out = goeritz(&["--json", "batch", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["report"]["items"][0]["result"]["split_product"], 0);

    let empty = goeritz_stdin(&["--json", "batch"], "[]");
    let doc = json_of(&empty);
    assert_valid(&doc);
    assert_eq!(doc["report"]["summary"]["total"], 0);

    assert_eq!(goeritz_stdin(&["batch"], "{not json").status.code(), Some(2));
    assert_eq!(goeritz(&["batch", "/nonexistent/batch.json"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_across_runs_and_thread_counts() {
    let input = json!((0..40)
        .map(|i| json!({"op": "decide-extended", "k": [12, -5, 17, 5], "kp": [12 + i % 3, -7, 19, 7]}))
        .collect::<Vec<_>>())
    .to_string();
    let runs: Vec<Vec<u8>> = ["1", "4", "4"]
        .iter()
        .map(|t| {
            let mut child = Command::new(BIN)
                .args(["--json", "batch"])
                .env("GOERITZ_THREADS", t)
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .spawn()
                .unwrap();
            child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
            child.wait_with_output().unwrap().stdout
        })
        .collect();
    assert!(!runs[0].is_empty());
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[1], runs[2]);

    let sweep: Vec<_> = (0..2).map(|_| goeritz(&["--json", "sweep", "--qmax", "15"]).stdout).collect();
    assert_eq!(sweep[0], sweep[1]);
}

#[test]
fn bad_thread_override_is_a_usage_error() {
    let out = Command::new(BIN).args(["verify-relators"]).env("GOERITZ_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["goeritz", "--json", "ttk", "--p", "17", "--q", "12", "--r", "5", "--n", "-1"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = goeritz_cli::run(args, &mut std::io::empty(), &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, goeritz(&args[1..]).stdout);
    assert_eq!(serde_json::from_slice::<Value>(&out).unwrap()["report"]["vector"], json!([12, -5, 17, 5]));
}
