use std::process::{Command, Output};

use serde_json::Value;

fn drgkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drgkit"))
        .args(args)
        .env_remove("DRGKIT_CORPUS")
        .output()
        .expect("run drgkit")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).expect(l)).collect()
}

#[test]
fn analyze_shows_exact_eigenvalues_and_multiplicities() {
    let out = drgkit(&["analyze", "{3,2,2;1,1,3}"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("theta1 = sqrt(2) (1.41421356237), m1 = 6"), "{text}");
    assert!(text.contains("v = 14"), "{text}");
}

#[test]
fn analyze_builtin_json_has_one_line_per_entry() {
    let out = drgkit(&["--format", "json", "analyze", "--builtin", "all"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out).len(), 27);
}

#[test]
fn check_reports_the_failing_condition() {
    let out = drgkit(&["check", "{3,1,2;1,1,3}"]);
    assert_eq!(out.status.code(), Some(1));
    let line = stdout(&out).lines().find(|l| l.contains("b-nonincreasing")).unwrap().to_string();
    assert!(line.trim_start().starts_with("fail"), "{line}");
}

#[test]
fn text_and_json_verdicts_agree() {
    for array in ["{3,2;1,1}", "{3,1,2;1,1,3}", "{7,6,4,4;1,1,1,6}", "{20,18,1;1,9,20}"] {
        let text = drgkit(&["check", array]);
        let json = drgkit(&["--format", "json", "check", array]);
        assert_eq!(text.status.code(), json.status.code(), "{array}");
        let report = &json_lines(&json)[0];
        let feasible = report["feasible"].as_bool().unwrap();
        let word = if feasible { "feasible=yes" } else { "feasible=no" };
        assert!(stdout(&text).contains(word), "{array}");
        assert_eq!(json.status.code(), Some(if feasible { 0 } else { 1 }));
        for entry in report["entries"].as_array().unwrap() {
            let name = entry["name"].as_str().unwrap();
            let verdict = entry["verdict"].as_str().unwrap();
            let line = stdout(&text).lines().find(|l| l.split_whitespace().nth(1) == Some(name)).unwrap().to_string();
            assert_eq!(line.split_whitespace().next(), Some(verdict), "{array} {name}");
        }
    }
}

#[test]
fn reproduce_table_one_finds_every_row() {
    let out = drgkit(&["--format", "json", "reproduce-table1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["diff"]["missing"], Value::Array(vec![]));
    assert_eq!(v["diff"]["matched"].as_array().unwrap().len(), 23);
}

#[test]
fn enumerate_streams_json_lines_and_a_summary() {
    let out = drgkit(&["--format", "json", "enumerate", "--k-min", "5", "--k-max", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    let (summary, accepted) = lines.split_last().unwrap();
    assert_eq!(summary["summary"]["accepted"].as_u64(), Some(accepted.len() as u64));
    assert!(accepted.iter().any(|l| l["array"] == "{8,6,1;1,3,8}"));
    assert!(accepted.iter().all(|l| l["verdict"] == "accepted"));
}

#[test]
fn enumerate_budget_exhaustion_exits_one() {
    let out = drgkit(&["enumerate", "--k-max", "6", "--node-budget", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn corpus_verify_builtin_passes() {
    let out = drgkit(&["corpus-verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("27/27"));
}

#[test]
fn corpus_verify_reports_mismatch_and_schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    let wrong = dir.path().join("wrong.json");
    std::fs::write(&wrong, r#"[{"name":"petersen","b":[3,2],"c":[1,1],"spectrum":[["3",1],["2",5],["-2",4]]}]"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_drgkit"))
        .arg("corpus-verify")
        .env("DRGKIT_CORPUS", &wrong)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, r#"[{"name":"bad","b":[3,2],"c":[1]}]"#).unwrap();
    let out = drgkit(&["corpus-verify", "--file", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(drgkit(&["analyze"]).status.code(), Some(2));
    assert_eq!(drgkit(&["analyze", "{3,2;1}"]).status.code(), Some(2));
    assert_eq!(drgkit(&["enumerate", "--k-min", "9", "--k-max", "4"]).status.code(), Some(2));
    assert_eq!(drgkit(&["frobnicate"]).status.code(), Some(2));
}
