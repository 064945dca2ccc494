use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn rbq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbq")).args(args).output().expect("binary runs")
}

fn rbq_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbq"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn matrix_file(lambda: &str, diag: &str) -> tempfile::NamedTempFile {
    let rows: Vec<String> = (0..4)
        .map(|i| {
            let cells: Vec<String> = (0..4).map(|j| format!("\"{}\"", if i == j { diag } else { "0" })).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    temp_file(&format!("{{\"lambda\": \"{lambda}\", \"entries\": [{}]}}", rows.join(",")))
}

#[test]
fn verify_zero_matrix_passes() {
    let f = matrix_file("0", "0");
    let o = rbq(&["verify", f.path().to_str().unwrap(), "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_identity_fails_at_first_pair() {
    let f = matrix_file("0", "1");
    let o = rbq(&["--json", "verify", f.path().to_str().unwrap(), "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["rota_baxter"], false);
    assert_eq!(v["witness"]["pair"], serde_json::json!([0, 0]));
    assert_eq!(v["witness"]["defect"], "-1");
}

#[test]
fn verify_reports_membership() {
    let f = matrix_file("1", "-1");
    let o = rbq(&["--json", "verify", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!json(&o)["matches"].as_array().unwrap().is_empty());
}

#[test]
fn verify_symbolic_entries() {
    let f = temp_file(
        r#"{"lambda": "0", "entries": [["0","0","0","0"],["0","0","0","0"],["a","b","0","0"],["c","d","0","0"]]}"#,
    );
    let o = rbq(&["verify", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_input_errors_exit_2() {
    let f = temp_file("{\"lambda\": \"0\", \"entries\": [[\"0\"");
    let o = rbq(&["verify", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    let o = rbq(&["verify", "/nonexistent/matrix.json"]);
    assert_eq!(o.status.code(), Some(2));
    let f = matrix_file("0", "1+");
    let o = rbq(&["verify", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at byte 2"));
}

#[test]
fn system_zero_diff() {
    let o = rbq(&["system", "--mode", "zero", "--diff"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("58/58 matched"));
}

#[test]
fn system_lambda_diff_reports_substitution() {
    let o = rbq(&["system", "--mode", "lambda", "--diff"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("58/58 matched"));
    assert!(out.contains("(b35) typo substitution applied"));
}

#[test]
fn system_listing_only() {
    let o = rbq(&["system", "--mode", "zero"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(!out.contains("matched"));
    assert!(out.lines().any(|l| l == "a21*a22 = 0"));
}

#[test]
fn system_corpus_errors() {
    let o = rbq(&["system", "--diff", "--corpus", "/nonexistent/system_a.txt"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = temp_file("a11^2\na11*(\n");
    let o = rbq(&["system", "--diff", "--corpus", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let partial = temp_file("-2*a21*a22\n");
    let o = rbq(&["--json", "system", "--diff", "--corpus", partial.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!json(&o)["diff"]["generated_unmatched"].as_array().unwrap().is_empty());
}

#[test]
fn catalog_list() {
    let o = rbq(&["catalog", "list"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("11 weight-zero families"));
    let o = rbq(&["--json", "catalog", "list", "--weight", "zero"]);
    assert_eq!(json(&o).as_array().unwrap().len(), 11);
}

#[test]
fn catalog_verify() {
    let o = rbq(&["catalog", "verify", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(", 0 failing numerators"));
}

#[test]
fn catalog_verify_detects_broken_family() {
    let broken = temp_file(
        r#"[[family]]
id = "X-01"
weight = "zero"
display = [1]
params = ["a"]
entries = [["a", "0", "0", "0"], ["0", "0", "0", "0"], ["0", "0", "0", "0"], ["0", "0", "0", "0"]]
constraints = []
extract = [{ row = 1, col = 1, param = "a", expr = "x" }]
"#,
    );
    let o = rbq(&["catalog", "verify", "--samples", "3", "--file", broken.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn catalog_corruption_exit_2() {
    let bad = temp_file("[[family]]\nid = \"X\"\n");
    let o = rbq(&["catalog", "list", "--file", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn catalog_sweedler() {
    let o = rbq(&["catalog", "sweedler"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for n in ["(5)", "(6)", "(8)"] {
        let line = out.lines().find(|l| l.starts_with(n)).unwrap();
        assert!(line.contains("substitution"), "{line}");
    }
    assert!(out.contains("a -> -c, b -> a, c -> b+lambda"));
}

#[test]
fn search_corner_block() {
    let o = rbq(&["--json", "search", "--grid", "-1,0,1", "--support", "rows34cols12", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["candidates_tested"], 81);
    assert_eq!(v["hits"].as_array().unwrap().len(), 81);
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn search_full_weight_zero_grid() {
    let o = rbq(&["search", "--grid", "-1,0,1", "--lambda", "0", "--full"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("unmatched hits: 0"));
    assert!(out.contains("hits: 173"));
}

#[test]
fn search_probe() {
    let o = rbq(&["search", "--probe", "--trials", "1000", "--seed", "1", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("catalog instances verified: 1000/1000"));
}

#[test]
fn search_output_is_deterministic() {
    let args = ["--json", "search", "--probe", "--trials", "200", "--seed", "7", "--lambda", "1/2"];
    let a = rbq(&args);
    let b = rbq(&args);
    assert_eq!(a.stdout, b.stdout);
    let timed = rbq(&["--json", "search", "--grid", "0", "--timing"]);
    assert!(json(&timed)["elapsed_ms"].is_number());
}

#[test]
fn search_input_errors_exit_2() {
    let o = rbq_env(&["search", "--grid", "-1,0,1", "--full"], "RBQ_BUDGET", "1000");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("43046721"));
    assert_eq!(rbq(&["search", "--probe", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(rbq(&["search", "--grid", "1,x/"]).status.code(), Some(2));
    assert_eq!(rbq(&["search", "--grid", "0", "--support", "diagonal"]).status.code(), Some(2));
    assert_eq!(rbq(&["search"]).status.code(), Some(2));
    assert_eq!(rbq(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rbq_env(&["search", "--grid", "0"], "RBQ_BUDGET", "lots").status.code(), Some(2));
}

#[test]
fn json_reports_round_trip() {
    for args in [
        vec!["--json", "system", "--mode", "lambda", "--diff"],
        vec!["--json", "catalog", "sweedler"],
        vec!["--json", "search", "--grid", "-1,0,1", "--support", "0x0300"],
    ] {
        let o = rbq(&args);
        let v = json(&o);
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
    }
    let o = rbq(&["--json", "search", "--grid", "-1,0,1", "--support", "0x0300"]);
    let v = json(&o);
    let hit = &v["hits"][0]["matrix"];
    let m: rbq_core::operator::MatrixJson = serde_json::from_value(hit.clone()).unwrap();
    assert!(m.to_rational_matrix().unwrap().is_rota_baxter().holds());
}
