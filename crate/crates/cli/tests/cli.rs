use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn trophil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trophil"))
        .args(args)
        .env_remove("TROP_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn hilbert_both_for_0_1_0() {
    let o = trophil(&["hilbert", "--vector", "0,1,0", "--s-max", "12", "--method", "both"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["H"], "1/4");
    assert_eq!(v["period"], 4);
    assert_eq!(v["method"], "BOTH");
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 12);
    for pair in &samples[2..] {
        let s = pair[0].as_u64().unwrap();
        // affine dimension: one more than the projective ceil(s/4)
        assert_eq!(pair[1].as_u64().unwrap(), s.div_ceil(4) + 1);
    }
    assert_eq!(v["oracleSamples"], v["samples"]);
}

#[test]
fn hilbert_csv_columns() {
    let o = trophil(&["hilbert", "--vector", "0,0,0", "--s-max", "6", "--method", "graph", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,d_oracle,d_graph,r(s)");
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[6], "6,,3,1");

    let o = trophil(&["hilbert", "--vector", "0,0,0", "--s-max", "4", "--method", "oracle", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(4), Some("4,3,,"));
}

#[test]
fn newton_of_0_inf_0() {
    let o = trophil(&["newton", "--vector", "0,inf,0"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["regular"], true);
    assert_eq!(v["vertices"], serde_json::json!([[0, 0], [2, 0]]));
}

#[test]
fn entropy_of_all_zero_quartic() {
    let o = trophil(&["entropy", "--vector", "0,0,0,0", "--method", "graph"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["H"], "1/2");
    let o = trophil(&["entropy", "--vector", "0,0,0,0", "--method", "graph", "--format", "text"]);
    assert_eq!(stdout(&o), "1/2\n");
}

#[test]
fn entropy_both_reports_the_oracle_bracket() {
    let o = trophil(&["entropy", "--vector", "0,1,0", "--method", "both"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["H"], "1/4");
    assert_eq!(v["withinUpperBound"], true);
    assert!(v["oracleBracket"].is_array());
}

#[test]
fn graph_formats() {
    let o = trophil(&["graph", "--vector", "0,0,0"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("digraph"));
    let v = json(&trophil(&["graph", "--vector", "0,0,0", "--format", "json"]));
    assert_eq!(v["V"], 11);
    let rigid = v["rigid"].as_u64().unwrap();
    let aug = v["augmenting"].as_u64().unwrap();
    assert_eq!(rigid + aug, v["E"].as_u64().unwrap());
}

#[test]
fn cells_dump() {
    let v = json(&trophil(&["cells", "--vector", "0,0,0", "--s", "3"]));
    let dims: Vec<u64> = v.as_array().unwrap().iter().map(|c| c["dimension"].as_u64().unwrap()).collect();
    assert_eq!(dims, [2, 2, 2, 1]);
    assert!(v[0]["pattern"].is_array());
    assert_eq!(v[0]["witness"], serde_json::json!(["-1/4", "-1/4", "0"]));
}

#[test]
fn exit_codes_are_distinct() {
    assert_eq!(trophil(&["hilbert", "--vector", "0,x,0"]).status.code(), Some(2));
    assert_eq!(trophil(&["hilbert", "--vector", "0,0,0", "--s-max", "2"]).status.code(), Some(2));
    assert_eq!(trophil(&["hilbert", "--vector", "0,inf,1,0"]).status.code(), Some(4));
    assert_eq!(trophil(&["graph", "--vector", "0,0", "--format", "csv"]).status.code(), Some(2));
    let o = trophil(&["hilbert", "--vector", "0,1,0", "--method", "oracle", "--budget", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn env_budget_overrides_flag() {
    let o = Command::new(env!("CARGO_BIN_EXE_trophil"))
        .args(["hilbert", "--vector", "0,1,0", "--method", "oracle", "--budget", "100000000"])
        .env("TROP_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn experimental_vector_runs_on_the_oracle() {
    let o = trophil(&["hilbert", "--vector", "0,inf,1,0", "--method", "oracle", "--s-max", "6"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["method"], "ORACLE");
    assert!(v["H"].is_null());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["hilbert", "--vector", "0,1,2", "--method", "both", "--s-max", "8", "--threads", "2"];
    let a = trophil(&args);
    let b = trophil(&["hilbert", "--vector", "0,1,2", "--method", "both", "--s-max", "8", "--threads", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

fn vectors_file(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn vectors_file_runs_every_line() {
    let path = vectors_file("entropy.txt", "# corpus\n0,0,0\n\n0,1,0\n0,inf,0  # boolean\n");
    let o = trophil(&["entropy", "--vectors", path.to_str().unwrap()]);
    assert!(o.status.success());
    let hs: Vec<String> = json(&o)
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["H"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(hs, ["1/3", "1/4", "0"]);

    let o = trophil(&["hilbert", "--vectors", path.to_str().unwrap(), "--s-max", "5", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("vector,s,d_oracle,d_graph,r(s)\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 5);
}

#[test]
fn bad_line_in_vectors_file() {
    let path = vectors_file("bad.txt", "0,0\n0\n");
    let o = trophil(&["newton", "--vectors", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vector_and_file_are_exclusive() {
    let o = trophil(&["newton", "--vector", "0,0", "--vectors", "x.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_every_criterion() {
    let o = trophil(&["verify"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion")).count(), 10);
    assert!(text.ends_with("10/10 criteria passed\n"));
}
