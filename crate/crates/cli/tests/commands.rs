use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interdict")).args(args).output().expect("binary runs")
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn path_input() -> String {
    data("path.json").display().to_string()
}

#[test]
fn ptas_on_the_path() {
    let out = run(&["solve", "--input", &path_input(), "--method", "ptas", "--eps", "0.5"]);
    assert!(out.status.success());
    let v = json_out(&out);
    assert_eq!(v["objective"], 3);
    assert_eq!(v["budget_spent"], 1);
    assert_eq!(v["method"], "ptas");
}

#[test]
fn oracle_and_tw_on_the_path() {
    for method in ["oracle", "tw"] {
        let v = json_out(&run(&["solve", "--input", &path_input(), "--method", method]));
        assert_eq!(v["objective"], 3);
        assert_eq!(v["interdiction"], serde_json::json!([0]));
    }
    let v = json_out(&run(&["oracle", "--input", &path_input()]));
    assert_eq!(v["objective"], 3);
}

#[test]
fn zero_budget_keeps_the_matching() {
    let v = json_out(&run(&["solve", "--input", &path_input(), "--method", "ptas", "--eps", "0.5", "--budget", "0"]));
    assert_eq!(v["objective"], 5);
    assert_eq!(v["interdiction"], serde_json::json!([]));
}

#[test]
fn reduce_to_planar_network() {
    let dir = tempfile::tempdir().unwrap();
    let fig = data("figure2.json").display().to_string();
    let out = run(&["reduce", "--input", &fig, "--k", "2", "--to", "planar-bcfip", "--output", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let written = json_out(&out)["written"].as_array().unwrap().len();
    assert_eq!(written, 4);
    let planar = read_json(dir.path().join("planar-bcfip.json"));
    let supply = planar["edges"].as_array().unwrap().iter().filter(|e| e["w"] == 16 && e["c"] == 16).count();
    assert_eq!(supply, 4);
    assert_eq!(planar["budget"], 288);
    let map = read_json(dir.path().join("planar-bcfip.map.json"));
    assert_eq!(map["stage"], "planar-bcfip");
}

#[test]
fn reduce_to_dual_network() {
    let dir = tempfile::tempdir().unwrap();
    let fig = data("figure2.json").display().to_string();
    let out = run(&["reduce", "--input", &fig, "--k", "2", "--to", "dspeip", "--output", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let d = read_json(dir.path().join("dspeip.json"));
    let budget = d["budget"].as_i64().unwrap();
    let edges = d["edges"].as_array().unwrap();
    assert_eq!(edges.len() % 3, 0);
    for e in edges {
        if e["id"].as_u64().unwrap() % 3 != 1 {
            assert_eq!(e["c"].as_i64().unwrap(), budget + 1);
        }
    }
}

#[test]
fn reduce_matching_instance_to_the_last_stage() {
    let dir = tempfile::tempdir().unwrap();
    let src = data("single_edge_mpmeip.json").display().to_string();
    let out = run(&["reduce", "--input", &src, "--to", "mmeip", "--output", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let x = read_json(dir.path().join("mmeip.json"));
    assert_eq!(x["edges"][0]["w"], 2);
    assert_eq!(x["kind"], "mmeip");
}

#[test]
fn verify_positive_and_negative_chains() {
    let v = json_out(&run(&["verify", "--input", &data("figure2.json").display().to_string(), "--k", "2"]));
    assert_eq!(v["passed"], true);
    assert!(v["stages"].as_array().unwrap().iter().all(|s| s["verdict"] == true));
    let v = json_out(&run(&["verify", "--input", &data("k4.json").display().to_string(), "--k", "2"]));
    assert_eq!(v["passed"], true);
    assert!(v["stages"].as_array().unwrap().iter().all(|s| s["verdict"] == false));
}

#[test]
fn corrupted_crossing_cost_fails_verification() {
    let fig = data("figure2.json").display().to_string();
    let out = run(&["verify", "--input", &fig, "--k", "2", "--corrupt-crossing", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_out(&out);
    assert_eq!(v["passed"], false);
    let failed: Vec<&str> = v["failures"].as_array().unwrap().iter().map(|f| f["check"].as_str().unwrap()).collect();
    assert!(failed.contains(&"flow cost lower bound"), "{failed:?}");
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["exit_code"], 2);
}

#[test]
fn empty_graph_verifies_vacuously() {
    let out = run(&["verify", "--input", &data("empty.json").display().to_string()]);
    assert!(out.status.success());
    assert_eq!(json_out(&out)["passed"], true);
}

#[test]
fn bench_is_repeatable() {
    let args = ["bench", "--seed", "11", "--instances", "6", "--no-timing"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance,n,m,eps,B,ptas,ptas_cost,oracle,ratio,wall_ms"));
    assert_eq!(lines.count(), 12);
}

#[test]
fn zero_budget_bench_rows_are_exact() {
    let out = run(&["bench", "--seed", "4", "--instances", "5", "--budget", "0", "--no-timing"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').nth(8), Some("1.0"), "{line}");
    }
}

#[test]
fn rejected_and_capped_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"directed":false,"vertices":[0],"edges":[{"id":0,"tail":0,"head":5,"w":1,"c":1}]}"#).unwrap();
    let out = run(&["solve", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["exit_code"], 3);
    assert!(err["detail"]["message"].is_string());

    let out = run(&["solve", "--input", &path_input(), "--method", "oracle", "--oracle-cap", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["detail"]["error"], "too_large_for_oracle");

    let out = run(&["solve", "--input", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
