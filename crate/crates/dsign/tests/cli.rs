use std::process::{Command, Output};

use serde_json::Value;

fn dsign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsign")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_then_census_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.txt");
    let out = dsign(&["gen", "--named", "share_vertex_k4", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let census = dsign(&["census", "--in", path.to_str().unwrap(), "--json"]);
    assert_eq!(census.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&census).trim()).unwrap();
    assert_eq!(v["diversity"], 4);
    assert_eq!(v["k4"]["all_distinct"], 1);
    assert_eq!(v["triangle_signs"], "{e,a,b,c}");
}

#[test]
fn normalize_flag_switches_before_analysis() {
    let out = dsign(&["gen", "--named", "share_vertex_k4"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.txt");
    std::fs::write(&path, &out.stdout).unwrap();
    let spectrum = dsign(&["spectrum", "--in", path.to_str().unwrap(), "--normalize", "4", "--json"]);
    let v: Value = serde_json::from_str(stdout(&spectrum).trim()).unwrap();
    assert_eq!(v["circles"], 3);
    assert_eq!(v["realized"], "{a,b,c}");
}

#[test]
fn random_batch_construct_in_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("batch.jsonl");
    let out = dsign(&["gen", "--random", "7", "--seed", "3", "--count", "20", "--json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let run = dsign(&["construct", "--in", path.to_str().unwrap(), "--json", "--jobs", "2"]);
    assert_eq!(run.status.code(), Some(0));
    let reports: Vec<Value> = stdout(&run).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 20);
    for r in &reports {
        match r["status"].as_str().unwrap() {
            "constructed" => {
                assert_eq!(r["verified"], true);
                assert_eq!(r["witnesses"].as_array().unwrap().len(), 4);
            }
            "refused" => {}
            other => panic!("unexpected status {other}"),
        }
    }
}

#[test]
fn construct_trace_and_refusal() {
    let run = dsign(&["construct", "--instance", "random(8,11)", "--trace"]);
    assert_eq!(run.status.code(), Some(0));
    assert!(stdout(&run).contains("trace: "));
    let refused = dsign(&["construct", "--instance", "identity(6)"]);
    assert_eq!(refused.status.code(), Some(0));
    assert!(stdout(&refused).contains("refused"));
}

#[test]
fn spectrum_witnesses_cover_realized_signs() {
    let run = dsign(&["spectrum", "--instance", "random(6,9)", "--witness", "--json"]);
    assert_eq!(run.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&run).trim()).unwrap();
    let realized = v["realized"].as_str().unwrap().to_string();
    for w in v["witnesses"].as_array().unwrap() {
        assert!(realized.contains(w["sign"].as_str().unwrap()));
        assert_eq!(w["circle"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn verify_reports_and_exit_codes() {
    let run = dsign(&["verify", "--lemma", "key_lemma", "--scope", "exhaustive_k4", "--json"]);
    assert_eq!(run.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&run).trim()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["scanned"], 4096);
    assert_eq!(v["stats"]["all-distinct K4s"], 1536);

    let run = dsign(&["verify", "--lemma", "lemma_c", "--scope", "random(7,200)", "--seed", "4"]);
    assert_eq!(run.status.code(), Some(0));
    assert!(stdout(&run).contains("PASS lemma_c over random(7,200,4)"));

    assert_eq!(dsign(&["verify", "--lemma", "nope"]).status.code(), Some(2));
    assert_eq!(dsign(&["verify", "--lemma", "lemma11", "--scope", "exhaustive_k4"]).status.code(), Some(2));
    assert_eq!(
        dsign(&["verify", "--lemma", "lemma1", "--scope", "exhaustive_normalized(7)"]).status.code(),
        Some(2)
    );
    assert_eq!(dsign(&["verify"]).status.code(), Some(2));
}

#[test]
fn bad_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "n=3\n1 2 a\n1 3 d\n2 3 e\n").unwrap();
    let run = dsign(&["census", "--in", path.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("line 3"));
    assert_eq!(dsign(&["census"]).status.code(), Some(2));
    assert_eq!(dsign(&["gen", "--random", "5"]).status.code(), Some(2));
}
