use std::path::PathBuf;
use std::process::{Command, Output};

fn systems() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../systems")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadowlab"))
        .args(args)
        .env_remove("SHADOWLAB_SEED")
        .output()
        .expect("binary runs")
}

fn sys(name: &str) -> String {
    systems().join(name).display().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn validate_and_orbits() {
    let out = run(&["validate", &sys("sys_a.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["map"], serde_json::json!([1, 1]));
    let out = run(&["orbits", &sys("sys_a.json"), "--format", "json"]);
    assert_eq!(json(&out)["minimal"], serde_json::json!([1]));
}

#[test]
fn exit_codes() {
    // Identity on a discrete circle drifts under adjacency perturbations.
    let out = run(&["shadow", &sys("circle6_identity.json"), "--d", "cyclic:1", "--e", "diag", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["counterexample"]["kind"], "untraced");
    let out = run(&["shadow", &sys("circle6_identity.json"), "--d", "diag", "--e", "diag"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["validate", "does-not-exist.json"]).status.code(), Some(2));
    assert_eq!(run(&["theorems", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["shadow", &sys("sys_a.json"), "--d", "cyclic:x"]).status.code(), Some(2));
}

#[test]
fn fg_counterexample_on_the_sink() {
    let out = run(&["fg", &sys("sys_a.json"), "--f", "P", "--g", "ps", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["counterexample"]["kind"], "family_pair");
    let out = run(&["fg", &sys("sys_a.json"), "--f", "N", "--g", "ps", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn seed_override_and_determinism() {
    let args = ["theorems", "--suite", "families", "--family-samples", "200", "--format", "json"];
    let out = Command::new(env!("CARGO_BIN_EXE_shadowlab"))
        .args(args)
        .env("SHADOWLAB_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 5);

    let a = run(&["theorems", "--suite", "t1t2", "--corpus", "exhaustive-upto:3", "--format", "json"]);
    let b = run(&["theorems", "--suite", "t1t2", "--corpus", "exhaustive-upto:3", "--format", "json", "--sequential"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lemma_suite_reports_one_way_chains() {
    let out = run(&["theorems", "--suite", "lemmas", "--corpus", "exhaustive:3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let c = v["contradictions"].as_array().unwrap();
    assert!(!c.is_empty());
    assert!(c.iter().all(|r| r["check"] == "sim_d_equivalence"));
}

#[test]
fn tower_csv() {
    let out = run(&["tower", "--cells", "12", "--levels", "2", "--tolerance", "1,full", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "level,cells,tolerance,modulus,at_floor,profile");
    assert_eq!(lines[1], "0,12,adj^1,Δ,true,001");
    assert_eq!(lines.len(), 5);
}

#[test]
fn corpus_writes_loadable_files() {
    let dir = std::env::temp_dir().join(format!("shadowlab-corpus-{}", std::process::id()));
    let out = run(&["corpus", "random:5:3:9", "--out", dir.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 3);
    let first = dir.join("00000.json");
    assert_eq!(run(&["validate", first.to_str().unwrap()]).status.code(), Some(0));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn quotient_and_spr() {
    let out = run(&["quotient", &sys("sys_a.json"), "--format", "json"]);
    assert_eq!(json(&out)["p"], 1);
    let out = run(&["spr", &sys("swap.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
}
