use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster-int")).args(args).output().expect("binary runs")
}

fn run_report(dir: &Path, name: &str, args: &[&str]) -> (i32, Value) {
    let path = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--report", &p]);
    let out = run(&all);
    let code = out.status.code().unwrap();
    let v = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (code, v)
}

#[test]
fn schubert_sl4() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = run_report(dir.path(), "s.json", &["schubert", "--m", "4", "--word", "1,2,3,1,2,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["independent_count"], 4);
    assert_eq!(v["system"]["functions"], serde_json::json!(["z1", "z2", "z3", "z2*z5 - z3*z4"]));
    assert_eq!(v["pfaffian"]["low_degree"], -2);
    assert_eq!(v["property_i"], serde_json::json!({"deg_mu_low": 2, "half_rank": 2, "holds": true}));
    assert_eq!(v["solid_minor"], true);
}

#[test]
fn schubert_rank_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = run_report(dir.path(), "s.json", &["schubert", "--m", "2", "--word", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["independent_count"], 1);
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(run(&["schubert", "--m", "4", "--word", "1,1"]).status.code(), Some(1));
    assert_eq!(run(&["schubert", "--m", "4", "--word", "1,x"]).status.code(), Some(1));
    assert_eq!(run(&["dualgl", "--n", "4", "--full-mu"]).status.code(), Some(1));
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["--threads", "0", "cascade", "--n", "2"]).status.code(), Some(1));
    assert_eq!(run(&["mutate", "--seed", "/nonexistent.json", "--path", "1"]).status.code(), Some(1));
}

#[test]
fn jet_cap_hit_exits_three() {
    assert_eq!(run(&["bfz", "--n", "2", "--jet-cap", "1"]).status.code(), Some(3));
}

#[test]
fn bfz_rank_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = run_report(dir.path(), "b.json", &["bfz", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["independent_count"], 5);
    assert_eq!(v["modified_mu_low"]["upper_bound"], 3);
}

#[test]
fn dualgl_rank_three() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = run_report(dir.path(), "d.json", &["dualgl", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["system"]["functions"].as_array().unwrap().len(), 6);
    assert_eq!(v["log_volume"], Value::Null);
}

#[test]
fn cascade_rank_three() {
    let out = run(&["cascade", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("{(1,4), (2,3)}"));
    let dir = tempfile::tempdir().unwrap();
    let (_, v) = run_report(dir.path(), "c.json", &["cascade", "--n", "3"]);
    assert_eq!(v["roots"], serde_json::json!([[1, 4], [2, 3]]));
    assert_eq!(v["stabilizer_dimension"], 3);
}

#[test]
fn mutate_seed_file() {
    let dir = tempfile::tempdir().unwrap();
    let seed = dir.path().join("seed.json");
    std::fs::write(&seed, r#"{"vars":["a","b"],"labels":["p1","p2"],"cluster":["a","b"],"ex":[0],"M":[[0],[1]]}"#)
        .unwrap();
    let s = seed.to_str().unwrap();
    let (code, v) = run_report(dir.path(), "m.json", &["mutate", "--seed", s, "--path", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"]["cluster"][0], "(b + 1)/(a)");
    assert_eq!(v["log_volume_invariant"], true);
    let (_, back) = run_report(dir.path(), "m2.json", &["mutate", "--seed", s, "--path", "1,1"]);
    assert_eq!(back["seed"]["cluster"][0], "a");
    assert_eq!(run(&["mutate", "--seed", s, "--path", "2"]).status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["--seed", "9", "schubert", "--m", "4", "--word", "2,1,3,2", "--report", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let out = run(&["verify", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    // a tampered report no longer verifies
    let mut v: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    v["independent_count"] = 3.into();
    std::fs::write(&a, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(run(&["verify", a.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (_, one) = run_report(dir.path(), "1.json", &["--threads", "1", "bfz", "--n", "2"]);
    let (_, many) = run_report(dir.path(), "4.json", &["--threads", "4", "bfz", "--n", "2"]);
    assert_eq!(one, many);
}
