use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn symq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symq")).args(args).output().expect("binary runs")
}

fn json_out(args: &[&str]) -> Value {
    let out = symq(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn deutsch_coefficients() {
    let v = json_out(&["qsim", "--circuit", "deutsch", "--report", "poly,inf,sens"]);
    let c = &v["summary"]["coefficients"];
    let expect = [("{}", 0.0), ("{1}", 1.0), ("{2}", 1.0), ("{1,2}", -2.0)];
    for (k, want) in expect {
        assert!((c[k].as_f64().unwrap() - want).abs() < 1e-9, "{k}: {}", c[k]);
    }
    for inf in v["summary"]["influences"].as_array().unwrap() {
        assert!((inf.as_f64().unwrap() - 1.0).abs() < 1e-9);
    }
    assert_eq!(v["schema"], "symq.run/1");
}

#[test]
fn chop_collision_writes_converged_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.json");
    let out = symq(&["chop", "--func", "collision", "--N", "16", "--c", "2/7", "--out", seq.to_str().unwrap()]);
    assert!(out.status.success());
    let v = read(&seq);
    assert_eq!(v["summary"]["a_l_equals_b_l"], true);
    assert_eq!(v["summary"]["invariant_violations"].as_array().unwrap().len(), 0);
    assert_eq!(v["config"]["c"], "2/7");

    // the last level chops every row of (2^8): far past the pair budget
    let big = symq(&["adversary", "--relation", "chop", "--seq", seq.to_str().unwrap(), "--seq-side", "b", "--level", "4"]);
    assert_eq!(big.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&big.stderr).contains("budget"));
}

#[test]
fn chop_record_feeds_the_adversary() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("ae.json");
    assert!(symq(&["chop", "--func", "all-equal", "--N", "8", "--out", seq.to_str().unwrap()]).status.success());
    let adv = json_out(&["adversary", "--relation", "chop", "--seq", seq.to_str().unwrap(), "--level", "1"]);
    assert_eq!(adv["summary"]["alpha"], "1/2");
    assert_eq!(adv["summary"]["next"], "(4,4)");
    assert_eq!(adv["summary"]["pairs"], 70);
}

#[test]
fn missing_seed_is_a_usage_error() {
    for args in [
        vec!["sample", "--func", "collision", "--N", "8", "--T", "8"],
        vec!["decide", "--func", "all-equal", "--N", "8"],
        vec!["boolean", "--or-like", "8", "--weight", "1"],
        vec!["qsim", "--random", "3,1,2"],
        vec!["probe", "--random-n", "4", "--degree", "2"],
    ] {
        let out = symq(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
    }
}

#[test]
fn usage_and_schema_errors_exit_2() {
    assert_eq!(symq(&["nonsense"]).status.code(), Some(2));
    assert_eq!(symq(&["adversary", "--relation", "weight", "--N", "4"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("spec.json");
    std::fs::write(&bad, r#"{"N": 4, "ones": [2], "zeros": [2]}"#).unwrap();
    let out = symq(&["boolean", "--spec", bad.to_str().unwrap(), "--weight", "0", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_guard_is_enforced() {
    let out = symq(&["adversary", "--relation", "weight", "--N", "8", "--a", "2", "--b", "4", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn seeded_runs_reproduce_rows() {
    let args = ["sample", "--func", "collision", "--N", "32", "--T", "8", "--trials", "50", "--seed", "9"];
    let (a, b) = (json_out(&args), json_out(&args));
    assert_eq!(a["rows"], b["rows"]);
    assert_eq!(a["summary"], b["summary"]);
    assert_eq!(a["config"]["seed"], 9);
    let other = json_out(&["boolean", "--or-like", "16", "--weight", "1", "--trials", "40", "--seed", "4"]);
    let again = json_out(&["boolean", "--or-like", "16", "--weight", "1", "--trials", "40", "--seed", "4"]);
    assert_eq!(other["rows"], again["rows"]);
}

#[test]
fn csv_rows_carry_the_schema() {
    let out = symq(&["boolean", "--or-like", "8", "--weight", "0", "--trials", "5", "--seed", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("schema,"));
    assert_eq!(lines.filter(|l| l.starts_with("symq.run/1,")).count(), 5);
}

#[test]
fn weight_relation_matches_closed_form() {
    let v = json_out(&["adversary", "--relation", "weight", "--N", "7", "--a", "1", "--b", "3"]);
    let (bound, closed) = (v["summary"]["bound"].as_f64().unwrap(), v["summary"]["closed_form"].as_f64().unwrap());
    assert!((bound - closed).abs() < 1e-9);
}

#[test]
fn set_equality_and_hardcore_commands() {
    let v = json_out(&["setequality", "--prev", "3,2", "--rows", "0", "--size", "1", "--Y", "4", "--Z", "5"]);
    assert_eq!(v["summary"]["type"], v["summary"]["expected_type"]);
    assert_eq!(v["summary"]["type"], "(2,2,1)");
    let h = json_out(&["hardcore", "--func", "all-equal", "--N", "16"]);
    assert!(h["summary"]["hard_core"]["t"].as_u64().unwrap() >= 2);
}

#[test]
fn circuit_file_round_trip_through_commands() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let first = json_out(&["qsim", "--random", "4,2,2", "--seed", "5", "--save-circuit", c.to_str().unwrap()]);
    let second = json_out(&["qsim", "--circuit", c.to_str().unwrap()]);
    let (a, b) = (first["summary"]["coefficients"].as_object().unwrap(), second["summary"]["coefficients"].as_object().unwrap());
    for (k, v) in a {
        assert!((v.as_f64().unwrap() - b[k].as_f64().unwrap()).abs() < 1e-12);
    }
    let d = json_out(&["derand", "--circuit", c.to_str().unwrap(), "--epsilon", "0.2", "--delta", "0.2"]);
    assert_eq!(d["rows"].as_array().unwrap().len(), 16);
    let t = json_out(&["derand", "--circuit", c.to_str().unwrap(), "--bits", "0110"]);
    assert!(t["summary"]["queries"].as_u64().unwrap() <= 4);
    let j = json_out(&["junta", "--circuit", c.to_str().unwrap(), "--k", "2"]);
    assert_eq!(j["summary"]["subset"].as_array().unwrap().len(), 2);
    let p = json_out(&["probe", "--circuit", c.to_str().unwrap()]);
    assert!(p["summary"]["vr"].as_f64().unwrap() >= 0.0);
}

#[test]
fn decide_reports_error_rate() {
    let v = json_out(&["decide", "--func", "all-equal", "--N", "16", "--trials", "60", "--seed", "3"]);
    assert!(v["summary"]["error_rate"].as_f64().unwrap() <= 1.0 / 3.0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 60);
}
