use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    root.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetfield")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (bool, Value) {
    let out = run(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.success(), value)
}

#[test]
fn jetgroup_arithmetic() {
    let out = run(&["jetgroup", "mul", "--order", "2", "2,1", "3,4"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "6,17");
    let out = run(&["jetgroup", "inv", "--order", "2", "2,1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "0.5,-0.125");
}

#[test]
fn circle_field_is_homogeneous_with_zero_lambda() {
    let (ok, v) = json(&["check-homogeneity", &fixture("circle.json")]);
    assert!(ok);
    assert_eq!(v["homogeneous"], true);
    assert_eq!(v["lambda"], serde_json::json!(["0", "0"]));
}

#[test]
fn simpler_circle_field_has_nonzero_lambda2() {
    let (ok, v) = json(&["check-homogeneity", &fixture("circle_simple.json")]);
    assert!(ok);
    assert_ne!(v["lambda"][1], "0");
}

#[test]
fn nonhomogeneous_field_exits_nonzero() {
    let (ok, v) = json(&["check-homogeneity", &fixture("nonhom.json")]);
    assert!(!ok);
    assert_eq!(v["homogeneous"], false);
}

#[test]
fn curvature_lagrangian_is_parametric() {
    let (ok, v) = json(&["check-zermelo", &fixture("curvature.json")]);
    assert!(ok);
    assert_eq!(v["parametric"], true);
}

#[test]
fn curvature_field_solves_euler_lagrange() {
    let (ok, v) =
        json(&["euler-lagrange", &fixture("curvature.json"), "--verify", &fixture("curvature_field.json")]);
    assert!(ok);
    assert!(v["residual"].as_f64().unwrap() < 1e-7);
}

#[test]
fn pointwise_extraction_near_rank_one() {
    // this point once tripped a wrong nalgebra SVD and reported an inconsistent system
    let (ok, v) =
        json(&["euler-lagrange", &fixture("curvature.json"), "--extract-at", "0,0,1,0.2,0.3,-0.5,0.1,0.4"]);
    assert!(ok);
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
    let k: Vec<f64> = v["kernel"][0].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((k[1] / k[0] - 0.2).abs() < 1e-10);
}

#[test]
fn regularity_kernel_dimension() {
    let (ok, v) = json(&["regularity", &fixture("curvature.json"), "--samples", "5"]);
    assert!(ok);
    assert_eq!(v["dim"], 8);
    assert_eq!(v["kernel_dimension_counts"]["4"], 5);
}

#[test]
fn circle_fields_trace_the_same_paths() {
    let (ok, v) = json(&[
        "compare-paths",
        &fixture("circle.json"),
        &fixture("circle_simple.json"),
        "--init",
        "std",
        "--length",
        "1",
    ]);
    assert!(ok);
    assert_eq!(v["result"], "PASS");
}

#[test]
fn spray_normalization_multiplier() {
    let (ok, v) = json(&["spray-normalize", &fixture("circle_simple.json"), "--at", "0,0,1,0,1,1"]);
    assert!(ok);
    assert!((v["mu"].as_f64().unwrap() + 0.75).abs() < 1e-12);
}

#[test]
fn integrate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let args = ["integrate", &fixture("circle.json"), "--init", "std", "--t1", "0.1", "--out", out.to_str().unwrap()];
    assert!(run(&args).status.success());
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(first.lines().next().unwrap(), "t,y1_0,y2_0,y1_1,y2_1,y1_2,y2_2");
    assert_eq!(first.lines().count(), 102);
    assert!(run(&args).status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["regularity", &fixture("curvature.json"), "--samples", "4", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn bad_input_is_an_error() {
    let out = run(&["check-homogeneity", "/nonexistent.json"]);
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}
