//! End-to-end runs of the installed binary: exit codes and the stable
//! parts of the output format.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_star-ramsey"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("star-ramsey-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn construct_then_arrow_round_trip() {
    let c = run(&["construct", "-n", "2", "-p", "1", "-m", "4"]);
    assert!(c.status.success());
    let g6 = stdout(&c).trim().to_string();

    let a = run(&["arrow", "-n", "2", "-p", "1", "-m", "4", "-g", &g6]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("arrows: true"));
}

#[test]
fn arrow_refutes_k2_with_witness() {
    let a = run(&["arrow", "-n", "2", "-p", "1", "-m", "4", "-g", "A_"]);
    assert_eq!(a.status.code(), Some(1));
    let out = stdout(&a);
    assert!(out.contains("arrows: false"));
    assert!(out.contains("witness red edge ids: []"));
}

#[test]
fn arrow_rejects_malformed_graph6() {
    let a = run(&["arrow", "-n", "2", "-p", "1", "-m", "4", "-g", "~~~~"]);
    assert_eq!(a.status.code(), Some(2));
}

#[test]
fn missing_subcommand_is_usage_error() {
    let a = run(&[]);
    assert_eq!(a.status.code(), Some(2));
}

#[test]
fn color_emits_ids_and_trace() {
    // C4 at (2,1,4): inside the budget, t = 0, cover coloring.
    let a = run(&["color", "-n", "2", "-p", "1", "-m", "4", "-g", "Cr"]);
    assert_eq!(a.status.code(), Some(0));
    let out = stdout(&a);
    assert!(out.contains("red edge ids:"));
    assert!(out.contains("cover (t=0)"));
}

#[test]
fn color_trace_json_is_parseable() {
    let a = run(&[
        "color", "-n", "2", "-p", "1", "-m", "4", "-g", "Cr", "--trace", "json",
    ]);
    assert_eq!(a.status.code(), Some(0));
    let out = stdout(&a);
    let json_doc = out.split_once('\n').expect("ids line then trace").1;
    let v: serde_json::Value = serde_json::from_str(json_doc).unwrap();
    assert_eq!(v["steps"][0]["case"]["case"], "case1_cover");
}

#[test]
fn color_on_arrowing_host_needs_force_and_exits_one() {
    let c = run(&["construct", "-n", "2", "-p", "1", "-m", "4"]);
    let g6 = stdout(&c).trim().to_string();

    let plain = run(&["color", "-n", "2", "-p", "1", "-m", "4", "-g", &g6]);
    assert_eq!(plain.status.code(), Some(2), "9 edges is over the budget 8");

    let forced = run(&[
        "color",
        "-n",
        "2",
        "-p",
        "1",
        "-m",
        "4",
        "-g",
        &g6,
        "--force-search",
    ]);
    assert_eq!(forced.status.code(), Some(1));
    assert!(stdout(&forced).contains("host arrows"));
}

#[test]
fn rc_reports_value_and_witness() {
    let a = run(&[
        "rc", "-n", "2", "-p", "1", "-m", "2", "--e-max", "5", "--any",
    ]);
    assert_eq!(a.status.code(), Some(0));
    let out = stdout(&a);
    assert!(out.contains("value = 4"));
    assert!(out.contains("witness = "));
}

#[test]
fn rc_exhausted_budget_exits_one() {
    let a = run(&["rc", "-n", "2", "-p", "1", "-m", "4", "--e-max", "3"]);
    assert_eq!(a.status.code(), Some(1));
    assert!(stdout(&a).contains("value > 3"));
}

#[test]
fn enumerate_streams_three_classes_at_three_edges() {
    let a = run(&["enumerate", "--edges", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a).lines().count(), 3);
}

#[test]
fn verify_theorem_smallest_sweep_passes() {
    let a = run(&[
        "verify-theorem",
        "--n-max",
        "1",
        "--p-max",
        "1",
        "-k",
        "0",
        "--samples",
        "5",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("all instances verified"));
}

#[test]
fn cert_write_check_and_corruption() {
    let dir = tmp("cert");
    let cert = dir.join("k2.json");
    // K2 at (1,1,2): the only good coloring is all blue.
    let a = run(&[
        "arrow",
        "-n",
        "1",
        "-p",
        "1",
        "-m",
        "2",
        "-g",
        "A_",
        "--cert",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(a.status.code(), Some(1));

    let ok = run(&["check", "--cert", cert.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("certificate ok"));

    // A red edge is a red K_{1,1}; the doctored witness must be rejected.
    let doctored = dir.join("bad.json");
    let body = std::fs::read_to_string(&cert).unwrap();
    std::fs::write(&doctored, body.replace("[]", "[0]")).unwrap();
    let bad = run(&["check", "--cert", doctored.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("certificate invalid"));

    let gone = run(&["check", "--cert", dir.join("absent.json").to_str().unwrap()]);
    assert_eq!(gone.status.code(), Some(2));
}

#[test]
fn cache_env_dir_is_created_and_reused() {
    let dir = tmp("cache").join("nested");
    let a = bin()
        .args(["arrow", "-n", "2", "-p", "1", "-m", "4", "-g", "A_"])
        .env("STAR_RAMSEY_CACHE", &dir)
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(1));
    assert!(dir.join("verdicts.jsonl").exists());

    let b = bin()
        .args(["arrow", "-n", "2", "-p", "1", "-m", "4", "-g", "A_"])
        .env("STAR_RAMSEY_CACHE", &dir)
        .output()
        .unwrap();
    assert_eq!(b.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&b.stdout).contains("(cached)"));
}
