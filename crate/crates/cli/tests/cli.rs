use std::collections::BTreeSet;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pt-horizon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn classify_exit_codes() {
    let inside = run(&["classify", "--a", "0", "--b", "0", "--c", "0"]);
    assert_eq!(code(&inside), 0);
    assert!(String::from_utf8_lossy(&inside.stdout).contains("verdict: inside"));

    let outside = run(&["classify", "--a", "0", "--b", "2.2360680", "--c", "0"]);
    assert_eq!(code(&outside), 1);
    assert!(String::from_utf8_lossy(&outside.stdout).contains("outside("));

    assert_eq!(code(&run(&["classify", "--a", "x", "--b", "0", "--c", "0"])), 2);
    assert_eq!(code(&run(&["classify", "--a", "0", "--b", "0", "--c", "0", "--nope"])), 2);
    assert_eq!(code(&run(&["classify", "--a", "0", "--b", "0", "--c", "0", "--eta", "-1"])), 2);
}

#[test]
fn classify_json_fields() {
    let out = run(&["classify", "--a", "-1.5", "--b", "0.2", "--c", "0.3", "--json"]);
    let v = json(&out);
    for key in ["point", "W", "Q", "P", "closed_form", "oracle", "oracle_class", "verdict"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["closed_form"].as_array().unwrap().len(), 4);
    assert_eq!(code(&out), if v["verdict"] == "inside" { 0 } else { 1 });
}

#[test]
fn slice_csv_has_three_components_at_b01() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let svg = dir.path().join("s.svg");
    let out = run(&[
        "slice",
        "--fix",
        "b=0.1",
        "--res",
        "400",
        "--out",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,v,W,Q,P,inside,component"));
    let mut ids = BTreeSet::new();
    let mut rows = 0;
    for line in lines {
        rows += 1;
        let f: Vec<&str> = line.split(',').collect();
        let id: i64 = f[6].parse().unwrap();
        assert_eq!(f[5] == "1", id >= 0);
        if id >= 0 {
            ids.insert(id);
        }
    }
    assert_eq!(rows, 400 * 400);
    assert_eq!(ids.into_iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn near_top_slice_is_empty() {
    let out = run(&["slice", "--fix", "b=2.2260680", "--res", "256"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let inside = text
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(5) == Some("1"))
        .count();
    assert_eq!(inside, 0);
}

#[test]
fn components_reports() {
    let c0 = run(&["components", "--fix", "c=0", "--res", "400"]);
    assert_eq!(code(&c0), 0);
    assert_eq!(json(&c0)["count"], 3);

    let a0 = run(&["components", "--fix", "a=0", "--res", "400"]);
    assert_eq!(json(&a0)["count"], 1);

    let b0 = run(&["components", "--fix", "b=0", "--res", "300", "--mode", "real"]);
    assert_eq!(json(&b0)["count"], 1);

    assert_eq!(code(&run(&["components", "--box", "--res", "16"])), 2);
    assert_eq!(code(&run(&["components", "--res", "100"])), 2);
}

#[test]
fn verify_passes_all_checks() {
    let out = run(&["verify"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 8);
    assert!(checks.iter().all(|c| c["status"] != "Fails"));
}

#[test]
fn spectrum_at_pinch_is_real_degenerate() {
    let out = run(&["spectrum", "--a", "2.8284271247461903", "--b", "0", "--c", "0"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["real_degenerate"], true);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn unwritable_destination_is_an_error() {
    let out = run(&["slice", "--fix", "b=0.1", "--res", "50", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn sweep_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep",
        "--b",
        "0.1,0.6",
        "--res",
        "200",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    let slices = summary["slices"].as_array().unwrap();
    assert_eq!(slices.len(), 2);
    assert_eq!(slices[0]["count"], 3);
    assert_eq!(slices[1]["count"], 1);
    for s in slices {
        assert!(dir.path().join(s["csv"].as_str().unwrap()).exists());
        assert!(dir.path().join(s["svg"].as_str().unwrap()).exists());
    }
}

#[test]
fn outputs_are_deterministic_across_thread_counts() {
    let args = ["slice", "--fix", "b=0.2", "--res", "300"];
    let one = Command::new(env!("CARGO_BIN_EXE_pt-horizon"))
        .args(args)
        .env("PT_HORIZON_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_pt-horizon"))
        .args(args)
        .env("PT_HORIZON_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
}
