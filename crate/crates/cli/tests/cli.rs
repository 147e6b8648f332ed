use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hpart(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpart"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn cycle_wcol_is_three() {
    let dir = tempfile::tempdir().unwrap();
    assert!(hpart(dir.path(), &["gen", "cycle", "5", "--out", "c5.json"])
        .status
        .success());
    let out = hpart(dir.path(), &["wcol", "--graph", "c5.json", "--r", "1", "--exact"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["value"], 3);
}

#[test]
fn bounds_report_tau() {
    let dir = tempfile::tempdir().unwrap();
    let out = hpart(
        dir.path(),
        &["bounds", "--h", "3", "--d", "2", "--k", "0", "--t", "4", "--r", "2"],
    );
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["tau"], 12);
    for key in ["c_param", "t_size", "eps_impl", "partition_width_bound", "wcol_bound"] {
        assert!(v.get(key).is_some(), "{key} missing");
    }
}

#[test]
fn tampered_certificate_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(hpart(d, &["gen", "cycle", "9", "--out", "g.json"]).status.success());
    let out = hpart(
        d,
        &[
            "partition",
            "--algo",
            "chordal",
            "--graph",
            "g.json",
            "--t",
            "4",
            "--out",
            "cert.json",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(hpart(d, &["verify", "certificate", "cert.json"]).status.success());

    let mut cert: Value = serde_json::from_str(&fs::read_to_string(d.join("cert.json")).unwrap()).unwrap();
    let ab = cert["partition"]["ab"].as_array_mut().unwrap();
    let path = ab
        .iter_mut()
        .flat_map(|s| s["geodesics"].as_array_mut().unwrap().iter_mut())
        .find(|p| p.as_array().unwrap().len() >= 3)
        .expect("a geodesic with an inner vertex");
    // Dropping the inner vertex removes both of its path edges.
    path.as_array_mut().unwrap().remove(1);
    fs::write(d.join("bad.json"), serde_json::to_string(&cert).unwrap()).unwrap();
    let out = hpart(d, &["verify", "certificate", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["pass"] == false));
}

#[test]
fn empty_sweep_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.json"), "{}").unwrap();
    let out = hpart(dir.path(), &["sweep", "--config", "cfg.json"]);
    assert!(out.status.success());
    assert!(json(&out)["rows"].as_array().unwrap().is_empty());
    let csv = hpart(dir.path(), &["sweep", "--config", "cfg.json", "--format", "csv"]);
    assert_eq!(
        String::from_utf8(csv.stdout).unwrap().trim(),
        "graph,n,m,check,pass,measured,bound,detail,millis"
    );
}

#[test]
fn star_and_tree_sweep_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
        "seed": 4,
        "graphs": [
            {"family": {"family": "star", "params": [6]}},
            {"random_tree": {"n": 10, "count": 5}}
        ],
        "checks": [
            {"wcol_bound": {"h": 3, "d": 2, "r": 1}},
            {"wcol_bound": {"h": 3, "d": 2, "r": 4}}
        ]
    }"#;
    fs::write(dir.path().join("cfg.json"), cfg).unwrap();
    let out = hpart(dir.path(), &["sweep", "--config", "cfg.json", "--parallel"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn malformed_input_is_a_usage_error_with_position() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{\"n\": 3,\n \"edges\": [[0, 1],, ]}").unwrap();
    let out = hpart(dir.path(), &["tw", "--graph", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(hpart(dir.path(), &["no-such-command"]).status.code(), Some(1));
    assert_eq!(hpart(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn budget_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    assert!(hpart(dir.path(), &["gen", "grid", "4", "4", "--out", "g.json"])
        .status
        .success());
    let out = hpart(dir.path(), &["tw", "--graph", "g.json", "--budget-n", "8"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn emitted_graphs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = hpart(dir.path(), &["gen", "random", "9", "--p", "0.4", "--seed", "7"]);
    let v = json(&out);
    let again = hpart(dir.path(), &["gen", "random", "9", "--p", "0.4", "--seed", "7"]);
    assert_eq!(out.stdout, again.stdout);
    fs::write(dir.path().join("g.json"), &out.stdout).unwrap();
    let text = hpart(
        dir.path(),
        &["gen", "random", "9", "--p", "0.4", "--seed", "7", "--format", "text"],
    );
    fs::write(dir.path().join("g.txt"), &text.stdout).unwrap();
    let a = json(&hpart(dir.path(), &["tw", "--graph", "g.json"]));
    let b = json(&hpart(dir.path(), &["tw", "--graph", "g.txt"]));
    assert_eq!(a, b);
    assert_eq!(v["n"], 9);
}
