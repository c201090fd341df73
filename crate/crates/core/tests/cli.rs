use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn topoqec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topoqec")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn info_twisted_13() {
    let v = json(&topoqec(&["code", "info", "--family", "twisted-xzzx", "--L", "3", "--J", "2", "--json"]));
    assert_eq!((v["N"].as_u64(), v["K"].as_u64(), v["D"].as_u64()), (Some(13), Some(1), Some(5)));
    assert!((v["c"].as_f64().unwrap() - 25.0 / 13.0).abs() < 1e-12);
}

#[test]
fn info_toric_3() {
    let v = json(&topoqec(&["code", "info", "--family", "toric", "--L", "3", "--json"]));
    assert_eq!((v["N"].as_u64(), v["K"].as_u64(), v["D"].as_u64()), (Some(18), Some(2), Some(3)));
    assert_eq!(v["c"].as_f64(), Some(1.0));
    assert_eq!(v["w_avg"].as_f64(), Some(4.0));
    assert_eq!(v["w_max"].as_u64(), Some(4));
    let text = String::from_utf8(topoqec(&["code", "info", "--family", "toric", "--L", "3"]).stdout).unwrap();
    assert!(text.starts_with("[[18,2,3]]"));
}

#[test]
fn info_rejects_bad_parameters() {
    let out = topoqec(&["code", "info", "--family", "rotated-toric", "--L", "3"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("even L"));
    assert!(!topoqec(&["code", "info", "--family", "color666", "--L", "3"]).status.success());
    assert!(!topoqec(&["code", "info", "--family", "moebius", "--L", "3"]).status.success());
    assert!(!topoqec(&["code", "info", "--family", "twisted-xzzx", "--L", "4", "--J", "2"]).status.success());
}

#[test]
fn info_verify_and_4612() {
    let v = json(&topoqec(&["code", "info", "--family", "color488", "--D", "3", "--verify", "--json"]));
    assert_eq!(v["verify"]["distance"].as_u64(), Some(3));
    assert_eq!(v["verify"]["ok"].as_bool(), Some(true));
    let v = json(&topoqec(&["code", "info", "--family", "color4612", "--D", "5", "--json"]));
    assert_eq!(v["N"].as_u64(), Some(25));
}

#[test]
fn verify_command() {
    let v = json(&topoqec(&["code", "verify", "--family", "surface", "--L", "3", "--json"]));
    assert_eq!(v["distance"].as_u64(), Some(3));
    assert_eq!(v["symplectic_pairs"].as_bool(), Some(true));
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    let out = topoqec(&["code", "export", "--family", "rotated-surface", "--L", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("8 9"));
    assert_eq!(lines.next(), Some("XXIIIIIII"));
    let alist = String::from_utf8(topoqec(&["code", "export", "--family", "rotated-surface", "--L", "3", "--format", "alist"]).stdout).unwrap();
    assert_eq!(alist.lines().next(), Some("9 8"));
    let meta: Value = serde_json::from_slice(&topoqec(&["code", "export", "--family", "toric", "--L", "2", "--format", "meta"]).stdout).unwrap();
    assert_eq!(meta["N"].as_u64(), Some(8));
}

#[test]
fn decode_error_and_syndrome() {
    let v = json(&topoqec(&["decode", "--family", "twisted-xzzx", "--L", "2", "--J", "1", "--error", "XIIII", "--json"]));
    assert_eq!(v["adjudication"].as_str(), Some("success"));
    assert_eq!(v["converged"].as_bool(), Some(true));
    assert_eq!(v["syndrome"].as_str(), Some("0001"));
    let v = json(&topoqec(&["decode", "--family", "twisted-xzzx", "--L", "2", "--J", "1", "--syndrome", "0000", "--json"]));
    assert_eq!(v["estimate"].as_str(), Some("IIIII"));
    assert_eq!(v["alpha"].as_f64(), Some(1.0));
    assert!(v["adjudication"].is_null());
}

#[test]
fn decode_usage_errors() {
    let base = ["decode", "--family", "twisted-xzzx", "--L", "2", "--J", "1"];
    let run = |extra: &[&str]| topoqec(&[&base[..], extra].concat());
    assert!(!run(&["--error", "XIII"]).status.success());
    assert!(!run(&["--error", "XIIIQ"]).status.success());
    assert!(!run(&["--syndrome", "01"]).status.success());
    assert!(!run(&[]).status.success());
    assert!(!run(&["--error", "XIIII", "--syndrome", "0001"]).status.success());
}

#[test]
fn sweep_grid_and_threshold_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let out = topoqec(&[
        "sweep", "--family", "twisted-xzzx", "--sizes", "3,5", "--eps-start", "0.10", "--eps-stop", "0.12",
        "--eps-step", "0.01", "--target-errors", "5", "--seed", "3", "--threads", "2", "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 6);
    assert!(text.starts_with(topoqec::sim::CSV_HEADER));
    assert!(dir.path().join("c.manifest.json").exists());
    let th = topoqec(&["threshold", "--in", csv.to_str().unwrap()]);
    // With so few points a crossing may or may not exist; either outcome must be well-formed.
    if th.status.success() {
        let v: Value = serde_json::from_slice(&th.stdout).unwrap();
        assert!(v["median"].is_number());
    } else {
        assert!(String::from_utf8_lossy(&th.stderr).contains("crossing"));
    }
}

#[test]
fn sweep_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let c = csv.to_str().unwrap();
    let bad_grid = topoqec(&["sweep", "--family", "toric", "--sizes", "3", "--eps-start", "0.2", "--eps-stop", "0.1", "--out", c]);
    assert!(!bad_grid.status.success());
    let unwritable = topoqec(&[
        "sweep", "--family", "toric", "--sizes", "2", "--eps-start", "0.1", "--eps-stop", "0.1", "--target-errors", "1",
        "--out", "/nonexistent-dir/x.csv",
    ]);
    assert!(!unwritable.status.success());
    assert!(!topoqec(&["sweep", "--family", "toric", "--eps-start", "0.1", "--eps-stop", "0.2", "--out", c]).status.success());
}

#[test]
fn threshold_synthetic_and_single_size() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let mut text = String::from(topoqec::sim::CSV_HEADER);
    text.push('\n');
    for (d, slope) in [(3usize, 10.0f64), (5, 30.0)] {
        for i in 0..7 {
            let eps = 0.14 + 0.01 * i as f64;
            let p = (-3.0 + slope * (eps - 0.175)).exp();
            text.push_str(&format!("twisted_xzzx,,,{d},13,1,ambp4,adaptive,{eps},{eps},100,10,0,{p},0,1,1,1\n"));
        }
    }
    fs::write(&path, &text).unwrap();
    let v = json(&topoqec(&["threshold", "--in", path.to_str().unwrap()]));
    assert!((v["median"].as_f64().unwrap() - 0.175).abs() < 1e-9);
    assert_eq!(v["pairs"][0]["D_low"].as_u64(), Some(3));
    assert_eq!(v["pairs"][0]["D_high"].as_u64(), Some(5));

    let single: String = text.lines().take(8).map(|l| format!("{l}\n")).collect();
    fs::write(&path, single).unwrap();
    assert!(!topoqec(&["threshold", "--in", path.to_str().unwrap()]).status.success());
    fs::write(&path, "eps,p\n0.1,0.2\n").unwrap();
    assert!(!topoqec(&["threshold", "--in", path.to_str().unwrap()]).status.success());
}
