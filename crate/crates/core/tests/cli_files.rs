use std::fs;
use std::path::Path;

use privrand::cli::run;
use privrand::clodcc::{load_script, swap_circuit, swap_input};
use privrand::ensembles::alpha_v;
use privrand::statespec::write_state_text;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["prr"];
    argv.extend_from_slice(args);
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut o, &mut e);
    (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
}

fn swap_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/swap")
}

#[test]
fn swap_script_matches_builtin() {
    let input = swap_input();
    let scripted = load_script(&swap_dir().join("swap.prr"), input.layout()).unwrap();
    let builtin = swap_circuit(true);
    assert_eq!(scripted.steps.len(), builtin.steps.len());
    let a = privrand::clodcc::apply(&scripted, &input).unwrap().state;
    let b = privrand::clodcc::apply(&builtin, &input).unwrap().state;
    assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
}

#[test]
fn werner_scan_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("scan.csv");
    let ps = p.to_str().unwrap();
    assert_eq!(call(&["werner-scan", "--d-max", "60", "--out", ps]).0, 0);
    let first: Vec<Vec<u8>> = [".", ".dcri.csv", ".manifest.json"]
        .iter()
        .map(|s| fs::read(if *s == "." { p.clone() } else { dir.path().join(format!("scan.csv{s}")) }).unwrap())
        .collect();
    let manifest: Value = serde_json::from_slice(&first[2]).unwrap();
    assert_eq!(manifest["command"], "werner-scan");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
    assert_eq!(String::from_utf8_lossy(&first[0]).lines().count(), 1 + 19 * 59);
    let dcri = String::from_utf8_lossy(&first[1]).to_string();
    assert!(dcri.contains("0.1,60,51,51,false,"));
    assert!(dcri.contains("0.2,60,26,5,true,5"));
    assert!(dcri.contains("0.5,60,10,2,true,2"));

    std::env::set_var("THREADS", "1");
    assert_eq!(call(&["werner-scan", "--d-max", "60", "--out", ps]).0, 0);
    assert_eq!(fs::read(&p).unwrap(), first[0]);
    assert_eq!(fs::read(dir.path().join("scan.csv.dcri.csv")).unwrap(), first[1]);
}

#[test]
fn bell_search_file_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bell.json");
    let ps = p.to_str().unwrap();
    let args = ["bell-search", "--samples", "2000", "--seed", "7", "--separable-only", "--out", ps];
    assert_eq!(call(&args).0, 0);
    let a = fs::read(&p).unwrap();
    assert_eq!(call(&args).0, 0);
    assert_eq!(fs::read(&p).unwrap(), a);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["violation_count"], 0);
    assert!(v.get("runtime_ms").is_none());
    assert!(dir.path().join("bell.json.manifest.json").exists());
}

#[test]
fn file_state_spec() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("alpha.state");
    fs::write(&p, write_state_text(&alpha_v(2).unwrap())).unwrap();
    let spec = format!("file:{}", p.display());
    let (code, out, err) = call(&["bound", "--state", &spec, "--formula", "iid-norm"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(call(&["bound", "--state", "file:/does/not/exist", "--formula", "gap"]).0, 2);
}

#[test]
fn protocol_scripts() {
    let script = swap_dir().join("swap.prr");
    let (code, out, _) = call(&["protocol", "--script", script.to_str().unwrap(), "--eve", "--target", "maxent:2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.prr");
    fs::write(&empty, "# nothing\n").unwrap();
    let (code, out, _) = call(&["protocol", "--script", empty.to_str().unwrap(), "--state", "maxent:2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["steps"], 0);
    assert_eq!(v["parties"]["A"]["entropy"].as_f64().unwrap(), 1.0);

    fs::write(dir.path().join("id.mat"), "1 0 0 0 0 0 0 0\n0 0 1 0 0 0 0 0\n0 0 0 0 1 0 0 0\n0 0 0 0 0 0 1 0\n").unwrap();
    let cross = dir.path().join("cross.prr");
    fs::write(&cross, "U A A B id.mat\n").unwrap();
    let (code, _, err) = call(&["protocol", "--script", cross.to_str().unwrap(), "--state", "maxent:2"]);
    assert_eq!(code, 2);
    assert!(err.contains("held by B"), "{err}");
}

#[test]
fn verify_and_usage_codes() {
    let (code, out, _) = call(&["verify", "--suite", "clodcc"]);
    assert_eq!(code, 0);
    assert!(out.contains("unitality"));
    assert_eq!(call(&["werner-scan", "--alpha-list", "0"]).0, 2);
    assert_eq!(call(&["bound", "--state", "werner:2,1", "--formula", "alpha-iid"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}
