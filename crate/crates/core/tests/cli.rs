use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pdcsim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdcsim"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn pdcsim")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn error_of(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    v["error"].clone()
}

#[test]
fn design_factorable_waist() {
    let dir = tempfile::tempdir().unwrap();
    let out = pdcsim(dir.path(), &["--out", "o", "design", "factorable"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = read_json(&dir.path().join("o/design_factorable.json"));
    let w0 = j["value"].as_f64().unwrap();
    assert!((w0 - 287e-6).abs() < 5e-6, "{w0}");
    assert_eq!(j["unit"], "m");
    assert_eq!(j["config"]["params"]["L"], "1mm");
    assert_eq!(j["config"]["params"]["theta"], "3deg");
}

#[test]
fn fig5_writes_four_surfaces() {
    let dir = tempfile::tempdir().unwrap();
    let out = pdcsim(dir.path(), &["--out", "o", "reproduce", "fig5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["longitudinal", "transverse", "pump", "product"] {
        let text = std::fs::read_to_string(dir.path().join(format!("o/fig5_{name}.csv"))).unwrap();
        assert!(text.starts_with("# config="), "{name}");
        assert!(text.lines().count() > 100, "{name}");
    }
    let meta = read_json(&dir.path().join("o/fig5.json"));
    assert!(meta["plot"].is_string());
}

#[test]
fn economy_from_csv_flags_second_row() {
    let dir = tempfile::tempdir().unwrap();
    let table = concat!(env!("CARGO_MANIFEST_DIR"), "/data/table1.csv");
    let out = pdcsim(dir.path(), &["--out", "o", "economy", "--csv", table]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = read_json(&dir.path().join("o/economy.json"));
    let flags: Vec<bool> = j["rows"].as_array().unwrap().iter().map(|r| r["discrepancy"].as_bool().unwrap()).collect();
    assert_eq!(flags, [false, true, false]);
    let csv = std::fs::read_to_string(dir.path().join("o/economy.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["design", "factorable", "--L", "1"],
        vec!["design", "nonsense"],
        vec!["jsa", "--source", "model", "--n-points", "1"],
    ] {
        let out = pdcsim(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_of(&out)["exit_code"], 2);
    }
    std::fs::write(dir.path().join("c.json"), r#"{"colour": "blue"}"#).unwrap();
    let out = pdcsim(dir.path(), &["--config", "c.json", "jsa"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = pdcsim(dir.path(), &["--out", "o", "design", "factorable", "--theta", "0deg"]);
    assert_eq!(out.status.code(), Some(3));
    let e = error_of(&out);
    assert_eq!(e["kind"], "degenerate");
    assert_eq!(e["exit_code"], 3);
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["--out", "o", "schmidt", "--source", "model", "--n-points", "96"];
    for d in [&a, &b] {
        assert_eq!(pdcsim(d.path(), &args).status.code(), Some(0));
    }
    for f in ["schmidt.json", "schmidt_eigenvalues.csv", "schmidt_modes.csv"] {
        let x = std::fs::read(a.path().join("o").join(f)).unwrap();
        let y = std::fs::read(b.path().join("o").join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

#[test]
fn config_file_is_merged_and_recorded() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"source": "model", "sigma": "4e13rad_s", "sigma_f": "2e13rad_s", "n_points": 64}"#)
        .unwrap();
    let out = pdcsim(dir.path(), &["--config", "c.json", "--out", "o", "jsa", "--n-points", "80"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = read_json(&dir.path().join("o/jsa.json"));
    let p = &j["config"]["params"];
    assert_eq!(p["sigma_f"], "2e13rad_s");
    assert_eq!(p["n_points"], 80);
    let csv = std::fs::read_to_string(dir.path().join("o/jsa.csv")).unwrap();
    let first = csv.lines().next().unwrap();
    let embedded: Value = serde_json::from_str(first.strip_prefix("# config=").unwrap()).unwrap();
    assert_eq!(embedded["params"], *p);
}
