use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ninf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ninf")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn emit(name: &str, params: &str, file: &str) -> String {
    let path = scratch(file);
    let out = ninf(&["registry", "--name", name, "--params", params, "--emit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

#[test]
fn registry_then_compute() {
    let file = emit("grid-simple", "2", "simple2.json");
    let out = ninf(&["compute", "--input", &file, "--homology", "2", "--norm", "sum"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["selected"]["hd"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["certified"], true);

    let written = scratch("simple2.report.json");
    let out = ninf(&["compute", "--input", &file, "--homology", "1", "--box", "1,1", "--output", written.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(written).unwrap()).unwrap();
    assert_eq!(saved["norm"], "sup");
}

#[test]
fn oracle_matches_compute() {
    let file = emit("monomial-ideal", "1,1,0;0,1,1;1,0,1", "ideal.json");
    let engine = json(&ninf(&["compute", "--input", &file, "--homology", "2"]));
    let oracle = json(&ninf(&["oracle", "--input", &file, "--homology", "2", "--box", "1,1,1"]));
    for i in 0..=2 {
        assert_eq!(engine["homology"][i]["support"], oracle["homology"][i]["support"], "H_{i}");
    }
}

#[test]
fn resolve_shift_and_torsion() {
    let file = emit("grid-simple", "3", "simple3.json");
    let res = json(&ninf(&["resolve", "--input", &file, "--length", "3"]));
    assert_eq!(res["isComplex"], true);
    assert_eq!(res["isMinimal"], true);
    assert_eq!(res["free"][3].as_array().unwrap().len(), 1);

    // the simple module shifts to zero
    let sh = ninf(&["shift", "--input", &file, "--direction", "1"]);
    assert_eq!(sh.status.code(), Some(0));
    let shifted = scratch("simple3.shifted.json");
    std::fs::write(&shifted, &sh.stdout).unwrap();
    let h = json(&ninf(&["compute", "--input", shifted.to_str().unwrap(), "--homology", "0"]));
    assert!(h["homology"][0]["support"].as_array().unwrap().is_empty());
    let sheaf = json(&ninf(&["shift", "--input", &file, "--sheafify"]));
    assert_eq!(sheaf["rank"], 0);
    let bs = ninf(&["shift", "--input", &file, "--bs-power", "2"]);
    assert_eq!(bs.status.code(), Some(0));

    let t = json(&ninf(&["torsion", "--input", &file]));
    assert_eq!(t["isTorsion"], true);
}

#[test]
fn orbit_commands() {
    let file = emit("orbit-free", "4,12", "orbit4.json");
    let r = json(&ninf(&["orbit", "restrict", "--input", &file]));
    assert_eq!(r["generators"].as_array().unwrap().len(), 4);
    let d = json(&ninf(&["orbit", "decompose", "--input", &file]));
    let ts: Vec<i64> = d["multiplicities"].as_array().unwrap().iter().map(|m| m["t"].as_i64().unwrap()).collect();
    assert_eq!(ts, vec![0, 3, 6, 9]);
    let s = json(&ninf(&["orbit", "sheafify", "--input", &file]));
    assert_eq!(s["sheaf"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_reports_bounds() {
    let out = ninf(&["verify", "--suite", "sup-hd-vs-pd", "--seed", "42", "--count", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["instances"][0]["bounds"]["pd"].is_i64());
}

#[test]
fn input_errors_exit_with_2() {
    assert_eq!(ninf(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(ninf(&["registry", "--name", "nope"]).status.code(), Some(2));
    assert_eq!(ninf(&["compute", "--input", "/nonexistent.json"]).status.code(), Some(2));
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"poset": {"kind": "grid", "directions": 1, "box": {"caps": [2]}}, "field": {"kind": "rational"}, "generators": [{"degree": [[0, 1]]}], "relations": []}"#).unwrap();
    let out = ninf(&["compute", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("generators[0]"));
    let file = emit("grid-simple", "1", "simple1.json");
    assert_eq!(ninf(&["shift", "--input", &file, "--direction", "0"]).status.code(), Some(2));
    assert_eq!(ninf(&["compute", "--input", &file, "--norm", "max"]).status.code(), Some(2));
}
