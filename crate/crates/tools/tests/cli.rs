use std::path::Path;
use std::process::{Command, Output};

use chm6_core::families::{family_h, ParamPoint};
use chm6_core::EquivalenceWitness;
use chm6_tools::format::{MatrixJson, WitnessJson};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn chm6(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chm6")).args(args).env_remove("HADAMARD_TOL").output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = chm6(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn gen_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["--family", "h", "--x1", "0.3", "--x2", "0.2"],
        &["--family", "h", "--x1", "-1.1", "--x2", "0.7", "--signs", "-+-+"],
        &["--family", "f6", "--a", "0", "--b", "0"],
        &["--family", "f6t", "--a", "0.25", "--b", "-0.1", "--turns"],
        &["--family", "d6", "--c", "0.2"],
        &["--family", "dita-corner", "--x", "0.4"],
        &["--family", "sym", "--x", "0.5"],
        &["--family", "self-adjoint", "--x", "0.4"],
        &["--family", "border-x2", "--x", "0.3"],
        &["--family", "border-x1", "--x", "-0.3"],
        &["--family", "interpolation", "--x", "1.0", "--xi", "0.25"],
    ];
    for (k, case) in cases.iter().enumerate() {
        let path = dir.path().join(format!("m{k}.json")).to_string_lossy().into_owned();
        let mut args = vec!["gen"];
        args.extend_from_slice(case);
        args.extend_from_slice(&["--out", &path]);
        assert!(chm6(&args).status.success(), "{case:?}");
        let report = ok_json(&["verify", "--in", &path]);
        assert_eq!(report["hadamard"], Value::Bool(true), "{case:?}: {report}");
    }
}

#[test]
fn fourier_gen_matches_construction() {
    let v = ok_json(&["gen", "--family", "f6", "--a", "0", "--b", "0"]);
    let m: MatrixJson = serde_json::from_value(v).unwrap();
    let f = chm6_core::families::fourier_f6(0.0, 0.0);
    assert_eq!(m.to_matrix().unwrap(), f);
}

#[test]
fn equiv_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let h = family_h(ParamPoint::new(0.3, 0.2)).unwrap();
    let w = EquivalenceWitness::random(6, &mut ChaCha8Rng::seed_from_u64(4));
    let moved = h.apply_equivalence(&w).unwrap();
    let a = write(dir.path(), "a.json", &serde_json::to_string(&MatrixJson::from_matrix(&h)).unwrap());
    let b = write(dir.path(), "b.json", &serde_json::to_string(&MatrixJson::from_matrix(&moved)).unwrap());

    let r = ok_json(&["equiv", "--a", &a, "--b", &b]);
    assert_eq!(r["decision"], "equivalent");
    let found: WitnessJson = serde_json::from_value(r["witness"].clone()).unwrap();
    let back = h.apply_equivalence(&found.to_witness().unwrap()).unwrap();
    assert!(back.max_abs_diff(&moved) <= 1e-10);

    let d = write(dir.path(), "d.json", &serde_json::to_string(&MatrixJson::from_matrix(&chm6_core::families::dita_d6(0.0).unwrap())).unwrap());
    let r = ok_json(&["equiv", "--a", &a, "--b", &d]);
    assert_eq!(r["decision"], "inequivalent");
    assert!(r["witness"].is_null());
}

#[test]
fn scan_full_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let p = path.to_string_lossy().into_owned();
    assert!(chm6(&["scan", "--family", "h", "--grid", "33", "--out", &p]).status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["x1", "x2", "modulus_defect", "unitarity_defect"]);
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        rows += 1;
        let x1: f64 = rec[0].parse().unwrap();
        let x2: f64 = rec[1].parse().unwrap();
        let guarded = (1.0 - (x1.sin() * x2.sin()).abs()).abs() < 1e-6;
        if guarded {
            continue;
        }
        let m: f64 = rec[2].parse().unwrap();
        let u: f64 = rec[3].parse().unwrap();
        assert!(m <= 1e-10 && u <= 1e-10, "({x1}, {x2})");
    }
    assert_eq!(rows, 1089);
}

#[test]
fn deterministic_stdout() {
    let args = ["search", "--seed", "7", "--runs", "2", "--max-iter", "500"];
    let first = chm6(&args);
    let second = chm6(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let records: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(records.as_array().unwrap().len(), 2);
    assert!(records[0]["classification"]["label"].is_string());
}

#[test]
fn search_writes_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("found").to_string_lossy().into_owned();
    assert!(chm6(&["search", "--seed", "42", "--tol", "1e-8", "--out", &prefix]).status.success());
    let m = ok_json(&["verify", "--in", &format!("{prefix}-0.json"), "--tol", "1e-7"]);
    assert_eq!(m["hadamard"], true);
    let side: Value = serde_json::from_str(&std::fs::read_to_string(format!("{prefix}-0.classification.json")).unwrap()).unwrap();
    for key in ["label", "params", "distance"] {
        assert!(side.get(key).is_some());
    }
}

#[test]
fn classify_and_fingerprint() {
    let dir = tempfile::tempdir().unwrap();
    let h = family_h(ParamPoint::new(0.37, 0.21)).unwrap();
    let path = write(dir.path(), "h.json", &serde_json::to_string(&MatrixJson::from_matrix(&h)).unwrap());
    let c = ok_json(&["classify", "--in", &path]);
    assert_eq!(c["label"], "H-family");
    let fp = ok_json(&["fingerprint", "--in", &path, "--precision", "6"]);
    assert_eq!(fp["values"].as_array().unwrap().len(), 225);
}

#[test]
fn dephase_and_phase_turns_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "f2.json", r#"{"n":2,"phase_turns":[[0.1,0.3],[0.2,0.9]]}"#);
    let wpath = dir.path().join("w.json").to_string_lossy().into_owned();
    let d: MatrixJson = serde_json::from_value(ok_json(&["dephase", "--in", &path, "--witness", &wpath])).unwrap();
    let d = d.to_matrix().unwrap();
    assert!((d[(0, 1)] - 1.0).norm() < 1e-15 && (d[(1, 0)] - 1.0).norm() < 1e-15);
    assert!((d[(1, 1)] + 1.0).norm() < 1e-14);
    let w: WitnessJson = serde_json::from_str(&std::fs::read_to_string(&wpath).unwrap()).unwrap();
    assert_eq!(w.row_perm, vec![0, 1]);
}

#[test]
fn compose_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"h1":{"family":"h","params":[0.3,0.2]},"h2":{"family":"f6t","params":[0.1,0.7]},"deltas":[0.1,0.2,0.3,0.4,0.5]}"#,
    );
    let m = ok_json(&["compose12", "--spec", &spec]);
    assert_eq!(m["n"], 12);
    let out = dir.path().join("m12.json").to_string_lossy().into_owned();
    assert!(chm6(&["compose12", "--spec", &spec, "--out", &out]).status.success());
    assert_eq!(ok_json(&["verify", "--in", &out])["hadamard"], true);

    let reserved = write(
        dir.path(),
        "x6.json",
        r#"{"h1":{"family":"x6","params":[0,0]},"h2":{"family":"f6","params":[0,0]},"deltas":[0,0,0,0,0]}"#,
    );
    let r = chm6(&["compose12", "--spec", &reserved]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("UnsupportedFamily"));
}

#[test]
fn exit_codes() {
    assert_eq!(chm6(&["gen", "--family", "h", "--x1", "0.3"]).status.code(), Some(2));
    assert_eq!(chm6(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(chm6(&["gen", "--family", "h", "--x1", "0.3", "--x2", "0.2", "--signs", "+++-"]).status.code(), Some(1));

    let r = chm6(&["gen", "--family", "d6", "--c", "1.0"]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("ParamOutOfRange"));

    let dir = tempfile::tempdir().unwrap();
    let ones = write(dir.path(), "ones.json", r#"{"n":6,"phase_turns":[[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0]]}"#);
    let r = chm6(&["classify", "--in", &ones]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("NotHadamard"));
}

#[test]
fn tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let near = write(dir.path(), "near.json", r#"{"n":2,"re":[[1,1],[1,-1.000001]],"im":[[0,0],[0,0]]}"#);
    let strict = ok_json(&["verify", "--in", &near]);
    assert_eq!(strict["hadamard"], false);
    let out = Command::new(env!("CARGO_BIN_EXE_chm6"))
        .args(["verify", "--in", &near])
        .env("HADAMARD_TOL", "1e-5")
        .output()
        .unwrap();
    let loose: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(loose["hadamard"], true);
}
