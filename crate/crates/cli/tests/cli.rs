use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const ORDER5_D113: &str = "\
# dim 3
1 1 1 1 1 1
2 2 2 2 2 1
3 3 3 3 3 3
1 1 3 3 3 -1
2 2 3 3 3 -2
";

const ORDER4_DIM2: &str = "\
1 1 1 1 1
2 2 2 2 1
1 1 2 2 -1
";

const ORDER5_D124: &str = "\
# dim 3
1 1 1 1 1 1
2 2 2 2 2 2
3 3 3 3 3 4
1 1 1 2 2 -1
1 1 3 3 3 -1
2 2 2 3 3 -2
";

/// Writes the fixed tensors into a fresh directory.
fn fixtures() -> (TempDir, impl Fn(&str) -> PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("order5-d113.tensor", ORDER5_D113),
        ("order4-dim2.tensor", ORDER4_DIM2),
        ("order5-d124.tensor", ORDER5_D124),
        ("positive.tensor", "1 1 1 2\n1 2 2 1\n2 1 1 1\n2 2 2 1\n"),
        ("reducible.tensor", "# dim 2\n1 1 1\n2 2 1\n2 1 1\n"),
        ("broken.tensor", "1 1 1\n1 2 x\n"),
    ] {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    let root = dir.path().to_path_buf();
    (dir, move |name: &str| root.join(name))
}

fn ztensor(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ztensor")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let (code, out, err) = ztensor(&all);
    let value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, value)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compare_reports_equal_eigenvalues_and_the_witness() {
    let (_dir, path) = fixtures();
    let (code, out, _) = ztensor(&["compare", s(&path("order5-d113.tensor"))]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("equal        yes"), "{out}");
    assert!(out.contains("V = {3}"), "{out}");
    let (code, v) = structured(&["compare", s(&path("order5-d113.tensor"))]);
    assert_eq!(code, 0);
    assert!((v["lambda_a"].as_f64().unwrap() - 3.0).abs() < 1e-8);
    assert!((v["lambda_abs"].as_f64().unwrap() - 3.0).abs() < 1e-8);
    assert_eq!(v["route"]["SignFlip"]["set"], serde_json::json!([3]));
}

#[test]
fn compare_without_bipartition_uses_the_oracle() {
    let (_dir, path) = fixtures();
    let (code, v) = structured(&["compare", s(&path("order5-d124.tensor"))]);
    assert_eq!(code, 0);
    assert!((v["lambda_a"].as_f64().unwrap() - 4.0).abs() < 1e-8);
    // a negative tolerance can never be met
    let (code, _, _) = ztensor(&["compare", s(&path("order5-d124.tensor")), "--tol=-1"]);
    assert_eq!(code, 1);
}

#[test]
fn bipartite_verdicts() {
    let (_dir, path) = fixtures();
    let (code, out, _) = ztensor(&["bipartite", s(&path("order4-dim2.tensor")), "--kind", "odd"]);
    assert_eq!(code, 1);
    assert!(out.contains("none"), "{out}");
    let (code, v) = structured(&["bipartite", s(&path("order5-d113.tensor")), "--limit", "2"]);
    assert_eq!(code, 0);
    let witnesses = v["witnesses"].as_array().unwrap();
    assert_eq!(witnesses.len(), 2);
    assert_eq!(witnesses[0], serde_json::json!([3]));
    let (code, _, _) = ztensor(&["bipartite", s(&path("order5-d113.tensor")), "--kind", "even", "--strict"]);
    assert_eq!(code, 1);
}

#[test]
fn irreducible_and_inspect() {
    let (_dir, path) = fixtures();
    let (code, out, _) = ztensor(&["irreducible", s(&path("reducible.tensor"))]);
    assert_eq!(code, 1);
    assert!(out.contains("reducible, V = {1}"), "{out}");
    let (code, _, _) = ztensor(&["irreducible", s(&path("positive.tensor"))]);
    assert_eq!(code, 0);
    let (code, v) = structured(&["inspect", s(&path("order5-d113.tensor"))]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 5);
    assert_eq!(v["entries"], 5);
    assert_eq!(v["z_form_valid"], true);
    assert_eq!(v["c_weakly_irreducible"], true);
    let (_, v) = structured(&["inspect", s(&path("positive.tensor"))]);
    assert_eq!(v["z_form_valid"], false);
}

#[test]
fn eig_methods() {
    let (_dir, path) = fixtures();
    let positive = path("positive.tensor");
    let file = s(&positive);
    let (code, power) = structured(&["eig", file, "--method", "power"]);
    assert_eq!(code, 0);
    let (_, brute) = structured(&["eig", file, "--method", "brute"]);
    let rho = power["pairs"][0]["lambda"].as_f64().unwrap();
    let top = brute["pairs"][0]["lambda"].as_f64().unwrap();
    assert!((rho - top).abs() < 1e-9, "{rho} vs {top}");
    let (code, _, err) = ztensor(&["eig", s(&path("order4-dim2.tensor")), "--method", "power"]);
    assert_eq!(code, 2, "{err}");
    let (code, v) = structured(&["eig", s(&path("order4-dim2.tensor"))]);
    assert_eq!(code, 0);
    assert_eq!(v["method"], "brute");
}

#[test]
fn similar_and_charpoly() {
    let (_dir, path) = fixtures();
    let (code, v) = structured(&["similar", s(&path("order5-d113.tensor"))]);
    assert_eq!(code, 0);
    assert_eq!(v["p"], serde_json::json!([1.0, 1.0, -1.0]));
    let (code, out, _) = ztensor(&["similar", s(&path("order4-dim2.tensor"))]);
    assert_eq!((code, out.as_str()), (1, "none\n"));
    let (code, v) = structured(&["charpoly", s(&path("order4-dim2.tensor"))]);
    assert_eq!(code, 0);
    // (λ - 1)^6
    assert_eq!(v["exact"], serde_json::json!(["1", "-6", "15", "-20", "15", "-6", "1"]));
    assert_eq!(v["spectral_radius"], 1.0);
    let (code, _, _) = ztensor(&["charpoly", s(&path("order5-d113.tensor"))]);
    assert_eq!(code, 2);
}

#[test]
fn input_errors() {
    let (_dir, path) = fixtures();
    let (code, _, err) = ztensor(&["eig", s(&path("missing.tensor"))]);
    assert_eq!(code, 2);
    assert!(err.contains("missing.tensor"), "{err}");
    let (code, _, err) = ztensor(&["inspect", s(&path("broken.tensor"))]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = ztensor(&["compare", s(&path("positive.tensor"))]);
    assert_eq!(code, 2);
    let (code, _, _) = ztensor(&["verify", "--theorem", "T-unknown"]);
    assert_eq!(code, 2);
    let (code, _, _) = ztensor(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_and_regression_reports() {
    let (code, v) = structured(&["verify", "--theorem", "T-sign-sim", "--trials", "5", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v[0]["theorem_id"], "T-sign-sim");
    assert_eq!(v[0]["trials"], 5);
    let (code, out, _) = ztensor(&["regression"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5, "{out}");
}

#[test]
fn verify_saves_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let report_dir = dir.path().join("cases");
    let (code, v) = structured(&[
        "verify",
        "--theorem",
        "T-eq-odd",
        "--trials",
        "2",
        "--tol=-1",
        "--report-dir",
        s(&report_dir),
    ]);
    assert_eq!(code, 1);
    let path = v[0]["failures"][0]["tensor_file"].as_str().unwrap();
    assert!(Path::new(path).exists());
    let (code, _, _) = ztensor(&["inspect", path]);
    assert_eq!(code, 0);
}

#[test]
fn output_is_deterministic() {
    let (_dir, path) = fixtures();
    let a = ztensor(&["eig", s(&path("order5-d124.tensor")), "--method", "brute", "--seed", "4"]);
    let b = ztensor(&["eig", s(&path("order5-d124.tensor")), "--method", "brute", "--seed", "4"]);
    assert_eq!(a, b);
}
