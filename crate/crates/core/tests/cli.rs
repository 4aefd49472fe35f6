use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

use spectra::cli::run;

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn spectra(args: &[&str]) -> i32 {
    let mut all = vec!["spectra"];
    all.extend_from_slice(args);
    run(all)
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn expand_f1_writes_three_reports() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "f1.json", r#"{"fixture": "F1", "eps": 0.1}"#);
    let out = dir.path().join("out");
    let code = spectra(&[
        "expand",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    for name in ["projection.json", "separated.json", "clustered.json"] {
        let v = read_json(&out.join(name));
        assert_eq!(v["condition_ok"], Value::Bool(true));
        assert!(v["remainder"].as_f64().unwrap() <= v["bound"].as_f64().unwrap());
        assert_eq!(v["provenance"]["command"], "expand");
        assert_eq!(v["provenance"]["config_sha256"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn expand_beyond_the_condition_exits_two_and_still_writes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "f1.json", r#"{"fixture": "F1", "eps": 2.0}"#);
    let out = dir.path().join("out");
    let code = spectra(&[
        "expand",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    let v = read_json(&out.join("projection.json"));
    assert_eq!(v["condition_ok"], Value::Bool(false));
}

#[test]
fn expand_with_explicit_matrices() {
    let dir = TempDir::new().unwrap();
    write_config(
        dir.path(),
        "h.json",
        r#"{"dim": 3, "rows": [[2, 0, 0], [0, 1, 0], [0, 0, 0]]}"#,
    );
    let cfg = write_config(
        dir.path(),
        "cfg.json",
        r#"{"h": "h.json",
            "perturbation": {"dim": 3, "rows": [[0, 0.01, 0], [0.01, 0, 0.02], [0, 0.02, 0]]},
            "j_set": [1]}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(
        spectra(&[
            "expand",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
}

#[test]
fn expand_input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = out.to_str().unwrap();
    let cases = [
        // Missing j_set with an explicit matrix.
        r#"{"h": {"dim": 2, "rows": [[1, 0], [0, 0]]}, "perturbation": {"dim": 2, "rows": [[0, 0], [0, 0]]}}"#,
        r#"{"fixture": "F1", "eps": 0.1, "unknown": 1}"#,
        r#"{"fixture": "nope", "eps": 0.1}"#,
        r#"{"h": {"dim": 2, "rows": [[1, 5], [0, 0]]}, "h_hat": {"dim": 2, "rows": [[1, 0], [0, 0]]}, "j_set": [1]}"#,
        "{not json",
    ];
    for (i, body) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("bad{i}.json"), body);
        assert_eq!(
            spectra(&["expand", "--config", cfg.to_str().unwrap(), "--out", o]),
            1,
            "{body}"
        );
    }
    let cfg = write_config(dir.path(), "ok.json", r#"{"fixture": "F1", "eps": 0.1}"#);
    assert_eq!(
        spectra(&["expand", "--config", cfg.to_str().unwrap(), "--seed", "3"]),
        1
    );
    assert_eq!(
        spectra(&[
            "expand",
            "--config",
            dir.path().join("missing.json").to_str().unwrap()
        ]),
        1
    );
    assert_eq!(spectra(&["expand"]), 1);
    assert_eq!(spectra(&["frobnicate"]), 1);
    assert_eq!(spectra(&["--help"]), 0);
}

#[test]
fn brownian_opnorm_study_has_one_row_per_trial() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "study.json",
        r#"{"study": "opnorm", "kernel": {"kind": "brownian", "R": 64}, "n": 500, "trials": 100, "seed": 2}"#,
    );
    let out = dir.path().join("out");
    let code = spectra(&[
        "kernel-study",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(out.join("opnorm.csv")).unwrap();
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap();
    assert!(header.starts_with("trial,n,condition_ok,residual,bound,covered,opnorm_dev"));
    assert_eq!(lines.count(), 100);
    assert!(csv.starts_with("# command=kernel-study"));
    let summary = read_json(&out.join("opnorm_summary.json"));
    assert!(summary["summary"]["exceedance"].is_number());
}

#[test]
fn kernel_study_rejects_bad_inputs() {
    let dir = TempDir::new().unwrap();
    let o = dir.path().join("out");
    let o = o.to_str().unwrap();
    let good = r#"{"study": "eigenvalue", "kernel": {"kind": "finite_rank", "lambdas": [1, 0.5, 0.5, 0.25]}, "n": 100, "trials": 5, "j_set": [2, 3]}"#;
    let cfg = write_config(dir.path(), "good.json", good);
    let c = cfg.to_str().unwrap();
    assert_eq!(
        spectra(&["kernel-study", "--config", c, "--out", o, "--trials", "0"]),
        1
    );
    assert_eq!(
        spectra(&["kernel-study", "--config", c, "--out", o, "--tau", "1.5"]),
        1
    );
    assert_eq!(
        spectra(&["kernel-study", "--config", c, "--out", o, "--n", "0"]),
        1
    );
    assert_eq!(
        spectra(&["kernel-study", "--config", c, "--out", o, "--trials", "x"]),
        1
    );
    let bad_kernel = write_config(
        dir.path(),
        "bad.json",
        r#"{"study": "eigenvalue", "kernel": {"kind": "finite_rank", "lambdas": [0.5, 1]}, "n": 100, "trials": 5, "j_set": [1]}"#,
    );
    assert_eq!(
        spectra(&[
            "kernel-study",
            "--config",
            bad_kernel.to_str().unwrap(),
            "--out",
            o
        ]),
        1
    );
    assert_eq!(spectra(&["kernel-study", "--config", c, "--out", o]), 0);
}

#[test]
fn kernel_study_rerun_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "study.json",
        r#"{"study": "limit", "kernel": {"kind": "finite_rank", "lambdas": [1, 0.5, 0.5, 0.25]},
            "n": 300, "trials": 50, "j_set": [2, 3], "functions": [[0, 1], [0, 0, 1]], "limit_draws": 500}"#,
    );
    let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("out{i}"));
            let code = spectra(&[
                "kernel-study",
                "--config",
                cfg.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--seed",
                "5",
            ]);
            assert_eq!(code, 0);
            (
                fs::read(out.join("limit.csv")).unwrap(),
                fs::read(out.join("limit_summary.json")).unwrap(),
            )
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let other = dir.path().join("other");
    spectra(&[
        "kernel-study",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        other.to_str().unwrap(),
        "--seed",
        "6",
    ]);
    assert_ne!(fs::read(other.join("limit.csv")).unwrap(), runs[0].0);
}

#[test]
fn kernel_study_sweep_reports_slopes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "sweep.json",
        r#"{"study": "eigenvalue", "kernel": {"kind": "finite_rank", "lambdas": [1, 0.5, 0.5, 0.25]},
            "n_sweep": [200, 800, 3200], "trials": 50, "j_set": [2, 3], "cluster_rank": 2, "gap_tol": 0.03}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(
        spectra(&[
            "kernel-study",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    let s = read_json(&out.join("eigenvalue_summary.json"));
    assert_eq!(s["sweep"].as_array().unwrap().len(), 3);
    assert!(s["slopes"]["median_residual"].as_f64().unwrap() < 0.0);
    let rows = fs::read_to_string(out.join("eigenvalue.csv")).unwrap();
    assert_eq!(
        rows.lines().filter(|l| !l.starts_with('#')).count(),
        1 + 150
    );
}

#[test]
fn bounds_for_the_constant_kernel() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "b.json",
        r#"{"kernel": {"kind": "finite_rank", "lambdas": [1]}, "n": 10000, "tau": 0.1}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(
        spectra(&[
            "bounds",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    let v = read_json(&out.join("bounds.json"));
    for (k, want) in [("kappa", 1.0), ("r", 2.0), ("sigma", 1.0), ("d", 1.0)] {
        assert!((v[k].as_f64().unwrap() - want).abs() < 1e-12, "{k}");
    }
    assert!((v["radius"].as_f64().unwrap() - 0.027653).abs() < 1e-6);

    assert_eq!(
        spectra(&["bounds", "--config", cfg.to_str().unwrap(), "--tau", "0"]),
        1
    );
    assert_eq!(
        spectra(&["bounds", "--config", cfg.to_str().unwrap(), "--trials", "3"]),
        1
    );
}

#[test]
fn bounds_reports_the_minimal_sample_size() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "b.json",
        r#"{"kappa": 1, "lambda_max": 1, "n": 100, "gamma_j": 0.25, "theta_max": 0.5, "k_clusters": 1}"#,
    );
    let out = dir.path().join("out");
    // n = 100 is far too small for γ_J = 0.25, so the condition fails and the exit code is 2.
    assert_eq!(
        spectra(&[
            "bounds",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        2
    );
    let v = read_json(&out.join("bounds.json"));
    let min_n = v["min_n"].as_u64().unwrap() as f64;
    let th = |n: f64| (1.0f64 / n).sqrt() + 2.0 / (3.0 * n);
    assert!(th(min_n) <= 0.25 / 4.0);
    assert!(th(min_n - 1.0) > 0.25 / 4.0);
    assert_eq!(v["condition_ok"], Value::Bool(false));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_spectra");
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "f1.json", r#"{"fixture": "F1", "eps": 0.1}"#);
    let out = dir.path().join("out");
    let ok = Command::new(bin)
        .args([
            "expand",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(ok.code(), Some(0));
    let bad = write_config(dir.path(), "bad.json", "[1, 2");
    let res = Command::new(bin)
        .args([
            "expand",
            "--config",
            bad.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("error"));
    let threads = Command::new(bin)
        .env("SPECTRA_THREADS", "0")
        .args([
            "expand",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(threads.code().is_some());
}
