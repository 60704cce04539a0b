//! End-to-end checks of the CLI contract: exit codes, output schemas, and
//! the documented fixtures.

use std::path::PathBuf;
use std::process::Command;

use eframes_cli::{run_analyze, run_gen, run_verify, Overrides, EXIT_CONFIG, EXIT_OK};

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn read_json(path: &PathBuf) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

const DIAG_CONFIG: &str = r#"{
  "dim": 2, "len": 2, "trials": 2, "seed": 42,
  "matrix": {"kind": "diagonal", "entries": [[2, 0], [3, 0]]},
  "frame": {"kind": "unitary", "jitter": 0.0},
  "theorems": ["thm3", "diag"]
}"#;

#[test]
fn analyze_diagonal_reports_optimal_4_9() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "cfg.json", DIAG_CONFIG);
    let out = dir.path().join("report.json");
    assert_eq!(run_analyze(&cfg, &out, Overrides::default()), EXIT_OK);
    let report = read_json(&out);
    // diag(2,3) applied to any orthonormal basis has frame operator with
    // spectrum {4, 9}
    for r in report["reports"].as_array().unwrap() {
        assert_eq!(r["verifier"], "optimal-bounds");
        let opt = &r["optimal"];
        assert!((opt["lower"].as_f64().unwrap() - 4.0).abs() < 1e-9);
        assert!((opt["upper"].as_f64().unwrap() - 9.0).abs() < 1e-9);
    }
    assert_eq!(report["summary"]["counts"]["fail"], 0);
}

#[test]
fn zero_trials_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        &DIAG_CONFIG.replace("\"trials\": 2", "\"trials\": 0"),
    );
    let out = dir.path().join("report.json");
    assert_eq!(run_analyze(&cfg, &out, Overrides::default()), EXIT_CONFIG);
    assert!(!out.exists());
}

#[test]
fn missing_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    assert_eq!(
        run_analyze(&dir.path().join("nope.json"), &out, Overrides::default()),
        EXIT_CONFIG
    );
}

#[test]
fn unknown_verifier_name_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "cfg.json", DIAG_CONFIG);
    let out = dir.path().join("report.json");
    let csv = dir.path().join("table.csv");
    assert_eq!(
        run_verify(Some("thm3,thm9"), &cfg, &out, &csv, Overrides::default()),
        EXIT_CONFIG
    );
}

// E = [[1,1],[0,1]] has a = 0, so the (a,b) theorem does not apply
#[test]
fn ab_shear_fixture_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{
          "dim": 2, "len": 2, "trials": 1, "seed": 7,
          "matrix": {"kind": "dense", "entries": [[[1,0],[1,0]],[[0,0],[1,0]]]},
          "theorems": ["ab"]
        }"#,
    );
    let out = dir.path().join("report.json");
    let csv = dir.path().join("table.csv");
    assert_eq!(
        run_verify(None, &cfg, &out, &csv, Overrides::default()),
        EXIT_OK
    );
    let report = read_json(&out);
    let row = &report["reports"][0];
    assert_eq!(row["skip_reason"], "a<=0 not applicable");
    assert_eq!(report["summary"]["counts"]["skip"], 1);
    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial,verifier,A_pred,B_pred,A_opt,B_opt,residual,status"
    );
    assert!(lines.next().unwrap().ends_with(",skip"));
}

#[test]
fn decomp_fixture_residual_is_tiny() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{
          "dim": 2, "len": 2, "trials": 1, "seed": 7,
          "matrix": {"kind": "identity"},
          "frame": {"kind": "unitary", "jitter": 0.0},
          "theorems": ["decomp"]
        }"#,
    );
    let out = dir.path().join("report.json");
    let csv = dir.path().join("table.csv");
    assert_eq!(
        run_verify(None, &cfg, &out, &csv, Overrides::default()),
        EXIT_OK
    );
    let report = read_json(&out);
    let row = &report["reports"][0];
    assert_eq!(row["pass"], true);
    assert!(row["residuals"]["reconstruction"].as_f64().unwrap() <= 1e-8);
}

// a dense zero matrix sends every frame to the zero sequence, so the
// optimal-bounds analysis records failures and the exit code reports them
#[test]
fn analyze_degenerate_system_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{
          "dim": 2, "len": 2, "trials": 1, "seed": 3,
          "matrix": {"kind": "dense", "entries": [[[0,0],[0,0]],[[0,0],[0,0]]]},
          "theorems": ["bessel-id"]
        }"#,
    );
    let out = dir.path().join("report.json");
    assert_eq!(run_analyze(&cfg, &out, Overrides::default()), 1);
    let report = read_json(&out);
    assert_eq!(report["summary"]["counts"]["fail"], 1);
    assert!(
        report["reports"][0]["residuals"]["frame_defect"]
            .as_f64()
            .unwrap()
            > 0.0
    );
}

// an absurdly tight --tol forces genuine verifier failures and exit code 1
#[test]
fn pathological_tolerance_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{
          "dim": 2, "len": 3, "trials": 2, "seed": 5,
          "matrix": {"kind": "randomhs", "rho": 0.7, "seed": 4},
          "theorems": ["bessel-id"]
        }"#,
    );
    let out = dir.path().join("report.json");
    let csv = dir.path().join("table.csv");
    let tight = Overrides {
        seed: None,
        rel_tol: Some(1e-300),
    };
    assert_eq!(run_verify(None, &cfg, &out, &csv, tight), 1);
    let report = read_json(&out);
    assert!(report["summary"]["counts"]["fail"].as_u64().unwrap() > 0);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.contains(",fail"));
}

// a map that passes the invertibility certificate but pushes the system
// outside the certifiable regime must produce rows, not a campaign abort
#[test]
fn ill_conditioned_map_yields_rows_not_abort() {
    // singular values (1, 1, 1e-8), rotated so nothing stays diagonal
    let (c, s) = (0.7f64.cos(), 0.7f64.sin());
    let u = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
    let v = [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]];
    let sig = [1.0, 1.0, 1e-8];
    let entry = |i: usize, j: usize| -> f64 {
        (0..3).map(|k| u[i][k] * sig[k] * v[j][k]).sum()
    };
    let rows: Vec<String> = (0..3)
        .map(|i| {
            let cells: Vec<String> = (0..3).map(|j| format!("[{},0]", entry(i, j))).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    let config = format!(
        r#"{{"dim":3,"len":3,"trials":2,"seed":1,
            "matrix":{{"kind":"dense","entries":[{}]}},
            "frame":{{"kind":"unitary","jitter":0.2}},
            "theorems":["thm3","eonb","decomp","dual"]}}"#,
        rows.join(",")
    );
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "cfg.json", &config);
    let out = dir.path().join("report.json");
    let csv = dir.path().join("table.csv");
    assert_eq!(run_verify(None, &cfg, &out, &csv, Overrides::default()), 1);
    let report = read_json(&out);
    let counts = &report["summary"]["counts"];
    assert_eq!(
        counts["pass"].as_u64().unwrap()
            + counts["fail"].as_u64().unwrap()
            + counts["skip"].as_u64().unwrap(),
        8
    );
    assert!(counts["fail"].as_u64().unwrap() > 0);
    for row in report["reports"].as_array().unwrap() {
        if row["verifier"] == "thm3" {
            assert_eq!(row["pass"], false);
            assert!(row["residuals"]["frame_defect"].as_f64().unwrap() > 0.0);
        }
        if row["verifier"] == "dual" {
            assert_eq!(row["skip_reason"], "transformed sequence is not a frame");
        }
    }
}

#[test]
fn seed_override_changes_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "cfg.json", DIAG_CONFIG);
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let with_seed = Overrides {
        seed: Some(1234),
        rel_tol: None,
    };
    assert_eq!(
        run_verify(None, &cfg, &out_a, &csv_a, Overrides::default()),
        EXIT_OK
    );
    assert_eq!(run_verify(None, &cfg, &out_b, &csv_b, with_seed), EXIT_OK);
    let a = read_json(&out_a);
    let b = read_json(&out_b);
    assert_eq!(b["summary"]["config"]["seed"], 1234);
    assert_ne!(
        a["reports"][0]["inputs_digest"],
        b["reports"][0]["inputs_digest"]
    );
}

#[test]
fn gen_output_is_deterministic_and_shaped() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        &dir,
        "spec.json",
        r#"{"n": 4, "matrix": {"kind": "randomhs", "rho": 0.5, "seed": 9}}"#,
    );
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    assert_eq!(run_gen(&spec, &out_a, Overrides::default()), EXIT_OK);
    assert_eq!(run_gen(&spec, &out_b, Overrides::default()), EXIT_OK);
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap()
    );
    let body = read_json(&out_a);
    assert_eq!(body["entries"].as_array().unwrap().len(), 4);
    assert_eq!(body["entries"][0].as_array().unwrap().len(), 4);
    assert_eq!(body["entries"][0][0].as_array().unwrap().len(), 2);
    assert!(body["spectral"]["hs_norm"].as_f64().unwrap() > 0.0);
}

// the installed binary honors the same contract as the library entry points
#[test]
fn binary_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "cfg.json", DIAG_CONFIG);
    let out = dir.path().join("report.json");
    let csv = dir.path().join("table.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_eframes"))
        .args(["verify", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .arg("--csv")
        .arg(&csv)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report = read_json(&out);
    assert_eq!(report["summary"]["counts"]["fail"], 0);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("trial,verifier,A_pred,B_pred,A_opt,B_opt,residual,status\n"));

    let bad = Command::new(env!("CARGO_BIN_EXE_eframes"))
        .args(["verify", "--theorems", "bogus", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .arg("--csv")
        .arg(&csv)
        .status()
        .unwrap();
    assert_eq!(bad.code(), Some(2));
}
