//! Library face of the CLI: the same entry points the binary calls, exposed
//! so integration tests can run campaigns in-process.
//!
//! Exit-code contract: 0 means every executed verifier passed (skips
//! allowed); 1 means at least one verifier failed; 2 means a configuration,
//! validation, or I/O error. Machine-readable output goes only to the designated paths;
//! diagnostics go to stderr.

pub mod campaign;

use std::path::Path;

use eframes::config::{parse_config, parse_gen_spec, ExperimentConfig, VERIFIER_NAMES};
use eframes::error::Error;
use eframes::gen::gen_matrix;
use eframes::report::{matrix_to_json, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Seed/tolerance overrides from the global CLI flags.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub rel_tol: Option<f64>,
}

fn load_config(path: &Path, overrides: Overrides) -> Result<ExperimentConfig, Error> {
    let text = std::fs::read(path).map_err(|e| Error::ValidationError {
        field: "config".into(),
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let mut cfg = parse_config(&text)?;
    if let Some(seed) = overrides.seed {
        cfg = cfg.with_seed(seed);
    }
    if let Some(rel_tol) = overrides.rel_tol {
        cfg = cfg.with_rel_tol(rel_tol)?;
    }
    Ok(cfg)
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::ValidationError {
        field: "out".into(),
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn write_report(path: &Path, run: &RunReport) -> Result<(), Error> {
    let mut body = serde_json::to_string_pretty(run).expect("report serialization");
    body.push('\n');
    write_text(path, &body)
}

fn exit_code_for(run: &RunReport) -> i32 {
    if run.summary.counts.fail > 0 {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}

/// `analyze --config <path> --out <path>`: per-trial optimal-bounds reports.
pub fn run_analyze(config: &Path, out: &Path, overrides: Overrides) -> i32 {
    match (|| -> Result<RunReport, Error> {
        let cfg = load_config(config, overrides)?;
        let run = campaign::run_analysis(&cfg)?;
        write_report(out, &run)?;
        Ok(run)
    })() {
        Ok(run) => exit_code_for(&run),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

/// `verify --theorems <comma-list> --config <path> --out <path> --csv <path>`.
/// With no explicit list, the config's `theorems` field drives the campaign.
pub fn run_verify(
    theorems: Option<&str>,
    config: &Path,
    out: &Path,
    csv: &Path,
    overrides: Overrides,
) -> i32 {
    match (|| -> Result<RunReport, Error> {
        let cfg = load_config(config, overrides)?;
        let names: Vec<String> = match theorems {
            Some(list) => {
                let names: Vec<String> = list
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if names.is_empty() {
                    return Err(Error::ValidationError {
                        field: "theorems".into(),
                        message: "no verifier names given".into(),
                    });
                }
                for name in &names {
                    if !VERIFIER_NAMES.contains(&name.as_str()) {
                        return Err(Error::ValidationError {
                            field: "theorems".into(),
                            message: format!(
                                "unknown verifier `{name}` (allowed: {})",
                                VERIFIER_NAMES.join(", ")
                            ),
                        });
                    }
                }
                names
            }
            None => cfg.theorems.clone(),
        };
        let run = campaign::run_campaign(&cfg, &names)?;
        write_report(out, &run)?;
        write_text(csv, &campaign::render_csv(&run))?;
        Ok(run)
    })() {
        Ok(run) => exit_code_for(&run),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

/// `gen --spec <path> --out <path>`: materialize one matrix mapping and dump
/// its entries plus spectral certificates.
pub fn run_gen(spec_path: &Path, out: &Path, overrides: Overrides) -> i32 {
    match (|| -> Result<(), Error> {
        let text = std::fs::read(spec_path).map_err(|e| Error::ValidationError {
            field: "spec".into(),
            message: format!("cannot read {}: {e}", spec_path.display()),
        })?;
        let (n, mut spec) = parse_gen_spec(&text)?;
        if let Some(seed) = overrides.seed {
            spec = spec.reseeded(seed);
        }
        let tol = eframes::Tolerances64::default();
        let map = gen_matrix::<f64>(&spec, n, &tol)?;
        let body = serde_json::json!({
            "n": n,
            "kind": spec.kind_name(),
            "entries": matrix_to_json(map.matrix()),
            "spectral": {
                "sigma_max": map.spectral().sigma_max,
                "sigma_min": map.spectral().sigma_min,
                "hs_norm": map.spectral().hs_norm,
            },
            "invertible": map.is_invertible(),
        });
        let mut text = serde_json::to_string_pretty(&body).expect("gen serialization");
        text.push('\n');
        write_text(out, &text)
    })() {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
