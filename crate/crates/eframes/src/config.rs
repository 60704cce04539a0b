//! Experiment configuration: strict JSON parsing and validation.
//!
//! The schema is parsed by hand from a `serde_json::Value` so that unknown
//! keys are rejected and every validation failure names the offending field.
//! Defaults exist only for `tolerances` (the documented tolerance policy)
//! and for `frame` (unitary columns with jitter 0.25, the generator the
//! schema's own minimal example relies on).

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gen::{FrameSpec, GenSpec};
use crate::hilbert::tol::Tolerances;

/// The fixed verifier-name set accepted by `verify`.
pub const VERIFIER_NAMES: [&str; 8] = [
    "thm3",
    "diag",
    "gram",
    "bessel-id",
    "ab",
    "eonb",
    "decomp",
    "dual",
];

/// Dimension guard: configs describe desk-scale experiments, not HPC runs.
const MAX_DIM: usize = 512;
const MAX_TRIALS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub len: usize,
    pub trials: usize,
    pub seed: u64,
    pub matrix: GenSpec,
    pub frame: FrameSpec,
    pub tolerances: Tolerances<f64>,
    pub theorems: Vec<String>,
}

impl ExperimentConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Result<Self> {
        self.tolerances.rel_tol = rel_tol;
        self.tolerances.validate()?;
        Ok(self)
    }
}

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::ValidationError {
        field: field.to_string(),
        message: message.into(),
    }
}

fn as_object<'v>(value: &'v Value, field: &str) -> Result<&'v serde_json::Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| invalid(field, "expected a JSON object"))
}

fn require<'v>(map: &'v serde_json::Map<String, Value>, field: &str) -> Result<&'v Value> {
    map.get(field)
        .ok_or_else(|| invalid(field, "missing required field"))
}

fn parse_usize(value: &Value, field: &str) -> Result<usize> {
    value
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| invalid(field, "expected a nonnegative integer"))
}

fn parse_u64(value: &Value, field: &str) -> Result<u64> {
    value
        .as_u64()
        .ok_or_else(|| invalid(field, "expected a 64-bit unsigned integer"))
}

fn parse_f64(value: &Value, field: &str) -> Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| invalid(field, "expected a number"))
}

fn parse_complex_pair(value: &Value, field: &str) -> Result<[f64; 2]> {
    let arr = value
        .as_array()
        .ok_or_else(|| invalid(field, "expected a [re, im] pair"))?;
    if arr.len() != 2 {
        return Err(invalid(field, "complex scalar must be a [re, im] pair"));
    }
    Ok([parse_f64(&arr[0], field)?, parse_f64(&arr[1], field)?])
}

fn check_keys(map: &serde_json::Map<String, Value>, allowed: &[&str], context: &str) -> Result<()> {
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(invalid(
                key,
                format!(
                    "unknown field in {context} (allowed: {})",
                    allowed.join(", ")
                ),
            ));
        }
    }
    Ok(())
}

fn parse_matrix_spec(value: &Value) -> Result<GenSpec> {
    let map = as_object(value, "matrix")?;
    let kind = require(map, "kind")?
        .as_str()
        .ok_or_else(|| invalid("kind", "expected a string"))?;
    match kind {
        "identity" => {
            check_keys(map, &["kind"], "matrix(identity)")?;
            Ok(GenSpec::Identity)
        }
        "diagonal" => {
            check_keys(map, &["kind", "entries"], "matrix(diagonal)")?;
            let raw = require(map, "entries")?
                .as_array()
                .ok_or_else(|| invalid("entries", "expected an array of [re, im] pairs"))?;
            let entries = raw
                .iter()
                .map(|v| parse_complex_pair(v, "entries"))
                .collect::<Result<Vec<_>>>()?;
            Ok(GenSpec::Diagonal { entries })
        }
        "gram" => {
            check_keys(map, &["kind", "seed"], "matrix(gram)")?;
            let seed = match map.get("seed") {
                Some(v) => parse_u64(v, "seed")?,
                None => 0,
            };
            Ok(GenSpec::Gram { seed })
        }
        "randomhs" => {
            check_keys(map, &["kind", "rho", "seed"], "matrix(randomhs)")?;
            let rho = parse_f64(require(map, "rho")?, "rho")?;
            let in_range = rho > 0.0 && rho < 1.0;
            if !in_range {
                return Err(invalid("rho", format!("must lie in (0, 1), got {rho}")));
            }
            let seed = match map.get("seed") {
                Some(v) => parse_u64(v, "seed")?,
                None => 0,
            };
            Ok(GenSpec::RandomHs { rho, seed })
        }
        "dense" => {
            check_keys(map, &["kind", "entries"], "matrix(dense)")?;
            let raw = require(map, "entries")?
                .as_array()
                .ok_or_else(|| invalid("entries", "expected an array of rows"))?;
            let mut entries = Vec::with_capacity(raw.len());
            for row in raw {
                let row = row
                    .as_array()
                    .ok_or_else(|| invalid("entries", "each row must be an array"))?;
                entries.push(
                    row.iter()
                        .map(|v| parse_complex_pair(v, "entries"))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            Ok(GenSpec::Dense { entries })
        }
        other => Err(invalid(
            "kind",
            format!("unknown matrix kind `{other}` (identity, diagonal, gram, randomhs, dense)"),
        )),
    }
}

fn parse_frame_spec(value: &Value) -> Result<FrameSpec> {
    let map = as_object(value, "frame")?;
    let kind = require(map, "kind")?
        .as_str()
        .ok_or_else(|| invalid("kind", "expected a string"))?;
    match kind {
        "unitary" => {
            check_keys(map, &["kind", "jitter"], "frame(unitary)")?;
            let jitter = match map.get("jitter") {
                Some(v) => parse_f64(v, "jitter")?,
                None => 0.25,
            };
            if !(jitter.is_finite() && jitter >= 0.0) {
                return Err(invalid("jitter", "must be finite and nonnegative"));
            }
            Ok(FrameSpec::Unitary { jitter })
        }
        "random" => {
            check_keys(map, &["kind"], "frame(random)")?;
            Ok(FrameSpec::Random)
        }
        other => Err(invalid(
            "kind",
            format!("unknown frame kind `{other}` (unitary, random)"),
        )),
    }
}

fn parse_tolerances(value: &Value) -> Result<Tolerances<f64>> {
    let map = as_object(value, "tolerances")?;
    check_keys(map, &["rel_tol", "rank_tol", "orthonorm_tol"], "tolerances")?;
    let defaults = Tolerances::<f64>::default();
    let pick = |key: &str, fallback: f64| -> Result<f64> {
        match map.get(key) {
            Some(v) => parse_f64(v, key),
            None => Ok(fallback),
        }
    };
    let tol = Tolerances {
        rel_tol: pick("rel_tol", defaults.rel_tol)?,
        rank_tol: pick("rank_tol", defaults.rank_tol)?,
        orthonorm_tol: pick("orthonorm_tol", defaults.orthonorm_tol)?,
    };
    tol.validate()?;
    Ok(tol)
}

/// Parse a standalone generator spec file `{"n": <size>, "matrix": {...}}`
/// for the `gen` subcommand.
pub fn parse_gen_spec(text: &[u8]) -> Result<(usize, GenSpec)> {
    let value: Value = serde_json::from_slice(text).map_err(|e| Error::ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let map = as_object(&value, "spec")?;
    check_keys(map, &["n", "matrix"], "gen spec")?;
    let n = parse_usize(require(map, "n")?, "n")?;
    if !(1..=MAX_DIM).contains(&n) {
        return Err(invalid("n", format!("must be in 1..={MAX_DIM}")));
    }
    let spec = parse_matrix_spec(require(map, "matrix")?)?;
    if let GenSpec::Diagonal { entries } = &spec {
        if entries.len() != n {
            return Err(invalid(
                "entries",
                format!("diagonal needs exactly n = {n} entries"),
            ));
        }
    }
    if let GenSpec::Dense { entries } = &spec {
        if entries.len() != n || entries.iter().any(|row| row.len() != n) {
            return Err(invalid("entries", format!("dense matrix must be {n}x{n}")));
        }
    }
    Ok((n, spec))
}

/// Parse and fully validate an experiment configuration from JSON text.
pub fn parse_config(text: &[u8]) -> Result<ExperimentConfig> {
    let value: Value = serde_json::from_slice(text).map_err(|e| Error::ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    config_from_value(&value)
}

fn config_from_value(value: &Value) -> Result<ExperimentConfig> {
    let map = as_object(value, "config")?;
    check_keys(
        map,
        &[
            "dim",
            "len",
            "trials",
            "seed",
            "matrix",
            "frame",
            "tolerances",
            "theorems",
        ],
        "config",
    )?;

    let dim = parse_usize(require(map, "dim")?, "dim")?;
    if !(1..=MAX_DIM).contains(&dim) {
        return Err(invalid("dim", format!("must be in 1..={MAX_DIM}")));
    }
    let len = parse_usize(require(map, "len")?, "len")?;
    if len < dim {
        return Err(invalid("len", format!("must be >= dim ({dim})")));
    }
    let trials = parse_usize(require(map, "trials")?, "trials")?;
    if !(1..=MAX_TRIALS).contains(&trials) {
        return Err(invalid("trials", format!("must be in 1..={MAX_TRIALS}")));
    }
    let seed = parse_u64(require(map, "seed")?, "seed")?;

    let matrix = parse_matrix_spec(require(map, "matrix")?)?;
    if let GenSpec::Diagonal { entries } = &matrix {
        if entries.len() != len {
            return Err(invalid(
                "entries",
                format!(
                    "diagonal needs exactly len = {len} entries, got {}",
                    entries.len()
                ),
            ));
        }
    }
    if let GenSpec::Dense { entries } = &matrix {
        if entries.len() != len || entries.iter().any(|row| row.len() != len) {
            return Err(invalid(
                "entries",
                format!("dense matrix must be {len}x{len}"),
            ));
        }
    }

    let frame = match map.get("frame") {
        Some(v) => parse_frame_spec(v)?,
        None => FrameSpec::default(),
    };
    let tolerances = match map.get("tolerances") {
        Some(v) => parse_tolerances(v)?,
        None => Tolerances::default(),
    };
    if let GenSpec::Diagonal { entries } = &matrix {
        for (k, &[re, im]) in entries.iter().enumerate() {
            if (re * re + im * im).sqrt() <= tolerances.rank_tol {
                return Err(invalid(
                    "entries",
                    format!("diagonal entry {k} is zero; the map must be invertible"),
                ));
            }
        }
    }

    let theorems_raw = require(map, "theorems")?
        .as_array()
        .ok_or_else(|| invalid("theorems", "expected an array of verifier names"))?;
    if theorems_raw.is_empty() {
        return Err(invalid(
            "theorems",
            "at least one verifier name is required",
        ));
    }
    let mut theorems = Vec::with_capacity(theorems_raw.len());
    for v in theorems_raw {
        let name = v
            .as_str()
            .ok_or_else(|| invalid("theorems", "verifier names must be strings"))?;
        if !VERIFIER_NAMES.contains(&name) {
            return Err(invalid(
                "theorems",
                format!(
                    "unknown verifier `{name}` (allowed: {})",
                    VERIFIER_NAMES.join(", ")
                ),
            ));
        }
        if theorems.iter().any(|t| t == name) {
            return Err(invalid("theorems", format!("duplicate verifier `{name}`")));
        }
        theorems.push(name.to_string());
    }

    Ok(ExperimentConfig {
        dim,
        len,
        trials,
        seed,
        matrix,
        frame,
        tolerances,
        theorems,
    })
}
