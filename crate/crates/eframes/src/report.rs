//! Structured verifier reports and campaign summaries: the JSON surface
//! shared by the library, the CLI, and downstream tooling.
//!
//! Reports are deterministic: residual maps are ordered (`BTreeMap`),
//! floats serialize via the shortest round-trip form, and the inputs digest
//! is a SHA-256 over a canonical byte encoding of the verifier inputs.
//! `wall_time_ms` is the one nondeterministic field and is never part of a
//! digest.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::frame::FrameBounds;
use crate::hilbert::{Matrix, Vector, VectorSequence};
use crate::scalar::Real;

/// Outcome of one theorem check on one trial.
///
/// `pass == false` with `skip_reason == None` is a genuine failure and names
/// the offending residual; a set `skip_reason` means the trial did not meet
/// the verifier's hypotheses and counts as neither pass nor fail.
#[derive(Debug, Clone, Serialize)]
pub struct VerifierReport {
    pub verifier: String,
    pub trial: u64,
    pub inputs_digest: String,
    pub predicted: Option<FrameBounds<f64>>,
    pub optimal: Option<FrameBounds<f64>>,
    pub residuals: BTreeMap<String, f64>,
    pub pass: bool,
    pub skip_reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

impl VerifierReport {
    pub fn new(verifier: impl Into<String>, trial: u64, inputs_digest: String) -> Self {
        Self {
            verifier: verifier.into(),
            trial,
            inputs_digest,
            predicted: None,
            optimal: None,
            residuals: BTreeMap::new(),
            pass: true,
            skip_reason: None,
        }
    }

    pub fn skipped(
        verifier: impl Into<String>,
        trial: u64,
        inputs_digest: String,
        reason: impl Into<String>,
    ) -> Self {
        let mut r = Self::new(verifier, trial, inputs_digest);
        r.pass = false;
        r.skip_reason = Some(reason.into());
        r
    }

    pub fn with_predicted(mut self, bounds: FrameBounds<f64>) -> Self {
        self.predicted = Some(bounds);
        self
    }

    pub fn with_optimal(mut self, bounds: FrameBounds<f64>) -> Self {
        self.optimal = Some(bounds);
        self
    }

    pub fn add_residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.to_string(), value);
    }

    /// Fold one assertion into the verdict.
    pub fn check(&mut self, ok: bool) {
        self.pass = self.pass && ok;
    }

    pub fn status(&self) -> Status {
        if self.skip_reason.is_some() {
            Status::Skip
        } else if self.pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Largest recorded residual, the single number exported to CSV.
    pub fn worst_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct CampaignCounts {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

/// Aggregate of one campaign: configuration echo, verdict counts, worst
/// residual per verifier, and wall time (excluded from all digests and from
/// determinism comparisons).
#[derive(Debug, Clone, Serialize)]
pub struct CampaignSummary {
    pub config: ExperimentConfig,
    pub counts: CampaignCounts,
    pub worst_residual: BTreeMap<String, f64>,
    pub wall_time_ms: u64,
}

/// On-disk shape of a campaign run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub reports: Vec<VerifierReport>,
    pub summary: CampaignSummary,
}

/// Matrix JSON encoding: row-major list of rows, complex scalars as
/// [re, im] pairs.
pub fn matrix_to_json<T: Real>(m: &Matrix<T>) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = (0..m.nrows())
        .map(|i| {
            let row: Vec<serde_json::Value> = m
                .row(i)
                .iter()
                .map(|z| serde_json::json!([z.re.as_f64(), z.im.as_f64()]))
                .collect();
            serde_json::Value::Array(row)
        })
        .collect();
    serde_json::Value::Array(rows)
}

/// Canonical SHA-256 digest over verifier inputs. Scalars enter as IEEE-754
/// bit patterns, so the digest is exact, not format-dependent.
#[derive(Debug)]
pub struct DigestBuilder {
    hasher: Sha256,
}

impl Default for DigestBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl DigestBuilder {
    pub fn new() -> Self {
        Self {
            hasher: Sha256::new(),
        }
    }

    pub fn str(mut self, s: &str) -> Self {
        self.hasher.update((s.len() as u64).to_le_bytes());
        self.hasher.update(s.as_bytes());
        self
    }

    pub fn u64(mut self, x: u64) -> Self {
        self.hasher.update(x.to_le_bytes());
        self
    }

    pub fn f64(mut self, x: f64) -> Self {
        self.hasher.update(x.to_bits().to_le_bytes());
        self
    }

    pub fn real<T: Real>(self, x: T) -> Self {
        self.f64(x.as_f64())
    }

    pub fn matrix<T: Real>(mut self, m: &Matrix<T>) -> Self {
        self = self.u64(m.nrows() as u64).u64(m.ncols() as u64);
        for i in 0..m.nrows() {
            for z in m.row(i) {
                self = self.f64(z.re.as_f64()).f64(z.im.as_f64());
            }
        }
        self
    }

    pub fn vector<T: Real>(mut self, v: &Vector<T>) -> Self {
        self = self.u64(v.dim() as u64);
        for z in v.entries() {
            self = self.f64(z.re.as_f64()).f64(z.im.as_f64());
        }
        self
    }

    pub fn sequence<T: Real>(mut self, seq: &VectorSequence<T>) -> Self {
        self = self.u64(seq.len() as u64).u64(seq.dim() as u64);
        for v in seq.iter() {
            self = self.vector(v);
        }
        self
    }

    pub fn finish(self) -> String {
        let bytes = self.hasher.finalize();
        let mut hex = String::with_capacity(bytes.len() * 2);
        for b in bytes {
            use std::fmt::Write;
            write!(hex, "{b:02x}").expect("hex write");
        }
        hex
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let a = DigestBuilder::new().str("thm3").u64(7).f64(1.5).finish();
        let b = DigestBuilder::new().str("thm3").u64(7).f64(1.5).finish();
        let c = DigestBuilder::new().str("thm3").u64(8).f64(1.5).finish();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn status_logic() {
        let mut r = VerifierReport::new("ab", 0, String::new());
        assert_eq!(r.status(), Status::Pass);
        r.add_residual("gap", 0.25);
        r.check(false);
        assert_eq!(r.status(), Status::Fail);
        assert_eq!(r.worst_residual(), 0.25);

        let s = VerifierReport::skipped("ab", 0, String::new(), "a<=0 not applicable");
        assert_eq!(s.status(), Status::Skip);
    }
}
