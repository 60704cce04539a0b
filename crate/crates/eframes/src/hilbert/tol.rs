//! Global tolerance policy.
//!
//! All approximate comparisons in the crate go through one [`Tolerances`]
//! value fixed at construction time, so a whole verification campaign runs
//! under a single, reportable policy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative tolerances used by every numerical predicate.
///
/// * `rel_tol`: relative slack for residuals and bound sandwiches.
/// * `rank_tol`: relative cutoff deciding numerical invertibility,
///   `sigma_min > rank_tol * sigma_max`.
/// * `orthonorm_tol`: entrywise slack for Gram-matrix orthonormality and
///   unitarity checks.
///
/// The defaults target `f64`; `f32` runs need wider values passed in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances<T> {
    pub rel_tol: T,
    pub rank_tol: T,
    pub orthonorm_tol: T,
}

impl<T: Real> Tolerances<T> {
    pub fn new(rel_tol: T, rank_tol: T, orthonorm_tol: T) -> Result<Self> {
        let tol = Self {
            rel_tol,
            rank_tol,
            orthonorm_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let field = |name: &str, msg: &str| Error::ValidationError {
            field: name.to_string(),
            message: msg.to_string(),
        };
        let positive = |x: T| x > T::zero() && x.is_finite();
        if !positive(self.rel_tol) {
            return Err(field("rel_tol", "must be strictly positive"));
        }
        if self.rel_tol >= T::one() {
            return Err(field("rel_tol", "must be < 1"));
        }
        if !positive(self.rank_tol) {
            return Err(field("rank_tol", "must be strictly positive"));
        }
        if !positive(self.orthonorm_tol) {
            return Err(field("orthonorm_tol", "must be strictly positive"));
        }
        Ok(())
    }
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-9),
            rank_tol: T::lit(1e-12),
            orthonorm_tol: T::lit(1e-8),
        }
    }
}
