//! E-frame machinery in finite dimensions.
//!
//! A sequence {f_k} is an E-frame when its image under an invertible matrix
//! mapping E, h_n = (E{f_k})_n = Σ_k E_{n,k} f_k, is a frame:
//! A‖f‖² ≤ Σ_n |⟨f, h_n⟩|² ≤ B‖f‖² for some 0 < A ≤ B. This crate models the
//! ambient separable Hilbert space as ℂ^d and sequences as N terms with zero
//! tail, so every statement about E-frames specializes exactly and becomes
//! machine-checkable.
//!
//! Layers:
//! * [`hilbert`]: complex dense linear algebra with vectors, matrix mappings
//!   with spectral certificates, Hermitian eigendecomposition, polar and
//!   square-root factorizations.
//! * [`frame`]: synthesis/analysis/frame operators, optimal bounds,
//!   Bessel bounds, canonical duals.
//! * [`theorems`]: one machine-checkable verifier per theorem and corollary
//!   about E-frames, including the three-E-orthonormal-basis decomposition.
//! * [`gen`]: seeded deterministic generators for matrices, frames, ONBs.
//! * [`config`] / [`report`]: experiment configuration and the JSON report
//!   schema consumed by the CLI.
//!
//! The numeric core is generic over the real scalar via [`scalar::Real`]
//! (`f32` or `f64`); the aliases below fix the common `f64` instantiation.
//!
//! ```
//! use eframes::frame::EFrameSystem;
//! use eframes::gen::{gen_random_frame, random_matrix, SplitMix64};
//! use eframes::hilbert::MatrixMap;
//! use eframes::theorems::theorem3_verify;
//! use eframes::Tolerances64;
//!
//! let tol = Tolerances64::default();
//! let frame = gen_random_frame::<f64>(3, 5, 7, &tol)?;
//! let map = MatrixMap::new(random_matrix(&mut SplitMix64::new(9), 5, 5), &tol)?;
//! assert!(map.is_invertible());
//!
//! // classical frame bounds transported through the map stay valid
//! let report = theorem3_verify(&frame, &map, &tol)?;
//! assert!(report.pass);
//!
//! // the optimal bounds are the extreme eigenvalues of the frame operator
//! let sys = EFrameSystem::new(frame, map, tol)?;
//! assert!(sys.is_frame());
//! assert!(sys.lambda_min() > 0.0 && sys.lambda_min() <= sys.lambda_max());
//! # Ok::<(), eframes::Error>(())
//! ```

pub mod config;
pub mod error;
pub mod frame;
pub mod gen;
pub mod hilbert;
pub mod report;
pub mod scalar;
pub mod theorems;

pub use error::{Error, Result};
pub use scalar::{Real, C};

/// Complex scalar at the default `f64` precision.
pub type C64 = num_complex::Complex<f64>;
/// `f64` vector in ℂ^d.
pub type Vector64 = hilbert::Vector<f64>;
/// `f64` vector sequence.
pub type VectorSequence64 = hilbert::VectorSequence<f64>;
/// `f64` dense complex matrix.
pub type Matrix64 = hilbert::Matrix<f64>;
/// `f64` matrix mapping with cached spectral data.
pub type MatrixMap64 = hilbert::MatrixMap<f64>;
/// `f64` tolerance policy.
pub type Tolerances64 = hilbert::Tolerances<f64>;
/// `f64` E-frame system.
pub type EFrameSystem64 = frame::EFrameSystem<f64>;
