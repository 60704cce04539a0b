//! Deterministic, seeded generators for matrices, frames, and orthonormal
//! bases.
//!
//! All randomness flows from [`SplitMix64`]. Campaigns derive per-trial
//! seeds as `mix(mix(master_seed) ^ trial_index)` and further per-role
//! seeds the same way with fixed tags, so trials are independent,
//! order-free, and reproducible bit for bit. Draws are made in `f64` and
//! converted to the target scalar last, keeping the stream identical
//! across scalar types.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::eigen::hermitian_eigen;
use crate::hilbert::matrix::{Matrix, MatrixMap};
use crate::hilbert::tol::Tolerances;
use crate::hilbert::vector::{Vector, VectorSequence};
use crate::scalar::{c, Real, C};

/// SplitMix64: Steele, Lea & Flood's 64-bit mixer. Tiny state, full period,
/// and a stateless finalizer we reuse for seed derivation.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

/// The SplitMix64 finalizer as a stateless hash, used to expand one master
/// seed into independent per-trial and per-role seeds.
pub fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial / per-role seed expansion: `mix(mix(master) ^ index)`.
///
/// The master is expanded once before the index is xored in; otherwise two
/// small masters would share most of their trial-seed sets, since
/// `a ^ t = b ^ (t ^ a ^ b)` pairs up small indices.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix(mix(master) ^ index)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [−1, 1), 53 significant bits.
    pub fn uniform<T: Real>(&mut self) -> T {
        let bits = self.next_u64() >> 11;
        T::lit((bits as f64) * (2.0 / 9_007_199_254_740_992.0) - 1.0)
    }

    /// Uniform in (0, 1].
    pub fn uniform_open<T: Real>(&mut self) -> T {
        let bits = (self.next_u64() >> 11) + 1;
        T::lit(bits as f64 / 9_007_199_254_740_992.0)
    }

    /// Standard normal via Box–Muller.
    pub fn normal<T: Real>(&mut self) -> T {
        let u1: T = self.uniform_open();
        let u2: T = self.uniform_open();
        let r = (-(T::one() + T::one()) * u1.ln()).sqrt();
        let theta = (T::PI() + T::PI()) * u2;
        r * theta.cos()
    }

    pub fn complex_uniform<T: Real>(&mut self) -> C<T> {
        c(self.uniform(), self.uniform())
    }

    pub fn complex_normal<T: Real>(&mut self) -> C<T> {
        c(self.normal(), self.normal())
    }
}

/// Random vector with uniform complex entries in the unit box.
pub fn random_vector<T: Real>(rng: &mut SplitMix64, dim: usize) -> Vector<T> {
    Vector::new((0..dim).map(|_| rng.complex_uniform()).collect())
}

/// Haar-ish random unit vector: complex Gaussian entries, normalized.
pub fn random_unit_vector<T: Real>(rng: &mut SplitMix64, dim: usize) -> Vector<T> {
    loop {
        let v: Vector<T> = Vector::new((0..dim).map(|_| rng.complex_normal()).collect());
        if let Some(u) = v.normalized() {
            return u;
        }
    }
}

/// Random dense matrix with uniform complex entries.
pub fn random_matrix<T: Real>(rng: &mut SplitMix64, rows: usize, cols: usize) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| rng.complex_uniform())
}

/// Generator spec for matrix mappings. `seed` fields default to 0 and are
/// reseeded per trial by campaigns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GenSpec {
    Identity,
    Diagonal {
        entries: Vec<[f64; 2]>,
    },
    Gram {
        #[serde(default)]
        seed: u64,
    },
    #[serde(rename = "randomhs")]
    RandomHs {
        rho: f64,
        #[serde(default)]
        seed: u64,
    },
    Dense {
        entries: Vec<Vec<[f64; 2]>>,
    },
}

impl GenSpec {
    /// Fold an extra seed into the stochastic kinds; deterministic kinds are
    /// returned unchanged.
    pub fn reseeded(&self, extra: u64) -> GenSpec {
        match self {
            GenSpec::Gram { seed } => GenSpec::Gram {
                seed: mix(seed ^ extra),
            },
            GenSpec::RandomHs { rho, seed } => GenSpec::RandomHs {
                rho: *rho,
                seed: mix(seed ^ extra),
            },
            other => other.clone(),
        }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self, GenSpec::Gram { .. } | GenSpec::RandomHs { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GenSpec::Identity => "identity",
            GenSpec::Diagonal { .. } => "diagonal",
            GenSpec::Gram { .. } => "gram",
            GenSpec::RandomHs { .. } => "randomhs",
            GenSpec::Dense { .. } => "dense",
        }
    }
}

/// Materialize an N×N matrix mapping from a spec. Deterministic in
/// (spec, n): two calls yield bit-identical matrices.
pub fn gen_matrix<T: Real>(spec: &GenSpec, n: usize, tol: &Tolerances<T>) -> Result<MatrixMap<T>> {
    let matrix = match spec {
        GenSpec::Identity => Matrix::identity(n),
        GenSpec::Diagonal { entries } => {
            if entries.len() != n {
                return Err(Error::BadSpec(format!(
                    "diagonal needs {n} entries, got {}",
                    entries.len()
                )));
            }
            let diag: Vec<C<T>> = entries
                .iter()
                .map(|&[re, im]| c(T::lit(re), T::lit(im)))
                .collect();
            for (k, z) in diag.iter().enumerate() {
                if z.norm() <= tol.rank_tol {
                    return Err(Error::BadSpec(format!(
                        "diagonal entry {k} is zero; an invertible diagonal map needs nonzero entries"
                    )));
                }
            }
            Matrix::diagonal(&diag)
        }
        GenSpec::Gram { seed } => {
            let mut rng = SplitMix64::new(*seed);
            let vectors: Vec<Vector<T>> = (0..n).map(|_| random_vector(&mut rng, n)).collect();
            Matrix::from_fn(n, n, |j, k| vectors[k].inner(&vectors[j]))
        }
        GenSpec::RandomHs { rho, seed } => {
            let in_range = *rho > 0.0 && *rho < 1.0;
            if !in_range {
                return Err(Error::BadSpec(format!("rho must lie in (0, 1), got {rho}")));
            }
            let rho_t = T::lit(*rho);
            let inv_sqrt2 = T::lit(std::f64::consts::FRAC_1_SQRT_2);
            let mut rng = SplitMix64::new(*seed);
            // 1-based decay |E_{n,k}| ≤ ρ^{n+k}; the 1/√2 keeps the box draw
            // inside the disc of that radius
            Matrix::from_fn(n, n, |i, j| {
                let decay = rho_t.powi((i + j + 2) as i32);
                rng.complex_uniform::<T>() * c(decay * inv_sqrt2, T::zero())
            })
        }
        GenSpec::Dense { entries } => {
            if entries.len() != n {
                return Err(Error::BadSpec(format!(
                    "dense matrix needs {n} rows, got {}",
                    entries.len()
                )));
            }
            let mut rows = Vec::with_capacity(n);
            for (i, row) in entries.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::BadSpec(format!(
                        "dense row {i} needs {n} entries, got {}",
                        row.len()
                    )));
                }
                rows.push(
                    row.iter()
                        .map(|&[re, im]| c(T::lit(re), T::lit(im)))
                        .collect(),
                );
            }
            Matrix::from_rows(rows)?
        }
    };
    MatrixMap::new(matrix, tol)
}

const MAX_RETRIES: usize = 8;
const ATTEMPT_TAG: u64 = 0xA77E_0000;

/// Like [`gen_matrix`] but guarantees the invertibility certificate, redrawing
/// stochastic kinds up to 8 times. Deterministic kinds either pass or fail on
/// the single materialization.
pub fn gen_invertible_matrix<T: Real>(
    spec: &GenSpec,
    n: usize,
    tol: &Tolerances<T>,
) -> Result<MatrixMap<T>> {
    if !spec.is_stochastic() {
        let map = gen_matrix(spec, n, tol)?;
        return if map.is_invertible() {
            Ok(map)
        } else {
            Err(Error::SingularMatrix)
        };
    }
    for attempt in 0..MAX_RETRIES {
        let eff = if attempt == 0 {
            spec.clone()
        } else {
            spec.reseeded(ATTEMPT_TAG + attempt as u64)
        };
        let map = gen_matrix(&eff, n, tol)?;
        if map.is_invertible() {
            return Ok(map);
        }
    }
    Err(Error::DegenerateDraw {
        attempts: MAX_RETRIES,
    })
}

/// Frame generator choice for experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FrameSpec {
    /// Columns of seeded random unitaries (cycled until N vectors), each then
    /// nudged by `jitter` times a random unit vector. `jitter: 0` with N = d
    /// reproduces an exact orthonormal basis.
    Unitary { jitter: f64 },
    /// Fully random vectors with uniform complex entries.
    Random,
}

impl Default for FrameSpec {
    fn default() -> Self {
        FrameSpec::Unitary { jitter: 0.25 }
    }
}

fn orthonormalize<T: Real>(columns: &mut [Vector<T>]) -> bool {
    let dim = columns[0].dim();
    let floor = T::lit(1e-8) * T::from_usize(dim).expect("small dim").sqrt();
    for k in 0..columns.len() {
        let mut v = columns[k].clone();
        // two Gram–Schmidt passes: the second pass mops up cancellation
        for _ in 0..2 {
            for q in columns.iter().take(k) {
                let coeff = v.inner(q);
                v.axpy(-coeff, q);
            }
        }
        let norm = v.norm();
        if norm < floor {
            return false;
        }
        columns[k] = v.scale(c(norm.recip(), T::zero()));
    }
    true
}

/// Seeded random orthonormal basis of ℂ^d: Gram residual below 1e-12.
pub fn gen_onb<T: Real>(d: usize, seed: u64) -> Result<VectorSequence<T>> {
    assert!(d >= 1, "dimension must be at least 1");
    for attempt in 0..MAX_RETRIES {
        let mut rng = SplitMix64::new(derive_seed(seed, ATTEMPT_TAG + attempt as u64));
        let mut columns: Vec<Vector<T>> = (0..d).map(|_| random_vector(&mut rng, d)).collect();
        if orthonormalize(&mut columns) {
            return VectorSequence::new(columns);
        }
    }
    Err(Error::DegenerateDraw {
        attempts: MAX_RETRIES,
    })
}

fn classical_frame_extremes<T: Real>(seq: &VectorSequence<T>) -> (T, T) {
    let eig = hermitian_eigen(&crate::frame::classical_frame_operator(seq))
        .expect("frame operator eigen");
    (eig.lambda_min(), eig.lambda_max())
}

/// Seeded random frame of N vectors spanning ℂ^d, spectrally certified
/// (λ_min of the classical frame operator above the rank cutoff). Redraws at
/// most 8 times before reporting a degenerate draw.
pub fn gen_frame<T: Real>(
    spec: &FrameSpec,
    d: usize,
    n: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Result<VectorSequence<T>> {
    if n < d {
        return Err(Error::ShapeMismatch { len: n, dim: d });
    }
    for attempt in 0..MAX_RETRIES {
        let attempt_seed = derive_seed(seed, ATTEMPT_TAG + attempt as u64);
        let seq = draw_frame(spec, d, n, attempt_seed)?;
        let (lo, hi) = classical_frame_extremes(&seq);
        if lo > tol.rank_tol * hi && lo > T::zero() {
            return Ok(seq);
        }
    }
    Err(Error::DegenerateDraw {
        attempts: MAX_RETRIES,
    })
}

/// [`gen_frame`] with the default unitary-columns generator.
pub fn gen_random_frame<T: Real>(
    d: usize,
    n: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Result<VectorSequence<T>> {
    gen_frame(&FrameSpec::default(), d, n, seed, tol)
}

fn draw_frame<T: Real>(
    spec: &FrameSpec,
    d: usize,
    n: usize,
    seed: u64,
) -> Result<VectorSequence<T>> {
    match spec {
        FrameSpec::Unitary { jitter } => {
            if *jitter < 0.0 {
                return Err(Error::BadSpec(format!(
                    "jitter must be nonnegative, got {jitter}"
                )));
            }
            let blocks = n.div_ceil(d);
            let mut vectors: Vec<Vector<T>> = Vec::with_capacity(blocks * d);
            for b in 0..blocks {
                let onb = gen_onb::<T>(d, derive_seed(seed, 0xB10C + b as u64))?;
                vectors.extend(onb.iter().cloned());
            }
            vectors.truncate(n);
            if *jitter > 0.0 {
                let jit = T::lit(*jitter);
                let mut rng = SplitMix64::new(derive_seed(seed, 0x3177));
                for v in &mut vectors {
                    let dir = random_unit_vector(&mut rng, d);
                    v.axpy(c(jit, T::zero()), &dir);
                }
            }
            VectorSequence::new(vectors)
        }
        FrameSpec::Random => {
            let mut rng = SplitMix64::new(seed);
            VectorSequence::new((0..n).map(|_| random_vector(&mut rng, d)).collect())
        }
    }
}
