//! Machine-checkable verifiers: one per theorem or corollary about E-frames.
//!
//! Each verifier computes the theorem's predicted bounds or identity from
//! its hypotheses, evaluates the tight (spectral) quantities independently,
//! and reports the comparison. For bound theorems the check is a sandwich:
//! the predicted pair (A_pred, B_pred) must satisfy
//! A_pred ≤ λ_min(S_E)·(1+rel_tol) and λ_max(S_E) ≤ B_pred·(1+rel_tol),
//! because the extreme eigenvalues of the frame operator are the optimal
//! bounds any valid prediction must enclose.

use crate::error::{Error, Result};
use crate::frame::{
    classical_frame_bounds, CoefficientVector, EFrameSystem, FrameBounds, FrameStatus, Provenance,
};
use crate::gen::{random_vector, SplitMix64};
use crate::hilbert::eigen::operator_norm;
use crate::hilbert::factor::{hermitian_sqrt, polar_decompose};
use crate::hilbert::matrix::{Matrix, MatrixMap};
use crate::hilbert::tol::Tolerances;
use crate::hilbert::vector::{Vector, VectorSequence};
use crate::report::{DigestBuilder, VerifierReport};
use crate::scalar::{c, cr, Real, C};

/// Sandwich outcome for a classical frame pushed through an invertible map:
/// predicted (C·A, ‖E‖²·B) against the optimal spectrum of S_E.
#[derive(Debug, Clone)]
pub struct Theorem3Report<T> {
    pub classical_bounds: FrameBounds<T>,
    pub e_norm: T,
    pub c_lower: T,
    pub predicted: FrameBounds<T>,
    pub optimal: FrameBounds<T>,
    pub pass: bool,
}

fn sandwich_pass<T: Real>(predicted: &FrameBounds<T>, lo: T, hi: T, rel_tol: T) -> bool {
    let one_plus = T::one() + rel_tol;
    predicted.lower.expect("predicted bounds carry a lower") <= lo * one_plus
        && hi <= predicted.upper * one_plus
}

fn sandwich_margins<T: Real>(predicted: &FrameBounds<T>, lo: T, hi: T) -> (f64, f64) {
    let scale = hi.max(T::epsilon());
    (
        ((predicted.lower.expect("lower present") - lo) / scale).as_f64(),
        ((hi - predicted.upper) / scale).as_f64(),
    )
}

/// A classical frame with bounds (A, B) is an E-frame with bounds
/// (C·A, ‖E‖²·B) for invertible E, where C = sigma_min(E)² realizes the
/// lower-bound constant.
pub fn theorem3_verify<T: Real>(
    frame: &VectorSequence<T>,
    map: &MatrixMap<T>,
    tol: &Tolerances<T>,
) -> Result<Theorem3Report<T>> {
    let classical = match classical_frame_bounds(frame, tol)? {
        FrameStatus::Frame(b) => b,
        FrameStatus::NotAFrame {
            lambda_min,
            lambda_max,
        } => {
            return Err(Error::NotAFrame {
                lambda_min: lambda_min.as_f64(),
                lambda_max: lambda_max.as_f64(),
            })
        }
    };
    if !map.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let spectral = map.spectral();
    let e_norm = spectral.sigma_max;
    let c_lower = spectral.sigma_min * spectral.sigma_min;
    let a = classical.lower.expect("classical frame has a lower bound");
    let b = classical.upper;
    let predicted = FrameBounds::new(c_lower * a, e_norm * e_norm * b, Provenance::Theorem3)?;

    let sys = EFrameSystem::new(frame.clone(), map.clone(), *tol)?;
    let (lo, hi) = (sys.lambda_min(), sys.lambda_max());
    let optimal = match sys.optimal_frame_bounds() {
        FrameStatus::Frame(b) => b,
        FrameStatus::NotAFrame {
            lambda_min,
            lambda_max,
        } => {
            return Err(Error::NotAFrame {
                lambda_min: lambda_min.as_f64(),
                lambda_max: lambda_max.as_f64(),
            })
        }
    };
    let pass = sandwich_pass(&predicted, lo, hi, tol.rel_tol);
    Ok(Theorem3Report {
        classical_bounds: classical,
        e_norm,
        c_lower,
        predicted,
        optimal,
        pass,
    })
}

impl<T: Real> Theorem3Report<T> {
    pub fn into_verifier_report(
        self,
        verifier: &str,
        trial: u64,
        digest: String,
    ) -> VerifierReport {
        let lo = self.optimal.lower.expect("optimal bounds are two-sided");
        let hi = self.optimal.upper;
        let (lower_margin, upper_margin) = sandwich_margins(&self.predicted, lo, hi);
        let mut report = VerifierReport::new(verifier, trial, digest)
            .with_predicted(self.predicted.to_f64())
            .with_optimal(self.optimal.to_f64());
        report.add_residual("lower_margin", lower_margin);
        report.add_residual("upper_margin", upper_margin);
        report.check(self.pass);
        report
    }
}

/// Diagonal corollary: for E = diag(λ_n) with inf|λ_n| > 0, a classical
/// (A, B)-frame is an E-frame with bounds (C·A, λ²·B), C = (min|λ_n|)² and
/// λ = max|λ_n|; moreover ‖E‖ = λ exactly.
pub fn diagonal_corollary_verify<T: Real>(
    lambdas: &[C<T>],
    frame: &VectorSequence<T>,
    tol: &Tolerances<T>,
) -> Result<VerifierReport> {
    if lambdas.len() != frame.len() {
        return Err(Error::DimensionMismatch {
            expected: frame.len(),
            got: lambdas.len(),
        });
    }
    let mut min_mod = T::infinity();
    let mut max_mod = T::zero();
    for (k, z) in lambdas.iter().enumerate() {
        let m = z.norm();
        if m <= tol.rank_tol {
            return Err(Error::ZeroDiagonal {
                index: k,
                modulus: m.as_f64(),
            });
        }
        min_mod = min_mod.min(m);
        max_mod = max_mod.max(m);
    }
    let classical = match classical_frame_bounds(frame, tol)? {
        FrameStatus::Frame(b) => b,
        FrameStatus::NotAFrame {
            lambda_min,
            lambda_max,
        } => {
            return Err(Error::NotAFrame {
                lambda_min: lambda_min.as_f64(),
                lambda_max: lambda_max.as_f64(),
            })
        }
    };
    let map = MatrixMap::from_diagonal(lambdas, tol)?;

    let digest = DigestBuilder::new()
        .str("diag")
        .sequence(frame)
        .matrix(map.matrix())
        .finish();

    // ‖E‖ = max|λ_n|, exactly up to rounding
    let enorm_gap = (map.operator_norm() - max_mod).abs() / max_mod;

    let a = classical.lower.expect("classical frame has a lower bound");
    let b = classical.upper;
    let predicted = FrameBounds::new(
        min_mod * min_mod * a,
        max_mod * max_mod * b,
        Provenance::Diagonal,
    )?;
    let sys = EFrameSystem::new(frame.clone(), map, *tol)?;
    let (lo, hi) = (sys.lambda_min(), sys.lambda_max());
    let (lower_margin, upper_margin) = sandwich_margins(&predicted, lo, hi);

    let mut report = VerifierReport::new("diag", 0, digest).with_predicted(predicted.to_f64());
    if let FrameStatus::Frame(optimal) = sys.optimal_frame_bounds() {
        report = report.with_optimal(optimal.to_f64());
    }
    report.add_residual("enorm_gap", enorm_gap.as_f64());
    report.add_residual("lower_margin", lower_margin);
    report.add_residual("upper_margin", upper_margin);
    report.check(enorm_gap <= tol.rel_tol);
    report.check(sandwich_pass(&predicted, lo, hi, tol.rel_tol));
    Ok(report)
}

/// Gram matrix E_{j,k} = ⟨f_k, f_j⟩ of a sequence.
pub fn gram_matrix<T: Real>(seq: &VectorSequence<T>) -> Matrix<T> {
    Matrix::from_fn(seq.len(), seq.len(), |j, k| seq.get(k).inner(seq.get(j)))
}

/// Gram corollary: a Riesz basis is an E-frame for its own Gram matrix.
/// In the finite model a Riesz basis is d linearly independent vectors, so
/// N = d is required and independence is certified by the invertibility of
/// the Gram matrix.
pub fn gram_corollary_verify<T: Real>(
    riesz: &VectorSequence<T>,
    tol: &Tolerances<T>,
) -> Result<VerifierReport> {
    if riesz.len() != riesz.dim() {
        return Err(Error::ShapeMismatch {
            len: riesz.len(),
            dim: riesz.dim(),
        });
    }
    let gram = gram_matrix(riesz);
    let map = MatrixMap::new(gram, tol)?;
    if !map.is_invertible() {
        return Err(Error::NotRieszBasis);
    }
    let digest = DigestBuilder::new()
        .str("gram")
        .sequence(riesz)
        .matrix(map.matrix())
        .finish();
    let t3 = theorem3_verify(riesz, &map, tol)?;
    Ok(t3.into_verifier_report("gram", 0, digest))
}

/// Bessel-identity corollary: Σ_n |⟨f, (E{f_k})_n⟩|² = ‖Ē (T* f)‖²_{ℓ²},
/// where T* is the classical analysis operator and Ē the entrywise
/// conjugate of E. Checked on `trials` seeded random vectors f.
pub fn bessel_identity_verify<T: Real>(
    seq: &VectorSequence<T>,
    map: &MatrixMap<T>,
    trials: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Result<VerifierReport> {
    let transformed = map.apply(seq)?;
    let e_conj = map.matrix().conj();
    let mut rng = SplitMix64::new(seed);
    let mut max_rel_gap = T::zero();
    for _ in 0..trials.max(1) {
        let f = random_vector::<T>(&mut rng, seq.dim());
        let lhs: T = transformed.iter().map(|h| f.inner(h).norm_sqr()).sum();
        let coeffs = Vector::new(seq.iter().map(|fk| f.inner(fk)).collect());
        let rhs = e_conj.mul_vector(&coeffs).norm_sqr();
        let denom = lhs.max(rhs);
        let gap = if denom > T::zero() {
            (lhs - rhs).abs() / denom
        } else {
            T::zero()
        };
        max_rel_gap = max_rel_gap.max(gap);
    }
    let digest = DigestBuilder::new()
        .str("bessel-id")
        .sequence(seq)
        .matrix(map.matrix())
        .u64(trials as u64)
        .u64(seed)
        .finish();
    let mut report = VerifierReport::new("bessel-id", 0, digest);
    report.add_residual("max_rel_gap", max_rel_gap.as_f64());
    report.check(max_rel_gap <= tol.rel_tol);
    Ok(report)
}

/// Gershgorin-style constants of the final bounds theorem, computed on
/// G = E*E (so G_{j,k} = Σ_n E_{n,k} conj(E_{n,j})):
/// b = max_k Σ_j |G_{j,k}|, a = min_k (G_{k,k} − Σ_{j≠k} |G_{j,k}|).
pub fn ab_bounds<T: Real>(map: &MatrixMap<T>) -> (T, T) {
    let g = map.matrix().adjoint().mul(map.matrix());
    let n = g.nrows();
    let mut a = T::infinity();
    let mut b = T::zero();
    for k in 0..n {
        let mut off = T::zero();
        for j in 0..n {
            if j != k {
                off += g[(j, k)].norm();
            }
        }
        let diag = g[(k, k)].re;
        a = a.min(diag - off);
        b = b.max(diag + off);
    }
    (a, b)
}

/// Outcome of the (a, b) bounds theorem. When a ≤ 0 the theorem does not
/// apply: `applicable` is false and no frame-bound assertion is made.
#[derive(Debug, Clone)]
pub struct AbReport<T> {
    pub a: T,
    pub b: T,
    pub applicable: bool,
    pub predicted: Option<FrameBounds<T>>,
    pub lambda_min: T,
    pub lambda_max: T,
    pub pass: bool,
}

impl<T: Real> AbReport<T> {
    pub fn optimal_bounds(&self, tol: &Tolerances<T>) -> Option<FrameBounds<T>> {
        if self.lambda_min > tol.rank_tol * self.lambda_max && self.lambda_min > T::zero() {
            Some(
                FrameBounds::new(self.lambda_min, self.lambda_max, Provenance::Optimal)
                    .expect("ordered spectrum"),
            )
        } else {
            None
        }
    }

    pub fn into_verifier_report(
        self,
        trial: u64,
        digest: String,
        tol: &Tolerances<T>,
    ) -> VerifierReport {
        if !self.applicable {
            let mut report = VerifierReport::skipped("ab", trial, digest, "a<=0 not applicable");
            report.add_residual("a", self.a.as_f64());
            report.add_residual("b", self.b.as_f64());
            return report;
        }
        let predicted = self.predicted.expect("applicable report has predictions");
        let (lower_margin, upper_margin) =
            sandwich_margins(&predicted, self.lambda_min, self.lambda_max);
        let mut report =
            VerifierReport::new("ab", trial, digest).with_predicted(predicted.to_f64());
        if let Some(opt) = self.optimal_bounds(tol) {
            report = report.with_optimal(opt.to_f64());
        }
        report.add_residual("lower_margin", lower_margin);
        report.add_residual("upper_margin", upper_margin);
        report.check(self.pass);
        report
    }
}

/// Final bounds theorem: if a > 0 (columnwise diagonal dominance of E*E),
/// a classical (A, B)-frame is an E-frame with bounds (a·A, b·B).
pub fn ab_theorem_verify<T: Real>(
    frame: &VectorSequence<T>,
    map: &MatrixMap<T>,
    tol: &Tolerances<T>,
) -> Result<AbReport<T>> {
    let classical = match classical_frame_bounds(frame, tol)? {
        FrameStatus::Frame(b) => b,
        FrameStatus::NotAFrame {
            lambda_min,
            lambda_max,
        } => {
            return Err(Error::NotAFrame {
                lambda_min: lambda_min.as_f64(),
                lambda_max: lambda_max.as_f64(),
            })
        }
    };
    let (a, b) = ab_bounds(map);
    let sys = EFrameSystem::new(frame.clone(), map.clone(), *tol)?;
    let (lo, hi) = (sys.lambda_min(), sys.lambda_max());
    if a <= T::zero() {
        return Ok(AbReport {
            a,
            b,
            applicable: false,
            predicted: None,
            lambda_min: lo,
            lambda_max: hi,
            pass: true,
        });
    }
    let big_a = classical.lower.expect("classical frame has a lower bound");
    let big_b = classical.upper;
    let predicted = FrameBounds::new(a * big_a, b * big_b, Provenance::AbTheorem)?;
    let pass = sandwich_pass(&predicted, lo, hi, tol.rel_tol);
    Ok(AbReport {
        a,
        b,
        applicable: true,
        predicted: Some(predicted),
        lambda_min: lo,
        lambda_max: hi,
        pass,
    })
}

/// An E-orthonormal basis: a sequence {g_k} whose transform under E is an
/// orthonormal basis of ℂ^d. Requires N = d in the finite model.
#[derive(Debug, Clone)]
pub struct Eonb<T> {
    raw: VectorSequence<T>,
    transformed: VectorSequence<T>,
}

impl<T: Real> Eonb<T> {
    /// Validate the defining invariant ⟨h_n, h_k⟩ = δ_{n,k} within
    /// `orthonorm_tol` and wrap the pair.
    pub fn new(
        raw: VectorSequence<T>,
        transformed: VectorSequence<T>,
        tol: &Tolerances<T>,
    ) -> Result<Self> {
        if raw.len() != raw.dim() {
            return Err(Error::ShapeMismatch {
                len: raw.len(),
                dim: raw.dim(),
            });
        }
        let eonb = Self { raw, transformed };
        let residual = eonb.max_gram_residual();
        if residual > tol.orthonorm_tol {
            return Err(Error::NotOrthonormal {
                residual: residual.as_f64(),
            });
        }
        Ok(eonb)
    }

    pub fn raw(&self) -> &VectorSequence<T> {
        &self.raw
    }

    pub fn transformed(&self) -> &VectorSequence<T> {
        &self.transformed
    }

    /// max_{n,k} |⟨h_n, h_k⟩ − δ_{n,k}| over the transformed sequence.
    pub fn max_gram_residual(&self) -> T {
        let mut worst = T::zero();
        for (n, hn) in self.transformed.iter().enumerate() {
            for (k, hk) in self.transformed.iter().enumerate() {
                let expect = if n == k { T::one() } else { T::zero() };
                let gap = (hn.inner(hk) - cr(expect)).norm();
                worst = worst.max(gap);
            }
        }
        worst
    }
}

/// E⁻¹{e_k}: pull an orthonormal basis back through an invertible map to
/// get an E-orthonormal basis. Solved columnwise off one LU factorization
/// rather than forming E⁻¹.
pub fn e_onb_from_onb<T: Real>(
    onb: &VectorSequence<T>,
    map: &MatrixMap<T>,
    tol: &Tolerances<T>,
) -> Result<Eonb<T>> {
    let d = onb.dim();
    let n = onb.len();
    if n != d {
        return Err(Error::ShapeMismatch { len: n, dim: d });
    }
    if map.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: map.dim(),
        });
    }
    let mut worst = T::zero();
    for (i, u) in onb.iter().enumerate() {
        for (j, w) in onb.iter().enumerate() {
            let expect = if i == j { T::one() } else { T::zero() };
            worst = worst.max((u.inner(w) - cr(expect)).norm());
        }
    }
    if worst > tol.orthonorm_tol {
        return Err(Error::NotOrthonormal {
            residual: worst.as_f64(),
        });
    }
    if !map.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    // Row-stacked sequences satisfy E · G = O, so each coordinate column of
    // G solves a linear system with the same E.
    let columns: Vec<Vector<T>> = (0..d)
        .map(|j| Vector::new(onb.iter().map(|e| e.entries()[j]).collect()))
        .collect();
    let solved = map.matrix().solve_many(&columns)?;
    let raw = VectorSequence::new(
        (0..n)
            .map(|k| Vector::new((0..d).map(|j| solved[j].entries()[k]).collect()))
            .collect(),
    )?;
    let transformed = map.apply(&raw)?;
    Eonb::new(raw, transformed, tol)
}

/// Expansion coefficients c_m = ⟨f, (E{g_k})_m⟩ in an E-orthonormal basis;
/// they reconstruct f exactly and satisfy Parseval ‖c‖ = ‖f‖.
pub fn expansion_coefficients<T: Real>(
    eonb: &Eonb<T>,
    f: &Vector<T>,
) -> Result<CoefficientVector<T>> {
    if f.dim() != eonb.transformed().dim() {
        return Err(Error::DimensionMismatch {
            expected: eonb.transformed().dim(),
            got: f.dim(),
        });
    }
    Ok(Vector::new(
        eonb.transformed().iter().map(|h| f.inner(h)).collect(),
    ))
}

/// Σ_m c_m (E{g_k})_m, the synthesis side of the expansion.
pub fn expansion_reconstruct<T: Real>(eonb: &Eonb<T>, coeffs: &CoefficientVector<T>) -> Vector<T> {
    let mut acc = Vector::zero(eonb.transformed().dim());
    for (c_m, h_m) in coeffs.entries().iter().zip(eonb.transformed().iter()) {
        acc.axpy(*c_m, h_m);
    }
    acc
}

/// The constructive three-E-orthonormal-basis decomposition of an E-frame:
/// E{f_k} = scale · (E{g¹} + E{g²} + E{g³}) with scale = ‖T‖/(1−ε).
#[derive(Debug, Clone)]
pub struct DecompositionResult<T> {
    pub epsilon: T,
    /// T = T_E∘φ in standard coordinates: the matrix whose n-th column is h_n.
    pub t_matrix: Matrix<T>,
    /// D = id/2 + (1−ε)T/(2‖T‖); always ‖id − D‖ ≤ 1 − ε/2 < 1.
    pub d_matrix: Matrix<T>,
    pub v: Matrix<T>,
    pub w: Matrix<T>,
    pub scale: T,
    pub bases: [Eonb<T>; 3],
}

impl<T: Real> DecompositionResult<T> {
    pub fn identity_minus_d_norm(&self) -> T {
        let n = self.d_matrix.nrows();
        operator_norm(&Matrix::identity(n).sub(&self.d_matrix))
    }

    /// ‖D − V(W+W*)/2‖ in operator norm.
    pub fn polar_residual(&self) -> T {
        let half = c(T::lit(0.5), T::zero());
        let sym = self.w.add(&self.w.adjoint()).scale(half);
        operator_norm(&self.d_matrix.sub(&self.v.mul(&sym)))
    }

    /// max entrywise deviation of V*V and W*W from the identity.
    pub fn unitarity_residual(&self) -> T {
        let n = self.v.nrows();
        let id = Matrix::identity(n);
        let rv = self.v.adjoint().mul(&self.v).max_abs_diff(&id);
        let rw = self.w.adjoint().mul(&self.w).max_abs_diff(&id);
        rv.max(rw)
    }

    /// max_n ‖h_n − scale·(h¹_n + h²_n + h³_n)‖ against the system the
    /// decomposition was built from.
    pub fn reconstruction_residual(&self, sys: &EFrameSystem<T>) -> T {
        let scale = c(self.scale, T::zero());
        let mut worst = T::zero();
        for (n, h) in sys.transformed().iter().enumerate() {
            let mut sum = self.bases[0].transformed().get(n).clone();
            sum = sum.add(self.bases[1].transformed().get(n));
            sum = sum.add(self.bases[2].transformed().get(n));
            worst = worst.max(h.sub(&sum.scale(scale)).norm());
        }
        worst
    }
}

/// Split an E-frame into three E-orthonormal bases.
///
/// Construction, for N = d: take g = E⁻¹{e_k}, so (E{g})_n = e_n and the
/// synthesis operator in these coordinates is the column matrix T of the
/// h_n. Form D = id/2 + (1−ε)T/(2‖T‖), factor D = V·P with V unitary,
/// lift P to the unitary W = P + i(id − P²)^{1/2}; then
/// T = (‖T‖/(1−ε))(VW + VW* − id) and the three bases are
/// {VW g_k}, {VW* g_k}, {−g_k}.
pub fn three_unitary_decomposition<T: Real>(
    sys: &EFrameSystem<T>,
    epsilon: T,
) -> Result<DecompositionResult<T>> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::BadEpsilon {
            value: epsilon.as_f64(),
        });
    }
    let d = sys.dim();
    let n = sys.len();
    if n != d {
        return Err(Error::ShapeMismatch { len: n, dim: d });
    }
    if !sys.is_frame() {
        return Err(Error::NotAFrame {
            lambda_min: sys.lambda_min().as_f64(),
            lambda_max: sys.lambda_max().as_f64(),
        });
    }
    if !sys.map().is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let tol = *sys.tolerances();

    let g = e_onb_from_onb(&VectorSequence::standard_onb(d), sys.map(), &tol)?;
    let t_matrix = sys.synthesis_matrix();
    let t_norm = operator_norm(&t_matrix);
    let shift = (T::one() - epsilon) / (t_norm + t_norm);
    let d_matrix = Matrix::identity(d)
        .scale(c(T::lit(0.5), T::zero()))
        .add(&t_matrix.scale(c(shift, T::zero())));

    let (v, p) = polar_decompose(&d_matrix, &tol)?;
    // W = P + i(id − P²)^{1/2}; ‖P‖ = ‖D‖ ≤ 1 − ε/2 keeps id − P² PSD
    let id = Matrix::identity(d);
    let defect = hermitian_sqrt(&id.sub(&p.mul(&p)).hermitian_part(), &tol)?;
    let w = p.add(&defect.scale(c(T::zero(), T::one())));

    let scale = t_norm / (T::one() - epsilon);
    let vw = v.mul(&w);
    let vw_star = v.mul(&w.adjoint());

    let make_basis = |op: Option<&Matrix<T>>, negate: bool| -> Result<Eonb<T>> {
        let raw = g.raw().map_vectors(|gk| {
            let moved = match op {
                Some(m) => m.mul_vector(gk),
                None => gk.clone(),
            };
            if negate {
                moved.neg()
            } else {
                moved
            }
        });
        let transformed = sys.map().apply(&raw)?;
        Eonb::new(raw, transformed, &tol)
    };
    let bases = [
        make_basis(Some(&vw), false)?,
        make_basis(Some(&vw_star), false)?,
        make_basis(None, true)?,
    ];

    Ok(DecompositionResult {
        epsilon,
        t_matrix,
        d_matrix,
        v,
        w,
        scale,
        bases,
    })
}
