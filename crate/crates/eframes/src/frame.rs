//! Frame-theoretic operators of an E-frame system.
//!
//! For a sequence {f_k} and a matrix mapping E, let h_n = (E{f_k})_n. The
//! synthesis operator T sends coefficients {c_n} to Σ c_n h_n, its adjoint
//! (analysis) sends f to {⟨f, h_n⟩}, and the frame operator S = T T* acts as
//! S f = Σ ⟨f, h_n⟩ h_n. The sequence is an E-frame precisely when S is
//! positive definite, and the extreme eigenvalues of S are the optimal frame
//! bounds, so every theorem-predicted bound pair must sandwich them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::eigen::{hermitian_eigen, HermitianEigen};
use crate::hilbert::matrix::{Matrix, MatrixMap};
use crate::hilbert::tol::Tolerances;
use crate::hilbert::vector::{Vector, VectorSequence};
use crate::report::{DigestBuilder, VerifierReport};
use crate::scalar::Real;

/// ℓ² coefficient vectors share the representation of ambient vectors.
pub type CoefficientVector<T> = Vector<T>;

/// Where a bound pair came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Extreme eigenvalues of the frame operator (tight).
    Optimal,
    /// (C·A, ‖E‖²·B) predicted for a classical frame pushed through E.
    Theorem3,
    /// Diagonal-map specialization (C·A, λ²·B).
    Diagonal,
    /// Gershgorin-style bounds (a·A, b·B).
    AbTheorem,
    /// Upper Bessel bound Σ‖f_k‖².
    Lemma1,
}

/// A frame-bound pair 0 < A ≤ B, or an upper (Bessel) bound alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameBounds<T> {
    pub lower: Option<T>,
    pub upper: T,
    pub provenance: Provenance,
}

impl<T: Real> FrameBounds<T> {
    pub fn new(lower: T, upper: T, provenance: Provenance) -> Result<Self> {
        let ordered = lower > T::zero() && lower <= upper;
        if !ordered {
            return Err(Error::ValidationError {
                field: "bounds".into(),
                message: format!("need 0 < lower <= upper, got ({lower}, {upper})"),
            });
        }
        Ok(Self {
            lower: Some(lower),
            upper,
            provenance,
        })
    }

    /// Bessel-only bound: no lower claim.
    pub fn upper_only(upper: T, provenance: Provenance) -> Self {
        Self {
            lower: None,
            upper,
            provenance,
        }
    }

    pub fn to_f64(self) -> FrameBounds<f64> {
        FrameBounds {
            lower: self.lower.map(Real::as_f64),
            upper: self.upper.as_f64(),
            provenance: self.provenance,
        }
    }
}

/// Outcome of an optimal-bound computation: `NotAFrame` is a recordable
/// result, not an error, so randomized campaigns can log it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameStatus<T> {
    Frame(FrameBounds<T>),
    NotAFrame { lambda_min: T, lambda_max: T },
}

impl<T: Real> FrameStatus<T> {
    pub fn bounds(&self) -> Option<FrameBounds<T>> {
        match self {
            FrameStatus::Frame(b) => Some(*b),
            FrameStatus::NotAFrame { .. } => None,
        }
    }
}

/// Classical frame operator Σ_k f_k f_k* of a raw sequence (no E).
pub fn classical_frame_operator<T: Real>(seq: &VectorSequence<T>) -> Matrix<T> {
    let d = seq.dim();
    let mut s = Matrix::zeros(d, d);
    for f in seq.iter() {
        s.add_outer(f, f);
    }
    s.hermitian_part()
}

/// Optimal classical frame bounds of a raw sequence.
pub fn classical_frame_bounds<T: Real>(
    seq: &VectorSequence<T>,
    tol: &Tolerances<T>,
) -> Result<FrameStatus<T>> {
    let eig = hermitian_eigen(&classical_frame_operator(seq))?;
    Ok(status_from_spectrum(&eig, tol))
}

fn status_from_spectrum<T: Real>(eig: &HermitianEigen<T>, tol: &Tolerances<T>) -> FrameStatus<T> {
    let lo = eig.lambda_min();
    let hi = eig.lambda_max();
    if lo > tol.rank_tol * hi && lo > T::zero() {
        FrameStatus::Frame(
            FrameBounds::new(lo, hi, Provenance::Optimal).expect("spectral bounds are ordered"),
        )
    } else {
        FrameStatus::NotAFrame {
            lambda_min: lo,
            lambda_max: hi,
        }
    }
}

/// Upper Bessel bound Σ_k ‖f_k‖²: any ⊕H sequence is Bessel with this bound.
pub fn lemma1_bessel_bound<T: Real>(seq: &VectorSequence<T>) -> FrameBounds<T> {
    FrameBounds::upper_only(seq.sum_sq_norms(), Provenance::Lemma1)
}

/// A sequence paired with its matrix mapping, with the transformed sequence,
/// frame operator, and its spectrum cached at construction. Immutable and
/// safe to share across threads.
#[derive(Debug, Clone)]
pub struct EFrameSystem<T> {
    seq: VectorSequence<T>,
    map: MatrixMap<T>,
    transformed: VectorSequence<T>,
    frame_op: Matrix<T>,
    spectrum: HermitianEigen<T>,
    tol: Tolerances<T>,
}

impl<T: Real> EFrameSystem<T> {
    pub fn new(seq: VectorSequence<T>, map: MatrixMap<T>, tol: Tolerances<T>) -> Result<Self> {
        let transformed = map.apply(&seq)?;
        let frame_op = classical_frame_operator(&transformed);
        let spectrum = hermitian_eigen(&frame_op)?;
        Ok(Self {
            seq,
            map,
            transformed,
            frame_op,
            spectrum,
            tol,
        })
    }

    pub fn seq(&self) -> &VectorSequence<T> {
        &self.seq
    }

    pub fn map(&self) -> &MatrixMap<T> {
        &self.map
    }

    /// The transformed sequence h_n = (E{f_k})_n.
    pub fn transformed(&self) -> &VectorSequence<T> {
        &self.transformed
    }

    /// The E-frame operator S = Σ_n h_n h_n* as a d×d Hermitian matrix.
    pub fn frame_operator(&self) -> &Matrix<T> {
        &self.frame_op
    }

    pub fn tolerances(&self) -> &Tolerances<T> {
        &self.tol
    }

    pub fn dim(&self) -> usize {
        self.seq.dim()
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn lambda_min(&self) -> T {
        self.spectrum.lambda_min()
    }

    pub fn lambda_max(&self) -> T {
        self.spectrum.lambda_max()
    }

    pub fn spectrum(&self) -> &HermitianEigen<T> {
        &self.spectrum
    }

    /// d×N matrix whose n-th column is h_n; equals the synthesis operator in
    /// standard coordinates, so S = T T*.
    pub fn synthesis_matrix(&self) -> Matrix<T> {
        let d = self.dim();
        let n = self.len();
        Matrix::from_fn(d, n, |i, j| self.transformed.get(j).entries()[i])
    }

    /// Synthesis T c = Σ_n c_n h_n.
    pub fn synthesis(&self, coeffs: &CoefficientVector<T>) -> Result<Vector<T>> {
        if coeffs.dim() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: coeffs.dim(),
            });
        }
        let mut acc = Vector::zero(self.dim());
        for (c_n, h_n) in coeffs.entries().iter().zip(self.transformed.iter()) {
            acc.axpy(*c_n, h_n);
        }
        Ok(acc)
    }

    /// Analysis T* f = {⟨f, h_n⟩}_n.
    pub fn analysis(&self, f: &Vector<T>) -> Result<CoefficientVector<T>> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: f.dim(),
            });
        }
        Ok(Vector::new(
            self.transformed.iter().map(|h| f.inner(h)).collect(),
        ))
    }

    /// Σ_n |⟨f, h_n⟩|², the frame-operator quadratic form evaluated directly
    /// from the transformed sequence (no matrix involved).
    pub fn quadratic_form(&self, f: &Vector<T>) -> T {
        self.transformed.iter().map(|h| f.inner(h).norm_sqr()).sum()
    }

    /// Optimal frame bounds: the extreme eigenvalues of S.
    pub fn optimal_frame_bounds(&self) -> FrameStatus<T> {
        status_from_spectrum(&self.spectrum, &self.tol)
    }

    pub fn is_frame(&self) -> bool {
        matches!(self.optimal_frame_bounds(), FrameStatus::Frame(_))
    }

    /// Check a claimed bound pair against the optimal spectrum:
    /// passes iff claimed.lower ≤ λ_min·(1+rel_tol) and
    /// λ_max ≤ claimed.upper·(1+rel_tol). The report carries both spectra.
    pub fn is_e_frame(&self, claimed: &FrameBounds<T>) -> Result<VerifierReport> {
        let claimed_lower = claimed.lower.ok_or_else(|| Error::ValidationError {
            field: "claimed.lower".into(),
            message: "a frame claim needs a lower bound".into(),
        })?;
        let lo = self.lambda_min();
        let hi = self.lambda_max();
        let one_plus = T::one() + self.tol.rel_tol;
        let digest = DigestBuilder::new()
            .str("is-e-frame")
            .sequence(&self.seq)
            .matrix(self.map.matrix())
            .real(claimed_lower)
            .real(claimed.upper)
            .finish();
        let mut report = VerifierReport::new("is-e-frame", 0, digest)
            .with_predicted(claimed.to_f64())
            .with_optimal(
                FrameBounds {
                    lower: Some(lo),
                    upper: hi,
                    provenance: Provenance::Optimal,
                }
                .to_f64(),
            );
        let scale = hi.max(T::epsilon());
        report.add_residual("lower_margin", ((claimed_lower - lo) / scale).as_f64());
        report.add_residual("upper_margin", ((hi - claimed.upper) / scale).as_f64());
        report.check(claimed_lower <= lo * one_plus);
        report.check(hi <= claimed.upper * one_plus);
        Ok(report)
    }

    /// Canonical dual sequence {S⁻¹ h_n}; reconstruction
    /// f = Σ ⟨f, S⁻¹h_n⟩ h_n holds for every f when the system is a frame.
    ///
    /// S⁻¹ is applied through the Jacobi eigenbasis. Jacobi resolves the
    /// small eigenvalues of a positive definite matrix to high relative
    /// accuracy, which beats LU solves (refined or not) on ill-conditioned
    /// frame operators by orders of magnitude.
    pub fn canonical_dual(&self) -> Result<VectorSequence<T>> {
        if !self.is_frame() {
            return Err(Error::NotAFrame {
                lambda_min: self.lambda_min().as_f64(),
                lambda_max: self.lambda_max().as_f64(),
            });
        }
        let s_inv = self.spectrum.apply_fn(|lambda| lambda.recip());
        Ok(self.transformed.map_vectors(|h| s_inv.mul_vector(h)))
    }

    /// Reconstruct f from its dual-analysis coefficients:
    /// Σ_n ⟨f, dual_n⟩ h_n.
    pub fn reconstruct_with_dual(&self, dual: &VectorSequence<T>, f: &Vector<T>) -> Vector<T> {
        let mut acc = Vector::zero(self.dim());
        for (g, h) in dual.iter().zip(self.transformed.iter()) {
            acc.axpy(f.inner(g), h);
        }
        acc
    }
}

/// Convenience: the identity map system, which makes `transformed == seq`.
pub fn identity_system<T: Real>(
    seq: VectorSequence<T>,
    tol: Tolerances<T>,
) -> Result<EFrameSystem<T>> {
    let map = MatrixMap::identity(seq.len(), &tol);
    EFrameSystem::new(seq, map, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_unit_vector, random_vector, SplitMix64};
    use crate::scalar::cr;

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn e(dim: usize, k: usize) -> Vector<f64> {
        Vector::standard_basis(dim, k)
    }

    fn parseval_2() -> EFrameSystem<f64> {
        identity_system(VectorSequence::new(vec![e(2, 0), e(2, 1)]).unwrap(), tol()).unwrap()
    }

    fn diag_23() -> EFrameSystem<f64> {
        identity_system(
            VectorSequence::new(vec![e(2, 0).scale(cr(2.0)), e(2, 1).scale(cr(3.0))]).unwrap(),
            tol(),
        )
        .unwrap()
    }

    fn shear_system() -> EFrameSystem<f64> {
        identity_system(
            VectorSequence::new(vec![
                Vector::from_reals(&[1.0, 1.0]),
                Vector::from_reals(&[0.0, 1.0]),
            ])
            .unwrap(),
            tol(),
        )
        .unwrap()
    }

    #[test]
    fn synthesis_examples() {
        let sys = parseval_2();
        let picked = sys.synthesis(&Vector::new(vec![cr(1.0), cr(0.0)])).unwrap();
        assert_eq!(picked, e(2, 0));

        let sys = diag_23();
        let sum = sys.synthesis(&Vector::new(vec![cr(1.0), cr(1.0)])).unwrap();
        assert_eq!(sum, Vector::from_reals(&[2.0, 3.0]));

        let zero = sys.synthesis(&Vector::zero(2)).unwrap();
        assert_eq!(zero, Vector::zero(2));

        assert!(matches!(
            sys.synthesis(&Vector::zero(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn analysis_examples() {
        let sys = parseval_2();
        assert_eq!(
            sys.analysis(&e(2, 0)).unwrap(),
            Vector::new(vec![cr(1.0), cr(0.0)])
        );

        let sys = diag_23();
        assert_eq!(
            sys.analysis(&Vector::from_reals(&[1.0, 1.0])).unwrap(),
            Vector::new(vec![cr(2.0), cr(3.0)])
        );
        assert_eq!(sys.analysis(&Vector::zero(2)).unwrap(), Vector::zero(2));
    }

    #[test]
    fn frame_operator_examples() {
        assert!(
            parseval_2()
                .frame_operator()
                .max_abs_diff(&Matrix::identity(2))
                < 1e-15
        );
        assert!(
            diag_23()
                .frame_operator()
                .max_abs_diff(&Matrix::diagonal(&[cr(4.0), cr(9.0)]))
                < 1e-15
        );
        // rank-one sums by hand: (1,1)(1,1)* + (0,1)(0,1)* = [[1,1],[1,2]]
        let expect =
            Matrix::from_rows(vec![vec![cr(1.0), cr(1.0)], vec![cr(1.0), cr(2.0)]]).unwrap();
        assert!(shear_system().frame_operator().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn optimal_bounds_examples() {
        match parseval_2().optimal_frame_bounds() {
            FrameStatus::Frame(b) => {
                assert!((b.lower.unwrap() - 1.0).abs() < 1e-12);
                assert!((b.upper - 1.0).abs() < 1e-12);
                assert_eq!(b.provenance, Provenance::Optimal);
            }
            other => panic!("expected frame, got {other:?}"),
        }
        match diag_23().optimal_frame_bounds() {
            FrameStatus::Frame(b) => {
                assert!((b.lower.unwrap() - 4.0).abs() < 1e-12);
                assert!((b.upper - 9.0).abs() < 1e-12);
            }
            other => panic!("expected frame, got {other:?}"),
        }
        // eigenvalues of [[1,1],[1,2]] by the quadratic formula
        match shear_system().optimal_frame_bounds() {
            FrameStatus::Frame(b) => {
                assert!((b.lower.unwrap() - (3.0 - 5.0f64.sqrt()) / 2.0).abs() < 1e-12);
                assert!((b.upper - (3.0 + 5.0f64.sqrt()) / 2.0).abs() < 1e-12);
            }
            other => panic!("expected frame, got {other:?}"),
        }
    }

    #[test]
    fn not_a_frame_is_a_result() {
        let seq = VectorSequence::new(vec![e(2, 0), e(2, 0)]).unwrap();
        let sys = identity_system(seq, tol()).unwrap();
        assert!(matches!(
            sys.optimal_frame_bounds(),
            FrameStatus::NotAFrame { .. }
        ));
        assert!(matches!(sys.canonical_dual(), Err(Error::NotAFrame { .. })));
    }

    #[test]
    fn is_e_frame_examples() {
        let sys = diag_23();
        let exact = FrameBounds::new(4.0, 9.0, Provenance::Optimal).unwrap();
        assert!(sys.is_e_frame(&exact).unwrap().pass);

        let too_tight = FrameBounds::new(5.0, 9.0, Provenance::Optimal).unwrap();
        assert!(!sys.is_e_frame(&too_tight).unwrap().pass);

        let sys = parseval_2();
        let loose = FrameBounds::new(0.5, 2.0, Provenance::Optimal).unwrap();
        assert!(sys.is_e_frame(&loose).unwrap().pass);
    }

    #[test]
    fn lemma1_examples_and_property() {
        let two = lemma1_bessel_bound(&VectorSequence::new(vec![e(2, 0), e(2, 1)]).unwrap());
        assert_eq!(two.upper, 2.0);
        assert_eq!(two.lower, None);
        assert_eq!(two.provenance, Provenance::Lemma1);

        let degenerate = lemma1_bessel_bound(
            &VectorSequence::<f64>::new(vec![Vector::zero(2), Vector::zero(2)]).unwrap(),
        );
        assert_eq!(degenerate.upper, 0.0);

        let thirteen = lemma1_bessel_bound(
            &VectorSequence::new(vec![e(2, 0).scale(cr(2.0)), e(2, 1).scale(cr(3.0))]).unwrap(),
        );
        assert_eq!(thirteen.upper, 13.0);

        // Bessel property: Σ|⟨f, f_k⟩|² ≤ upper · ‖f‖² for sampled f
        let mut rng = SplitMix64::new(31);
        for _ in 0..40 {
            let seq =
                VectorSequence::new((0..5).map(|_| random_vector::<f64>(&mut rng, 3)).collect())
                    .unwrap();
            let bound = lemma1_bessel_bound(&seq).upper;
            for _ in 0..20 {
                let f = random_vector::<f64>(&mut rng, 3);
                let total: f64 = seq.iter().map(|g| f.inner(g).norm_sqr()).sum();
                assert!(total <= bound * f.norm_sqr() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn canonical_dual_examples() {
        let sys = parseval_2();
        let dual = sys.canonical_dual().unwrap();
        assert!(dual.get(0).distance(&e(2, 0)) < 1e-12);
        assert!(dual.get(1).distance(&e(2, 1)) < 1e-12);

        // S⁻¹ = diag(1/4, 1/9) applied entrywise
        let sys = diag_23();
        let dual = sys.canonical_dual().unwrap();
        assert!(dual.get(0).distance(&e(2, 0).scale(cr(0.5))) < 1e-12);
        assert!(dual.get(1).distance(&e(2, 1).scale(cr(1.0 / 3.0))) < 1e-12);
    }

    #[test]
    fn canonical_dual_reconstructs_random_frames() {
        let tol = tol();
        let seq = crate::gen::gen_random_frame::<f64>(3, 5, 7, &tol).unwrap();
        let mut rng = SplitMix64::new(77);
        let map = crate::hilbert::MatrixMap::new(crate::gen::random_matrix(&mut rng, 5, 5), &tol)
            .unwrap();
        let sys = EFrameSystem::new(seq, map, tol).unwrap();
        assert!(sys.is_frame());
        let dual = sys.canonical_dual().unwrap();
        for _ in 0..50 {
            let f = random_vector::<f64>(&mut rng, 3);
            let rebuilt = sys.reconstruct_with_dual(&dual, &f);
            assert!(rebuilt.distance(&f) <= 1e-9 * f.norm().max(1e-300));
        }
    }

    #[test]
    fn adjointness_of_synthesis_and_analysis() {
        let tol = tol();
        let mut rng = SplitMix64::new(5150);
        for _ in 0..50 {
            let seq =
                VectorSequence::new((0..4).map(|_| random_vector::<f64>(&mut rng, 3)).collect())
                    .unwrap();
            let map =
                crate::hilbert::MatrixMap::new(crate::gen::random_matrix(&mut rng, 4, 4), &tol)
                    .unwrap();
            let sys = EFrameSystem::new(seq, map, tol).unwrap();
            let c_vec = random_vector::<f64>(&mut rng, 4);
            let f = random_vector::<f64>(&mut rng, 3);
            let lhs = sys.synthesis(&c_vec).unwrap().inner(&f);
            let rhs = c_vec.inner(&sys.analysis(&f).unwrap());
            let slack = 1e-9 * c_vec.norm() * f.norm() + 1e-14;
            assert!((lhs - rhs).norm() <= slack);
        }
    }

    #[test]
    fn frame_operator_equals_synthesis_times_adjoint() {
        let tol = tol();
        let mut rng = SplitMix64::new(8080);
        for _ in 0..20 {
            let seq =
                VectorSequence::new((0..5).map(|_| random_vector::<f64>(&mut rng, 3)).collect())
                    .unwrap();
            let map =
                crate::hilbert::MatrixMap::new(crate::gen::random_matrix(&mut rng, 5, 5), &tol)
                    .unwrap();
            let sys = EFrameSystem::new(seq, map, tol).unwrap();
            let t = sys.synthesis_matrix();
            let tt = t.mul(&t.adjoint());
            let scale = sys.frame_operator().frobenius_norm().max(1e-300);
            assert!(tt.max_abs_diff(sys.frame_operator()) <= 1e-9 * scale);
        }
    }

    #[test]
    fn sampled_quadratic_form_respects_spectrum() {
        let tol = tol();
        let mut rng = SplitMix64::new(616);
        for _ in 0..20 {
            let seq = crate::gen::gen_random_frame::<f64>(3, 6, rng.next_u64(), &tol).unwrap();
            let sys = identity_system(seq, tol).unwrap();
            let (lo, hi) = (sys.lambda_min(), sys.lambda_max());
            let slack = 1e-9 * hi;
            for _ in 0..100 {
                let f = random_unit_vector::<f64>(&mut rng, 3);
                let q = sys.quadratic_form(&f);
                assert!(q >= lo - slack && q <= hi + slack);
            }
            // near-equality at the extreme eigenvectors: the quadratic form
            // evaluated by direct summation must reproduce the eigenvalues
            let v_lo = sys.spectrum().eigenvector(0);
            let v_hi = sys.spectrum().eigenvector(sys.dim() - 1);
            assert!((sys.quadratic_form(&v_lo) - lo).abs() <= 1e-9 * hi);
            assert!((sys.quadratic_form(&v_hi) - hi).abs() <= 1e-9 * hi);
        }
    }

    // independent 2×2 oracle: eigenvalues of the frame operator from the
    // quadratic formula on its entries
    #[test]
    fn two_dim_bounds_match_quadratic_formula() {
        let tol = tol();
        let mut rng = SplitMix64::new(909);
        for _ in 0..50 {
            let seq =
                VectorSequence::new((0..3).map(|_| random_vector::<f64>(&mut rng, 2)).collect())
                    .unwrap();
            let sys = identity_system(seq, tol).unwrap();
            let s = sys.frame_operator();
            let (a, b) = (s[(0, 0)].re, s[(1, 1)].re);
            let disc = ((a - b).powi(2) + 4.0 * s[(0, 1)].norm_sqr()).sqrt();
            let scale = sys.lambda_max().max(1.0);
            assert!((sys.lambda_min() - (a + b - disc) / 2.0).abs() < 1e-12 * scale);
            assert!((sys.lambda_max() - (a + b + disc) / 2.0).abs() < 1e-12 * scale);
        }
    }
}
