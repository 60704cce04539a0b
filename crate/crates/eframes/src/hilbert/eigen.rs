//! Hermitian eigendecomposition via cyclic complex Jacobi rotations.
//!
//! One kernel carries the crate: for Hermitian H, find unitary V and real
//! Λ with H = V Λ V*. Singular values, operator norms, matrix square roots
//! and polar factors are all derived from it.
//!
//! The cyclic Jacobi method zeroes one off-diagonal pair per rotation,
//! sweeping all (p, q) until the off-diagonal mass reaches machine level.
//! It is slower than tridiagonalization + QR but has excellent accuracy,
//! which matters more at the dimensions this crate targets (n ≤ ~32).
//! Inputs are symmetrized as (A + A*)/2 before iterating so that Hermitian
//! drift from upstream arithmetic cannot leak into the certificates.

use crate::error::{Error, Result};
use crate::hilbert::matrix::{Matrix, SpectralData};
use crate::scalar::{Real, C};

const MAX_SWEEPS: usize = 64;

/// Eigen pairs of a Hermitian matrix: `values` ascending, column j of
/// `vectors` the unit eigenvector for `values[j]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    values: Vec<T>,
    vectors: Matrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn vectors(&self) -> &Matrix<T> {
        &self.vectors
    }

    pub fn lambda_min(&self) -> T {
        self.values[0]
    }

    pub fn lambda_max(&self) -> T {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn eigenvector(&self, j: usize) -> crate::hilbert::vector::Vector<T> {
        self.vectors.col(j)
    }

    /// V f(Λ) V*, the functional calculus on the spectrum.
    pub fn apply_fn<F: Fn(T) -> T>(&self, f: F) -> Matrix<T> {
        let n = self.values.len();
        let mut scaled = Matrix::zeros(n, n);
        // scaled = V f(Λ): scale column j by f(λ_j)
        for j in 0..n {
            let fj = C::new(f(self.values[j]), T::zero());
            for i in 0..n {
                scaled[(i, j)] = self.vectors[(i, j)] * fj;
            }
        }
        scaled.mul(&self.vectors.adjoint())
    }

    /// V Λ V*.
    pub fn reconstruct(&self) -> Matrix<T> {
        self.apply_fn(|x| x)
    }
}

/// Decompose the Hermitian part of `a`.
///
/// `a` is symmetrized to (A + A*)/2 first; callers that need a strict
/// Hermitian-input contract check the residual themselves.
pub fn hermitian_eigen<T: Real>(a: &Matrix<T>) -> Result<HermitianEigen<T>> {
    assert!(a.is_square(), "eigendecomposition requires a square matrix");
    let n = a.nrows();
    let mut h = a.hermitian_part();
    let mut v = Matrix::identity(n);

    let frob = h.frobenius_norm();
    if frob > T::zero() {
        let conv = frob * T::epsilon() * T::from_usize(n).expect("small n");
        let elem = conv / (T::from_usize(n).expect("small n") * T::lit(std::f64::consts::SQRT_2));
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            if off_norm(&h) <= conv {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut h, &mut v, p, q, elem);
                }
            }
        }
        if !converged && off_norm(&h) > conv {
            return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        h[(i, i)]
            .re
            .partial_cmp(&h[(j, j)].re)
            .expect("eigenvalues are finite")
    });
    let values: Vec<T> = order.iter().map(|&i| h[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_norm<T: Real>(h: &Matrix<T>) -> T {
    let n = h.nrows();
    let mut acc = T::zero();
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += h[(p, q)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation zeroing H[p][q] (and its conjugate mirror).
///
/// With α = H[p][p], β = H[q][q], γ = H[p][q] = |γ|u, the unitary
/// U = [[c, −s̄], [s, c]] with s = t·c·ū, c = 1/√(1+t²) annihilates the
/// (p,q) entry when t solves t² − 2τt − 1 = 0, τ = (β−α)/(2|γ|); the root
/// of smaller magnitude keeps the rotation angle below π/4.
fn rotate<T: Real>(h: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize, elem: T) {
    let gamma = h[(p, q)];
    let gnorm = gamma.norm();
    if gnorm <= elem {
        return;
    }
    let alpha = h[(p, p)].re;
    let beta = h[(q, q)].re;
    let tau = (beta - alpha) / (gnorm + gnorm);
    let hyp = (tau * tau + T::one()).sqrt();
    let t = if tau >= T::zero() {
        -(tau + hyp).recip()
    } else {
        (hyp - tau).recip()
    };
    let c = (T::one() + t * t).sqrt().recip();
    let sigma = t * c;
    let phase = gamma / C::new(gnorm, T::zero());
    let s = phase.conj() * C::new(sigma, T::zero());
    let s_bar = s.conj();
    let cc = C::new(c, T::zero());

    let n = h.nrows();
    // rows p, q of U*H
    for j in 0..n {
        let hpj = h[(p, j)];
        let hqj = h[(q, j)];
        h[(p, j)] = cc * hpj + s_bar * hqj;
        h[(q, j)] = cc * hqj - s * hpj;
    }
    // columns p, q of (U*H)U
    for i in 0..n {
        let hip = h[(i, p)];
        let hiq = h[(i, q)];
        h[(i, p)] = cc * hip + s * hiq;
        h[(i, q)] = cc * hiq - s_bar * hip;
    }
    // the rotation is exact on the (p,q) pair; pin the zeros and real diagonal
    h[(p, q)] = C::new(T::zero(), T::zero());
    h[(q, p)] = C::new(T::zero(), T::zero());
    h[(p, p)] = C::new(h[(p, p)].re, T::zero());
    h[(q, q)] = C::new(h[(q, q)].re, T::zero());

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = cc * vip + s * viq;
        v[(i, q)] = cc * viq - s_bar * vip;
    }
}

/// Singular-value certificates of a square matrix, together with the
/// Hilbert–Schmidt norm.
///
/// The extreme singular values come from the Hermitian dilation
/// [[0, A], [A*, 0]], whose eigenvalues are ±σ_i(A). The eigensolver's
/// absolute accuracy ~ε·σ_max then carries straight to σ_min; going through
/// A*A would square away everything below √ε·σ_max and break invertibility
/// certificates near the rank cutoff.
pub fn spectral_data<T: Real>(a: &Matrix<T>) -> Result<SpectralData<T>> {
    assert!(a.is_square(), "spectral data requires a square matrix");
    let hs_norm = a.frobenius_norm();
    let n = a.nrows();
    if a.is_diagonal() {
        // exact fast path: the singular values are the entry moduli
        let mut sigma_min = T::infinity();
        let mut sigma_max = T::zero();
        for i in 0..n {
            let m = a[(i, i)].norm();
            sigma_min = sigma_min.min(m);
            sigma_max = sigma_max.max(m);
        }
        let sigma_max = sigma_max.min(hs_norm);
        return Ok(SpectralData {
            sigma_max,
            sigma_min: sigma_min.min(sigma_max),
            hs_norm,
        });
    }
    let mut dilation = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            dilation[(i, n + j)] = a[(i, j)];
            dilation[(n + j, i)] = a[(i, j)].conj();
        }
    }
    let eig = hermitian_eigen(&dilation)?;
    // sigma_max ≤ hs_norm holds exactly; keep it true under rounding
    let sigma_max = eig.lambda_max().max(T::zero()).min(hs_norm);
    let sigma_min = eig
        .values()
        .iter()
        .map(|lambda| lambda.abs())
        .fold(T::infinity(), T::min);
    Ok(SpectralData {
        sigma_max,
        sigma_min: sigma_min.min(sigma_max),
        hs_norm,
    })
}

/// Operator norm sigma_max(A) of a general square matrix.
pub fn operator_norm<T: Real>(a: &Matrix<T>) -> T {
    spectral_data(a)
        .expect("spectral data is always computable")
        .sigma_max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::SplitMix64;
    use crate::scalar::{c, cr};

    fn random_hermitian(n: usize, seed: u64) -> Matrix<f64> {
        let mut rng = SplitMix64::new(seed);
        let raw = Matrix::from_fn(n, n, |_, _| c(rng.uniform::<f64>(), rng.uniform()));
        raw.hermitian_part()
    }

    #[test]
    fn identity_spectrum() {
        for n in 1..=5 {
            let data = spectral_data(&Matrix::<f64>::identity(n)).unwrap();
            assert!((data.sigma_max - 1.0).abs() < 1e-15);
            assert!((data.sigma_min - 1.0).abs() < 1e-15);
            assert!((data.hs_norm - (n as f64).sqrt()).abs() < 1e-15);
        }
    }

    // singular values of a diagonal matrix are the moduli of its entries
    #[test]
    fn diagonal_spectral_data() {
        let m = Matrix::diagonal(&[cr(2.0), cr(3.0)]);
        let data = spectral_data(&m).unwrap();
        assert_eq!(data.sigma_max, 3.0);
        assert_eq!(data.sigma_min, 2.0);
        assert!((data.hs_norm - 13.0f64.sqrt()).abs() < 1e-15);
    }

    // eigenvalues of E*E = [[1,1],[1,2]] by the quadratic formula:
    // λ² − 3λ + 1 = 0, λ = (3 ± √5)/2
    #[test]
    fn shear_spectral_data() {
        let m: Matrix<f64> =
            Matrix::from_rows(vec![vec![cr(1.0), cr(1.0)], vec![cr(0.0), cr(1.0)]]).unwrap();
        let data = spectral_data(&m).unwrap();
        let lo = (3.0 - 5.0f64.sqrt()) / 2.0;
        let hi = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((data.sigma_max.powi(2) - hi).abs() < 1e-14);
        assert!((data.sigma_min.powi(2) - lo).abs() < 1e-14);
        assert!((data.hs_norm - 3.0f64.sqrt()).abs() < 1e-15);
    }

    // independent 2x2 oracle: eigenvalues of [[a, γ],[γ̄, b]] are
    // ((a+b) ± √((a−b)² + 4|γ|²)) / 2
    #[test]
    fn two_by_two_matches_quadratic_formula() {
        for seed in 0..50u64 {
            let h = random_hermitian(2, 1000 + seed);
            let (a, b) = (h[(0, 0)].re, h[(1, 1)].re);
            let g2 = h[(0, 1)].norm_sqr();
            let disc = ((a - b).powi(2) + 4.0 * g2).sqrt();
            let expect_lo = (a + b - disc) / 2.0;
            let expect_hi = (a + b + disc) / 2.0;
            let eig = hermitian_eigen(&h).unwrap();
            let scale = h.frobenius_norm().max(1.0);
            assert!((eig.lambda_min() - expect_lo).abs() < 1e-14 * scale);
            assert!((eig.lambda_max() - expect_hi).abs() < 1e-14 * scale);
        }
    }

    #[test]
    fn reconstruction_and_unitarity() {
        for n in 1..=8usize {
            let h = random_hermitian(n, 7 * n as u64 + 1);
            let eig = hermitian_eigen(&h).unwrap();
            let scale = h.frobenius_norm().max(1.0);
            let resid = eig.reconstruct().max_abs_diff(&h);
            assert!(resid < 1e-13 * scale, "n={n} residual {resid}");
            let v = eig.vectors();
            let gram_resid = v.adjoint().mul(v).max_abs_diff(&Matrix::identity(n));
            assert!(gram_resid < 1e-13, "n={n} unitarity {gram_resid}");
            // ascending order
            for w in eig.values().windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn zero_matrix_is_handled() {
        let eig = hermitian_eigen(&Matrix::<f64>::zeros(3, 3)).unwrap();
        assert_eq!(eig.values(), &[0.0, 0.0, 0.0]);
        assert_eq!(eig.vectors(), &Matrix::identity(3));
    }

    // σ_min must stay accurate to ~ε·σ_max absolute so that rank
    // certificates near rank_tol are trustworthy
    #[test]
    fn tiny_singular_values_are_resolved() {
        for &s in &[1e-9f64, 1e-11, 1e-13, 1e-15] {
            let m = Matrix::diagonal(&[cr(1.0), cr(s)]);
            let data = spectral_data(&m).unwrap();
            assert!(
                (data.sigma_min - s).abs() <= 1e-14,
                "s={s} gave sigma_min={}",
                data.sigma_min
            );
        }
        // rotated version: U diag(1, s) V* keeps the same singular values
        let s = 1e-13;
        let c45 = std::f64::consts::FRAC_1_SQRT_2;
        let u = Matrix::from_rows(vec![vec![cr(c45), cr(-c45)], vec![cr(c45), cr(c45)]]).unwrap();
        let m = u
            .mul(&Matrix::diagonal(&[cr(1.0), cr(s)]))
            .mul(&u.adjoint());
        let data = spectral_data(&m).unwrap();
        assert!(
            (data.sigma_min - s).abs() <= 1e-14,
            "rotated sigma_min {}",
            data.sigma_min
        );
    }

    #[test]
    fn sigma_max_never_exceeds_hs_norm() {
        for seed in 0..30u64 {
            let mut rng = SplitMix64::new(4000 + seed);
            let n = 1 + (rng.next_u64() % 6) as usize;
            let m = Matrix::from_fn(n, n, |_, _| c(rng.uniform::<f64>(), rng.uniform()));
            let data = spectral_data(&m).unwrap();
            assert!(data.sigma_max <= data.hs_norm);
            assert!(data.sigma_min <= data.sigma_max);
        }
    }
}
