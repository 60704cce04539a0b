//! Matrix factorizations derived from the Hermitian eigensolver: principal
//! square roots of PSD matrices and the polar decomposition D = V·P.

use crate::error::{Error, Result};
use crate::hilbert::eigen::{hermitian_eigen, spectral_data};
use crate::hilbert::matrix::Matrix;
use crate::hilbert::tol::Tolerances;
use crate::scalar::{Real, C};

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues in [−rank_tol·‖P‖, 0) are treated as rounding debris and
/// clamped to zero; anything more negative is a genuine PSD violation.
pub fn hermitian_sqrt<T: Real>(p: &Matrix<T>, tol: &Tolerances<T>) -> Result<Matrix<T>> {
    assert!(p.is_square(), "square root requires a square matrix");
    let scale = p.frobenius_norm().max(T::one());
    let herm_resid = p.hermitian_residual();
    if herm_resid > tol.orthonorm_tol * scale {
        return Err(Error::NotHermitian {
            residual: herm_resid.as_f64(),
        });
    }
    let eig = hermitian_eigen(p)?;
    let spectral_scale = eig.lambda_max().abs().max(eig.lambda_min().abs());
    if eig.lambda_min() < -tol.rank_tol * spectral_scale {
        return Err(Error::NotPSD {
            min_eigenvalue: eig.lambda_min().as_f64(),
        });
    }
    let root = eig.apply_fn(|lambda| lambda.max(T::zero()).sqrt());
    Ok(root.hermitian_part())
}

/// Polar decomposition D = V·P with V unitary and P = (D*D)^{1/2}.
///
/// Requires numerical invertibility; otherwise the unitary factor is not
/// determined. V is built from the eigenbasis of D*D and polished with two
/// Newton–Schulz sweeps V ← V(3I − V*V)/2, which contract the unitarity
/// residual quadratically.
pub fn polar_decompose<T: Real>(
    d: &Matrix<T>,
    tol: &Tolerances<T>,
) -> Result<(Matrix<T>, Matrix<T>)> {
    assert!(
        d.is_square(),
        "polar decomposition requires a square matrix"
    );
    let n = d.nrows();
    let spectral = spectral_data(d)?;
    if spectral.sigma_min <= tol.rank_tol * spectral.sigma_max {
        return Err(Error::SingularInput);
    }
    let gram = d.adjoint().mul(d);
    let eig = hermitian_eigen(&gram)?;
    let p = eig
        .apply_fn(|lambda| lambda.max(T::zero()).sqrt())
        .hermitian_part();
    let p_inv = eig.apply_fn(|lambda| lambda.max(T::zero()).sqrt().recip());
    let mut v = d.mul(&p_inv);

    let half = C::new(T::lit(0.5), T::zero());
    let three = C::new(T::lit(3.0), T::zero());
    for _ in 0..2 {
        let correction = Matrix::identity(n).scale(three).sub(&v.adjoint().mul(&v));
        v = v.mul(&correction).scale(half);
    }
    Ok((v, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::SplitMix64;
    use crate::hilbert::eigen::operator_norm;
    use crate::scalar::{c, cr};

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn sqrt_of_identity_is_identity() {
        let id = Matrix::<f64>::identity(3);
        let q = hermitian_sqrt(&id, &tol()).unwrap();
        assert!(q.max_abs_diff(&id) < 1e-15);
    }

    // entrywise root of a diagonal PSD matrix
    #[test]
    fn sqrt_of_diagonal() {
        let p = Matrix::diagonal(&[cr(4.0), cr(9.0)]);
        let q = hermitian_sqrt(&p, &tol()).unwrap();
        assert!(q.max_abs_diff(&Matrix::diagonal(&[cr(2.0), cr(3.0)])) < 1e-15);
    }

    // [[2,1],[1,2]] has eigenpairs (1, (1,−1)/√2), (3, (1,1)/√2);
    // the root rebuilt in that basis is [[√3+1, √3−1],[√3−1, √3+1]]/2
    #[test]
    fn sqrt_in_rotated_eigenbasis() {
        let p = Matrix::from_rows(vec![vec![cr(2.0), cr(1.0)], vec![cr(1.0), cr(2.0)]]).unwrap();
        let q = hermitian_sqrt(&p, &tol()).unwrap();
        let r3 = 3.0f64.sqrt();
        let expect = Matrix::from_rows(vec![
            vec![cr((r3 + 1.0) / 2.0), cr((r3 - 1.0) / 2.0)],
            vec![cr((r3 - 1.0) / 2.0), cr((r3 + 1.0) / 2.0)],
        ])
        .unwrap();
        assert!(q.max_abs_diff(&expect) < 1e-14);
        assert!(q.mul(&q).max_abs_diff(&p) < 1e-10);
    }

    #[test]
    fn sqrt_rejects_indefinite_and_non_hermitian() {
        let indefinite = Matrix::diagonal(&[cr(1.0), cr(-1.0)]);
        assert!(matches!(
            hermitian_sqrt(&indefinite, &tol()),
            Err(Error::NotPSD { .. })
        ));
        let skew = Matrix::from_rows(vec![vec![cr(0.0), cr(1.0)], vec![cr(0.0), cr(0.0)]]).unwrap();
        assert!(matches!(
            hermitian_sqrt(&skew, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn polar_of_identity() {
        let id = Matrix::<f64>::identity(2);
        let (v, p) = polar_decompose(&id, &tol()).unwrap();
        assert!(v.max_abs_diff(&id) < 1e-15);
        assert!(p.max_abs_diff(&id) < 1e-15);
    }

    // sign/magnitude split of a real diagonal
    #[test]
    fn polar_of_signed_diagonal() {
        let d = Matrix::diagonal(&[cr(-2.0), cr(3.0)]);
        let (v, p) = polar_decompose(&d, &tol()).unwrap();
        assert!(v.max_abs_diff(&Matrix::diagonal(&[cr(-1.0), cr(1.0)])) < 1e-14);
        assert!(p.max_abs_diff(&Matrix::diagonal(&[cr(2.0), cr(3.0)])) < 1e-14);
    }

    // factorization contract on a seeded random invertible matrix
    #[test]
    fn polar_contract_random_seed_42() {
        let mut rng = SplitMix64::new(42);
        let d = Matrix::from_fn(4, 4, |_, _| c(rng.uniform(), rng.uniform()));
        let (v, p) = polar_decompose(&d, &tol()).unwrap();
        let d_norm = operator_norm(&d);
        let resid = operator_norm(&v.mul(&p).sub(&d));
        assert!(resid <= 1e-9 * d_norm, "residual {resid}");
        let unit = v.adjoint().mul(&v).max_abs_diff(&Matrix::identity(4));
        assert!(unit <= 1e-8, "unitarity {unit}");
        // P = (D*D)^{1/2}
        let gram_resid = p.mul(&p).max_abs_diff(&d.adjoint().mul(&d));
        assert!(gram_resid <= 1e-12 * d_norm * d_norm);
    }

    #[test]
    fn polar_rejects_singular_input() {
        let z = Matrix::<f64>::zeros(2, 2);
        assert!(matches!(
            polar_decompose(&z, &tol()),
            Err(Error::SingularInput)
        ));
    }
}
