//! Dense complex matrices and finite matrix mappings on vector sequences.
//!
//! [`Matrix`] is a row-major dense matrix over ℂ with the handful of kernels
//! the rest of the crate is built on: multiplication, adjoints, Frobenius
//! norms, and LU solves with partial pivoting and one step of iterative
//! refinement. [`MatrixMap`] wraps a square matrix together with its cached
//! spectral certificates (operator norm, smallest singular value,
//! Hilbert–Schmidt norm, invertibility).

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::tol::Tolerances;
use crate::hilbert::vector::{Vector, VectorSequence};
use crate::scalar::{Real, C};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C<T>>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C<T>>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(entries: &[C<T>]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn row_mut(&mut self, i: usize) -> &mut [C<T>] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column j collected as a [`Vector`].
    pub fn col(&self, j: usize) -> Vector<T> {
        Vector::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| *a + *b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| *a - *b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, factor: C<T>) -> Self {
        let data = self.data.iter().map(|z| *z * factor).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Matrix product, (i, k, j) loop order over contiguous rows.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * *s;
                }
            }
        }
        out
    }

    pub fn mul_vector(&self, v: &Vector<T>) -> Vector<T> {
        assert_eq!(self.cols, v.dim(), "inner dimensions must agree");
        let mut out = vec![C::new(T::zero(), T::zero()); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = C::new(T::zero(), T::zero());
            for (a, x) in self.row(i).iter().zip(v.entries()) {
                acc += *a * *x;
            }
            *o = acc;
        }
        Vector::new(out)
    }

    /// Conjugate transpose A*.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise conjugate Ā.
    pub fn conj(&self) -> Self {
        let data = self.data.iter().map(Complex::conj).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// S += v ⋅ w*, the rank-one update building frame operators.
    pub fn add_outer(&mut self, v: &Vector<T>, w: &Vector<T>) {
        debug_assert_eq!(self.rows, v.dim());
        debug_assert_eq!(self.cols, w.dim());
        for i in 0..self.rows {
            let vi = v.entries()[i];
            let dst = self.row_mut(i);
            for (d, wj) in dst.iter_mut().zip(w.entries()) {
                *d += vi * wj.conj();
            }
        }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs_entry(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// max |A − B| over entries.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// max |A − A*| over entries; zero iff Hermitian.
    pub fn hermitian_residual(&self) -> T {
        debug_assert!(self.is_square());
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                let gap = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(gap);
            }
        }
        worst
    }

    /// (A + A*)/2, the Hermitian part. Drift suppression before eigensolves.
    pub fn hermitian_part(&self) -> Self {
        debug_assert!(self.is_square());
        let half = C::new(T::lit(0.5), T::zero());
        self.add(&self.adjoint()).scale(half)
    }

    pub fn is_diagonal(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && (self[(i, j)].re != T::zero() || self[(i, j)].im != T::zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// LU factorization with partial pivoting. The factorization is kept even
    /// when a zero pivot is hit; `solve` then reports [`Error::SingularMatrix`].
    pub fn lu(&self) -> Lu<T> {
        assert!(self.is_square(), "LU requires a square matrix");
        let n = self.rows;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm_sqr();
            for i in k + 1..n {
                let cand = lu[(i, k)].norm_sqr();
                if cand > best {
                    best = cand;
                    p = i;
                }
            }
            if p != k {
                perm.swap(k, p);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            if pivot.norm_sqr() == T::zero() {
                singular = true;
                continue;
            }
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                for j in k + 1..n {
                    let s = lu[(k, j)];
                    lu[(i, j)] -= m * s;
                }
            }
        }
        Lu { lu, perm, singular }
    }

    /// Solve A x = b with one step of iterative refinement.
    pub fn solve(&self, b: &Vector<T>) -> Result<Vector<T>> {
        Ok(self
            .solve_many(std::slice::from_ref(b))?
            .pop()
            .expect("one rhs"))
    }

    /// Solve A x = b for several right-hand sides off one factorization,
    /// each refined once: r = b − A x, x += A⁻¹ r.
    pub fn solve_many(&self, rhs: &[Vector<T>]) -> Result<Vec<Vector<T>>> {
        let lu = self.lu();
        rhs.iter()
            .map(|b| {
                let mut x = lu.solve(b)?;
                let r = b.sub(&self.mul_vector(&x));
                x = x.add(&lu.solve(&r)?);
                Ok(x)
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let unit: Vec<Vector<T>> = (0..n).map(|j| Vector::standard_basis(n, j)).collect();
        let cols = self.solve_many(&unit)?;
        Ok(Self::from_fn(n, n, |i, j| cols[j].entries()[i]))
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factors of a square matrix, PA = LU.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    singular: bool,
}

impl<T: Real> Lu<T> {
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Forward/back substitution, no refinement.
    pub fn solve(&self, b: &Vector<T>) -> Result<Vector<T>> {
        if self.singular {
            return Err(Error::SingularMatrix);
        }
        let n = self.lu.nrows();
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.dim(),
            });
        }
        let mut y: Vec<C<T>> = self.perm.iter().map(|&p| b.entries()[p]).collect();
        for i in 1..n {
            let mut acc = y[i];
            for (yj, lij) in y[..i].iter().zip(self.lu.row(i)) {
                acc -= *lij * *yj;
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for (yj, lij) in y[i + 1..n].iter().zip(&self.lu.row(i)[i + 1..n]) {
                acc -= *lij * *yj;
            }
            y[i] = acc / self.lu[(i, i)];
        }
        Ok(Vector::new(y))
    }
}

/// Spectral certificates of a square matrix: extreme singular values and the
/// Hilbert–Schmidt (Frobenius) norm. Always `sigma_min ≤ sigma_max ≤ hs_norm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralData<T> {
    pub sigma_max: T,
    pub sigma_min: T,
    pub hs_norm: T,
}

/// The finite model of an infinite matrix mapping E: an N×N complex
/// matrix acting on length-N vector sequences by
/// (E{f})_n = Σ_k E_{n,k} f_k, with cached spectral data and an
/// invertibility certificate `sigma_min > rank_tol ⋅ sigma_max`.
#[derive(Debug, Clone)]
pub struct MatrixMap<T> {
    matrix: Matrix<T>,
    spectral: SpectralData<T>,
    invertible: bool,
    diagonal: bool,
}

impl<T: Real> MatrixMap<T> {
    pub fn new(matrix: Matrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let spectral = crate::hilbert::eigen::spectral_data(&matrix)?;
        let invertible = spectral.sigma_min > tol.rank_tol * spectral.sigma_max;
        let diagonal = matrix.is_diagonal();
        Ok(Self {
            matrix,
            spectral,
            invertible,
            diagonal,
        })
    }

    pub fn identity(n: usize, tol: &Tolerances<T>) -> Self {
        Self::new(Matrix::identity(n), tol).expect("identity map is well formed")
    }

    pub fn from_diagonal(entries: &[C<T>], tol: &Tolerances<T>) -> Result<Self> {
        Self::new(Matrix::diagonal(entries), tol)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn spectral(&self) -> SpectralData<T> {
        self.spectral
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    /// Operator norm ‖E‖ = sigma_max.
    pub fn operator_norm(&self) -> T {
        self.spectral.sigma_max
    }

    /// The sequence action {f_k} ↦ {Σ_k E_{n,k} f_k}_n.
    ///
    /// Dimension d and length N are preserved. Diagonal maps take the O(N·d)
    /// fast path.
    pub fn apply(&self, seq: &VectorSequence<T>) -> Result<VectorSequence<T>> {
        let n = self.dim();
        if seq.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: seq.len(),
            });
        }
        let vectors: Vec<Vector<T>> = if self.diagonal {
            (0..n)
                .map(|i| seq.get(i).scale(self.matrix[(i, i)]))
                .collect()
        } else {
            (0..n)
                .map(|i| {
                    let mut acc = Vector::zero(seq.dim());
                    for (k, f) in seq.iter().enumerate() {
                        acc.axpy(self.matrix[(i, k)], f);
                    }
                    acc
                })
                .collect()
        };
        VectorSequence::new(vectors)
    }

    /// E acting on an ℓ² coefficient vector.
    pub fn apply_coeffs(&self, coeffs: &Vector<T>) -> Result<Vector<T>> {
        if coeffs.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coeffs.dim(),
            });
        }
        Ok(self.matrix.mul_vector(coeffs))
    }

    /// Solve E x = b (used to apply E⁻¹ without forming the inverse).
    pub fn solve(&self, b: &Vector<T>) -> Result<Vector<T>> {
        if !self.invertible {
            return Err(Error::SingularMatrix);
        }
        self.matrix.solve(b)
    }
}
