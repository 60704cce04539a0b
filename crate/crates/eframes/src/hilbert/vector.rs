//! Vectors of the ambient space ℂ^d and finite sequences of them.
//!
//! A [`VectorSequence`] models a square-summable sequence {f_k} whose tail is
//! identically zero: only the first N terms are stored and ever touched.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Element of ℂ^d. Inner products are linear in the first slot:
/// ⟨x, y⟩ = Σ xᵢ ⋅ conj(yᵢ).
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<T> {
    entries: Vec<C<T>>,
}

impl<T: Real> Vector<T> {
    pub fn new(entries: Vec<C<T>>) -> Self {
        Self { entries }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            entries: vec![C::new(T::zero(), T::zero()); dim],
        }
    }

    /// k-th standard basis vector e_k of ℂ^d (zero-based k).
    pub fn standard_basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut v = Self::zero(dim);
        v.entries[k] = C::new(T::one(), T::zero());
        v
    }

    pub fn from_reals(reals: &[T]) -> Self {
        Self {
            entries: reals.iter().map(|&r| C::new(r, T::zero())).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [C<T>] {
        &mut self.entries
    }

    /// ⟨self, other⟩ = Σ selfᵢ ⋅ conj(otherᵢ).
    pub fn inner(&self, other: &Self) -> C<T> {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(C::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + *a * b.conj()
            })
    }

    pub fn norm_sqr(&self) -> T {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: C<T>) -> Self {
        Self {
            entries: self.entries.iter().map(|z| *z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }

    /// self += factor * other, without an intermediate allocation.
    pub fn axpy(&mut self, factor: C<T>, other: &Self) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += factor * *b;
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            entries: self.entries.iter().map(Complex::conj).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|z| -*z).collect(),
        }
    }

    /// Unit vector in the same direction. Returns `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() {
            Some(self.scale(C::new(n.recip(), T::zero())))
        } else {
            None
        }
    }

    pub fn distance(&self, other: &Self) -> T {
        self.sub(other).norm()
    }
}

/// Finite model of {f_k}_{k=1}^∞ ∈ ⊕H: N vectors sharing one dimension d,
/// zero tail. The squared ⊕-norm Σ‖f_k‖² is cached at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSequence<T> {
    vectors: Vec<Vector<T>>,
    dim: usize,
    sum_sq_norms: T,
}

impl<T: Real> VectorSequence<T> {
    pub fn new(vectors: Vec<Vector<T>>) -> Result<Self> {
        let dim = match vectors.first() {
            Some(v) => v.dim(),
            None => {
                return Err(Error::ValidationError {
                    field: "vectors".into(),
                    message: "sequence must contain at least one vector".into(),
                })
            }
        };
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.dim(),
                });
            }
        }
        let sum_sq_norms = vectors.iter().map(Vector::norm_sqr).sum();
        Ok(Self {
            vectors,
            dim,
            sum_sq_norms,
        })
    }

    /// The standard orthonormal basis {e_1, …, e_d} of ℂ^d.
    pub fn standard_onb(dim: usize) -> Self {
        assert!(dim >= 1, "ambient dimension must be at least 1");
        let vectors = (0..dim).map(|k| Vector::standard_basis(dim, k)).collect();
        Self::new(vectors).expect("standard basis is well formed")
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cached Σ_k ‖f_k‖², the squared norm in ⊕H.
    pub fn sum_sq_norms(&self) -> T {
        self.sum_sq_norms
    }

    pub fn direct_sum_norm(&self) -> T {
        self.sum_sq_norms.sqrt()
    }

    pub fn vectors(&self) -> &[Vector<T>] {
        &self.vectors
    }

    pub fn get(&self, k: usize) -> &Vector<T> {
        &self.vectors[k]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vector<T>> {
        self.vectors.iter()
    }

    /// Largest member norm, used to scale sequence-level residuals.
    pub fn max_vector_norm(&self) -> T {
        self.vectors
            .iter()
            .map(Vector::norm)
            .fold(T::zero(), T::max)
    }

    /// Entrywise distance in ⊕H between two sequences of equal shape.
    pub fn distance(&self, other: &Self) -> T {
        debug_assert_eq!(self.len(), other.len());
        self.vectors
            .iter()
            .zip(other.iter())
            .map(|(a, b)| a.sub(b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// Apply a linear map (given entrywise) to every vector in the sequence.
    pub fn map_vectors<F: FnMut(&Vector<T>) -> Vector<T>>(&self, f: F) -> Self {
        let vectors: Vec<_> = self.vectors.iter().map(f).collect();
        Self::new(vectors).expect("mapped sequence keeps its shape")
    }
}
