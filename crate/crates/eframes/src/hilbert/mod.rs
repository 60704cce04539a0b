//! Finite-dimensional model of the ambient Hilbert-space objects: vectors,
//! vector sequences, dense complex matrices, matrix mappings with spectral
//! certificates, and the factorizations built on the Hermitian eigensolver.

pub mod eigen;
pub mod factor;
pub mod matrix;
pub mod tol;
pub mod vector;

pub use eigen::{hermitian_eigen, operator_norm, spectral_data, HermitianEigen};
pub use factor::{hermitian_sqrt, polar_decompose};
pub use matrix::{Matrix, MatrixMap, SpectralData};
pub use tol::Tolerances;
pub use vector::{Vector, VectorSequence};
