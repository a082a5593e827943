//! Dense complex linear algebra for small matrices (dimension ≲ 64).
//!
//! Provides exactly what the rest of the crate needs: a row-major complex
//! matrix type, a cyclic-Jacobi Hermitian eigensolver, an SVD built on it,
//! the trace norm, and Gram-Schmidt orthonormalization. Not intended for
//! large or sparse problems.

mod eigen;
mod matrix;
mod svd;

pub use eigen::{hermitian_eigensystem, hermitian_eigenvalues, DEFAULT_HERMITICITY_TOL};
pub use matrix::ComplexMatrix;
pub use svd::{orthonormalize_columns, singular_value_decomposition, trace_norm};

pub(crate) use eigen::jacobi_eigenvalues_in_place;
pub(crate) use svd::mgs_columns;

/// Complex scalar used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
