//! Exact linear algebra over the rationals: scalars, sparse matrices,
//! subspaces, graded spaces, chain complexes, filtrations and homology.

pub mod filtered;
pub mod graded;
pub mod json;
pub mod matrix;
pub mod scalar;
pub mod subspace;

pub use filtered::{is_filtered_quasi_iso, is_quasi_iso, FilteredComplex, FilteredQisoReport, PieceReport};
pub use graded::{ChainComplex, GradedMap, GradedSpace, HomologyGroup};
pub use matrix::{vec_add_scaled, SparseMatrix, SparseVec};
pub use scalar::{format_scalar, frac, int, parse_scalar, sign, LinComb, Scalar};
pub use subspace::{Quotient, Subspace};

/// Rank of a sparse rational matrix.
pub fn rank(m: &SparseMatrix) -> usize {
    m.rank()
}

/// Null space basis; each returned vector is annihilated by `m`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    m.kernel_basis()
}
