//! Small dense complex and real linear algebra.

mod complex;
mod eig;
mod real;
mod svd;

pub use complex::{inner, norm, partial_trace, ComplexMatrix, Keep, C64, I, ONE, ZERO};
pub use eig::{herm_eig, HermEigen};
pub use real::{cond2, det, det_and_cofactors, solve, RealMatrix};
pub use svd::{singular_values, svd, Svd};

/// `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}
