//! Exact scalar, dense-matrix and sparse polynomial arithmetic.

pub mod form;
pub mod matrix;
pub mod poly;
pub mod scalar;

pub use form::{form_restrict, QuadraticForm};
pub use matrix::{commutator, dot, vectors_rank, Matrix, Vector};
pub use poly::{poly_commutator, Monomial, Poly, PolyMatrix, Vars};
pub use scalar::{parse_rational, Rational, Scalar};

/// Right null space of `m`; see [`Matrix::kernel_basis`].
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    m.kernel_basis()
}
