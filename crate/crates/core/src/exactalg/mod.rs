//! Exact linear algebra over prime fields and the rationals.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::{axpy, dot, invert, is_zero_vec, kron_vec, nullspace, rref, scale, solve, unit_vector, Matrix, Rref, Solution};
pub use scalar::{is_prime, Fp, Rational, Scalar};
pub use subspace::{all_vectors, enumerate_subspaces, projective_points, Subspace};
