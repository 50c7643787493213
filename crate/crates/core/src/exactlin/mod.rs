//! Exact scalars, indexed bases, sparse vectors/tensors/matrices and an
//! exact sparse linear solver.

mod matrix;
mod scalar;
mod solve;
mod sparse;

pub use matrix::SparseMatrix;
pub use scalar::{rational_is_integer, Field, Rational, Scalar};
pub use solve::{solve_linear, LinearSystem};
pub use sparse::{tensor, BasisIndex, Comb, SpaceId, SparseTensor, SparseVector};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
    #[error("space mismatch: {0} vs {1}")]
    SpaceMismatch(SpaceId, SpaceId),
    #[error("tensor arity {0} outside 1..=4")]
    BadArity(usize),
    #[error("malformed system: {0}")]
    Malformed(String),
    #[error("system is infeasible")]
    Infeasible,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}
