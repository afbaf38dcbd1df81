//! Exact arithmetic: scalars, dense matrices and Laurent polynomials.

pub mod laurent;
pub mod matrix;
mod parse;
pub mod scalar;

pub use laurent::{vars_from, ArithOp, Laurent, Monomial, Vars};
pub use matrix::Matrix;
pub use scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    MismatchedVariables { left: Vec<String>, right: Vec<String> },
    #[error("division is not exact; remainder {remainder}")]
    NonExactDivision { remainder: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}
