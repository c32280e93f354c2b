use thiserror::Error;

use crate::symexpr::Var;

/// Errors raised while evaluating an expression at a numeric point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-positive base {base} under fractional power {exponent}")]
    NonPositiveBase { base: f64, exponent: String },
    #[error("variable {0} is not covered by the point")]
    Uncovered(Var),
    #[error("non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index out of range at position {pos}: {msg}")]
    IndexOutOfRange { pos: usize, msg: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point lies outside the slit bundle (|y_1| = {norm})")]
    OutsideSlit { norm: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("inconsistent linear system (residual {residual:e})")]
    Inconsistent { residual: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
