//! Unified error type for every fallible operation in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numeric and geometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A bracketing root-finder was handed endpoints with equal signs.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// An iterative routine exhausted its budget before reaching tolerance.
    #[error("{what} failed to converge (residual {residual:e})")]
    NoConvergence { what: &'static str, residual: f64 },

    /// Basis vectors are linearly dependent to working precision.
    #[error("degenerate lattice basis: |det| = {det:e} is below {min:e}")]
    Degenerate { det: f64, min: f64 },

    /// An enumeration or tabulation would exceed the configured cap.
    #[error("requested size {needed} exceeds the configured cap {cap}")]
    BudgetExceeded { needed: u64, cap: u64 },

    /// The input data contradicts itself (wrong point counts and the like).
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    /// Adjacent tangent lines are numerically parallel.
    #[error("tangent lines nearly parallel: |det| = {det:e}")]
    TangentDegenerate { det: f64 },

    /// The boundary curve is not differentiable where a tangent is required.
    #[error("boundary of the p = {p} ball is not smooth")]
    NotSmooth { p: f64 },

    /// An exact integer computation would exceed the supported bit width.
    #[error("integer overflow: {0}")]
    Overflow(String),
}
