//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by validation, solvers, and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a documented invariant (bad capacity, score out of
    /// range, duplicate identifier, ...).
    #[error("validation: {0}")]
    Validation(String),

    /// Matrix/vector dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An argument is outside its documented domain (t out of range, K = 0,
    /// negative multiplier, ...).
    #[error("argument: {0}")]
    Argument(String),

    /// A policy or estimator was configured inconsistently (missing duals,
    /// non-positive slackness for theoretical CBP parameters, ...).
    #[error("configuration: {0}")]
    Config(String),

    /// The LP solver exceeded its iteration cap.
    #[error("solver stalled: {0}")]
    SolverStall(String),

    /// A problem that must be feasible is not (transportation with deficient
    /// capacity, offline program under a broken custom rule).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// An internal invariant failed; indicates a bug, not bad input.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
