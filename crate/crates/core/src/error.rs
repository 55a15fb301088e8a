//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by lattice operators, quadrature, series evaluation and
/// the fixed-point solver.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QcalcError {
    /// An argument was outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An infinite product or series hit the term cap before the increment
    /// dropped below the truncation threshold.
    #[error("truncation did not converge after {terms} terms (last increment {last_increment:e})")]
    TruncationNotConverged { terms: usize, last_increment: f64 },

    /// The geometric tail bound of a truncated Jackson sum exceeded the
    /// truncation threshold.
    #[error("{tail} tail of the Jackson sum is not negligible (bound {bound:e} > tol {tol:e})")]
    TailNotNegligible {
        tail: &'static str,
        bound: f64,
        tol: f64,
    },

    /// A lattice value needed by an operator is outside the window or was
    /// never defined.
    #[error("missing lattice value at x = {x}")]
    MissingValue { x: f64 },

    /// Ring extrapolation toward zero did not stabilize.
    #[error("function is not q-regular at zero (ring values did not stabilize)")]
    NotQRegular,

    /// An operation that dispatches on parity received a function with
    /// parity `General`.
    #[error("parity error: {0}")]
    Parity(String),

    /// The Picard increments stopped decreasing geometrically.
    #[error("iteration is not contracting (increment ratio {ratio} over 5 consecutive steps)")]
    NotContracting { ratio: f64 },

    /// The iteration cap was reached before the requested tolerance.
    #[error("no convergence after {0} iterations")]
    MaxIterations(usize),

    /// A factor of the infinite product vanished, so the product formula
    /// does not apply.
    #[error("singular product factor at k = {k} (1 + x(1-q)q^k E(xq^k) = 0)")]
    SingularFactor { k: usize },

    /// A user-supplied callable failed.
    #[error("evaluation error: {0}")]
    Evaluation(String),
}

pub type Result<T> = std::result::Result<T, QcalcError>;
