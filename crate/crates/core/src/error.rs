//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The alternating Mittag-Leffler series lost too many digits to
    /// cancellation: the largest intermediate term exceeded `1/rel_tol`
    /// times the result estimate. The asymptotic path should be used.
    #[error("series cancellation: max term {max_term:.3e} vs result {result:.3e} at rel_tol {rel_tol:.1e}")]
    CancellationLoss {
        max_term: f64,
        result: f64,
        rel_tol: f64,
    },

    /// Adaptive quadrature did not reach the requested tolerance within its
    /// panel budget.
    #[error("quadrature failed to converge: estimate {estimate:.6e}, error {abs_err:.3e}, requested {requested:.1e}")]
    QuadratureFailure {
        estimate: f64,
        abs_err: f64,
        requested: f64,
    },

    /// An asymptotic order `m` below the admissible range `m ≥ ρβ − 1`.
    #[error("asymptotic order m = {m} below the admissible minimum {min_required:.3} for rho = {rho}, beta = {beta}")]
    InvalidOrder {
        m: u32,
        min_required: f64,
        rho: f64,
        beta: f64,
    },

    /// A time grid with too few nodes for the requested finite-difference
    /// stencils.
    #[error("time grid too coarse: {n_steps} steps, need at least {min_steps}")]
    GridTooCoarse { n_steps: usize, min_steps: usize },

    /// An exponent outside the admissible range (e.g. a Lebesgue exponent
    /// q < 1, or a weight exponent a ≥ 1 in the integral bounds).
    #[error("invalid exponent: {what} = {value}")]
    InvalidExponent { what: &'static str, value: f64 },

    /// A decay scenario whose norm exponent lies outside the admissible
    /// range of the kernels it touches.
    #[error("inadmissible scenario: {reason}")]
    InadmissibleScenario { reason: String },

    /// A log-log fit with no spread in the abscissa.
    #[error("degenerate fit: zero variance in log(1+t)")]
    DegenerateFit,

    /// Malformed input (grids, fields, parameter ranges).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
