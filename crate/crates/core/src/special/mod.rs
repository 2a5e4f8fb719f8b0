//! Special functions: the reciprocal Gamma function and the Mittag-Leffler
//! functions E_{a,β} evaluated on the negative real axis.
//!
//! E_{a,β}(z) = Σ_{k≥0} z^k / Γ(ak + β) generalizes the exponential
//! (a = β = 1) and trigonometric kernels (a = 2). For a ∈ (1,2) it is the
//! per-mode propagator of the fractional diffusive equation: each Fourier
//! mode of the solution evolves as a combination of t^{β−1}E_{a,β}(−t^a|ξ|²).

mod gamma;
mod mittag_leffler;

pub use gamma::gamma_reciprocal;
pub use mittag_leffler::{
    eval_ml, eval_ml_asymptotic, eval_ml_series, ml_weighted_derivative, MlDecomposition, MlQuery,
};

pub(crate) use gamma::sin_pi;
pub(crate) use mittag_leffler::MlEvaluator;
