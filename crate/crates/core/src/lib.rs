//! Numerics toolkit for the semilinear fractional diffusive equation
//!
//! ```text
//! ∂ₜ^{1+α} u − Δu = |u|^p,    u(0,x) = u₀(x),  uₜ(0,x) = u₁(x),
//! ```
//!
//! on ℝⁿ, approximated by a periodic box, with α ∈ (0,1). The time order
//! 1+α interpolates between the heat equation (α → 0) and the wave
//! equation (α → 1); the per-Fourier-mode propagators are Mittag-Leffler
//! functions E_{1+α,β}.
//!
//! The crate is organized around five building blocks:
//!
//! * [`special`] — Mittag-Leffler functions E_{a,β}(−x) by power series and
//!   by an oscillatory/algebraic/remainder decomposition, plus the entire
//!   reciprocal Gamma function.
//! * [`fractional`] — Riemann-Liouville fractional integrals and Caputo /
//!   Riemann-Liouville fractional derivatives on uniform time grids.
//! * [`spectral`] — solution kernels G_{1+α,β} and auxiliary kernel families
//!   on periodic boxes via the FFT, with Lᵖ norms and scaling checks.
//! * [`solver`] — the linear Cauchy problem solved exactly per Fourier mode,
//!   and the semilinear problem marched explicitly with memory quadrature.
//! * [`analysis`] — closed-form critical exponents, decay-rate predictions
//!   and empirical fits, and weakly singular integral bounds.

pub mod analysis;
pub mod error;
pub mod fractional;
pub mod profiles;
pub mod quad;
pub mod solver;
pub mod special;
pub mod spectral;

mod memory;

pub use error::{Error, Result};
pub use fractional::{FractionalOrder, TimeGrid, TimeSeries};
pub use spectral::{Field, SpatialGrid};
