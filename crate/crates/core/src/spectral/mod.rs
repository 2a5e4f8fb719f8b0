//! Periodic-box discretization of ℝⁿ and the Fourier-multiplier kernels of
//! the fractional diffusive equation.

mod fft;
mod kernels;

pub use kernels::{
    assemble_kernel_decomposition, build_aux_kernel, build_gradient_kernels, build_kernel,
    lp_admissible_range, scaling_check, AuxFamily, AuxKernelSpec, BetaIndex, KernelSpec, LpRange,
};

pub(crate) use fft::{field_to_spectrum, spectrum_to_field};

use crate::error::{Error, Result};

/// Periodic box [−L, L)ⁿ sampled with N (a power of two) points per axis.
///
/// Grid points are x_j = −L + 2Lj/N and the lattice frequencies are
/// ξ_k = πk/L with k ∈ [−N/2, N/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    dim: usize,
    points_per_axis: usize,
    half_width: f64,
}

impl SpatialGrid {
    pub fn new(dim: usize, points_per_axis: usize, half_width: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::input(format!("dimension {dim} outside 1..=3")));
        }
        if points_per_axis < 16 || !points_per_axis.is_power_of_two() {
            return Err(Error::input(format!(
                "points per axis {points_per_axis} must be a power of two ≥ 16"
            )));
        }
        if !(half_width > 0.0) {
            return Err(Error::input(format!(
                "half width {half_width} must be positive"
            )));
        }
        Ok(Self {
            dim,
            points_per_axis,
            half_width,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn total_points(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    /// (2L/N)^n.
    pub fn cell_volume(&self) -> f64 {
        (2.0 * self.half_width / self.points_per_axis as f64).powi(self.dim as i32)
    }

    /// Coordinates along one axis.
    pub fn axis_coords(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.points_per_axis;
        let l = self.half_width;
        (0..n).map(move |j| -l + 2.0 * l * j as f64 / n as f64)
    }

    /// Signed lattice index of an unsigned per-axis FFT index.
    pub(crate) fn signed_index(&self, k: usize) -> i64 {
        let n = self.points_per_axis;
        if k < n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    /// Decompose a flat row-major index into per-axis indices.
    pub(crate) fn unravel(&self, mut idx: usize) -> [usize; 3] {
        let n = self.points_per_axis;
        let mut out = [0usize; 3];
        for ax in (0..self.dim).rev() {
            out[ax] = idx % n;
            idx /= n;
        }
        out
    }

    /// Σ k_s² over axes for flat index `idx` — the integer key behind |ξ|².
    pub(crate) fn k_square_sum(&self, idx: usize) -> u64 {
        let ks = self.unravel(idx);
        let mut acc = 0u64;
        for ax in 0..self.dim {
            let s = self.signed_index(ks[ax]);
            acc += (s * s) as u64;
        }
        acc
    }

    /// ξ along one axis for flat index `idx`.
    pub(crate) fn xi_axis(&self, idx: usize, ax: usize) -> f64 {
        let ks = self.unravel(idx);
        std::f64::consts::PI / self.half_width * self.signed_index(ks[ax]) as f64
    }

    /// Coordinates of flat index `idx`.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let ks = self.unravel(idx);
        let n = self.points_per_axis as f64;
        let l = self.half_width;
        let mut out = [0.0; 3];
        for ax in 0..self.dim {
            out[ax] = -l + 2.0 * l * ks[ax] as f64 / n;
        }
        out
    }
}

/// Real values on a [`SpatialGrid`], row-major.
#[derive(Debug, Clone)]
pub struct Field {
    pub grid: SpatialGrid,
    pub values: Vec<f64>,
}

impl Field {
    pub fn new(grid: SpatialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.total_points() {
            return Err(Error::input(format!(
                "field length {} does not match grid ({} points)",
                values.len(),
                grid.total_points()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: SpatialGrid) -> Self {
        let n = grid.total_points();
        Self {
            grid,
            values: vec![0.0; n],
        }
    }

    /// Sample a function of the coordinates.
    pub fn from_fn(grid: SpatialGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.total_points())
            .map(|idx| {
                let p = grid.point(idx);
                f(&p[..grid.dim()])
            })
            .collect();
        Self { grid, values }
    }

    /// Cell-weighted Lᵍ norm; q = ∞ is the max modulus.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        if q.is_infinite() && q > 0.0 {
            return Ok(self.values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        }
        if !(q >= 1.0) {
            return Err(Error::InvalidExponent {
                what: "lebesgue exponent q",
                value: q,
            });
        }
        let cellvol = self.grid.cell_volume();
        let sum: f64 = self.values.iter().map(|v| v.abs().powf(q)).sum();
        Ok((cellvol * sum).powf(1.0 / q))
    }

    /// ∫ f dx over the box (cell sum).
    pub fn integral(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest |value| on the x₁ boundary plane relative to the peak — a
    /// cheap a-posteriori check that the box truncation decayed.
    pub fn boundary_to_peak_ratio(&self) -> f64 {
        let n = self.grid.points_per_axis();
        let stride = n.pow((self.grid.dim() - 1) as u32);
        let boundary_max = (0..stride)
            .map(|off| self.values[off].abs())
            .fold(0.0f64, f64::max);
        boundary_max / self.max_abs().max(f64::MIN_POSITIVE)
    }

    /// a·self + b·other, fields on the same grid.
    pub fn lin_comb(&self, a: f64, other: &Field, b: f64) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::input("field grids differ"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Field {
            grid: self.grid,
            values,
        })
    }
}
