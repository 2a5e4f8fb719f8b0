//! FFT plumbing between periodic-box fields and their continuum-normalized
//! spectra.
//!
//! The box is [−L, L)ⁿ with N points per axis, x_j = −L + 2Lj/N and lattice
//! frequencies ξ_k = πk/L, k ∈ [−N/2, N/2). With the convention
//! û(ξ) = ∫ u e^{−iξx} dx and u(x) = (2π)^{−n} ∫ û e^{iξx} dξ, the grid
//! phases reduce to an ordinary DFT with a (−1)^k flip per axis:
//! e^{−iξ_k x_j} = (−1)^k e^{−2πi jk/N}.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::SpatialGrid;

/// In-place complex FFT along every axis of a row-major N^dim cube.
fn fft_nd(data: &mut [Complex64], dim: usize, n: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let total = data.len();
    let mut line = vec![Complex64::default(); n];
    for ax in 0..dim {
        let stride = n.pow((dim - 1 - ax) as u32);
        let block = stride * n;
        for base0 in (0..total).step_by(block) {
            for off in 0..stride {
                let base = base0 + off;
                for i in 0..n {
                    line[i] = data[base + i * stride];
                }
                fft.process(&mut line);
                for i in 0..n {
                    data[base + i * stride] = line[i];
                }
            }
        }
    }
}

/// Parity of the sum of per-axis indices of flat index `idx`.
fn index_parity(mut idx: usize, dim: usize, n: usize) -> bool {
    let mut parity = 0usize;
    for _ in 0..dim {
        parity += idx % n;
        idx /= n;
    }
    parity % 2 == 1
}

/// Continuum spectrum → real field: u(x_j) = (2L)^{−n} Σ_k m̂(ξ_k) e^{iξ_k x_j}.
/// Returns the values and the largest |imaginary part| seen (a conjugate
/// symmetry diagnostic; it should be at rounding level).
pub(crate) fn spectrum_to_field(grid: &SpatialGrid, spectrum: &[Complex64]) -> (Vec<f64>, f64) {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let scale = (2.0 * grid.half_width()).powi(dim as i32).recip();
    let mut data: Vec<Complex64> = spectrum
        .iter()
        .enumerate()
        .map(|(idx, &v)| if index_parity(idx, dim, n) { -v } else { v })
        .collect();
    fft_nd(&mut data, dim, n, true);
    let mut max_im = 0.0f64;
    let values = data
        .iter()
        .map(|c| {
            max_im = max_im.max(c.im.abs() * scale);
            c.re * scale
        })
        .collect();
    (values, max_im)
}

/// Real field → continuum spectrum: û(ξ_k) = cellvol Σ_j u(x_j) e^{−iξ_k x_j}.
pub(crate) fn field_to_spectrum(grid: &SpatialGrid, values: &[f64]) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_nd(&mut data, dim, n, false);
    let cellvol = grid.cell_volume();
    for (idx, v) in data.iter_mut().enumerate() {
        if index_parity(idx, dim, n) {
            *v = -*v;
        }
        *v *= cellvol;
    }
    data
}
