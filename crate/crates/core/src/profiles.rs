//! Named analytic initial-data profiles.

use crate::error::{Error, Result};
use crate::spectral::{Field, SpatialGrid};

/// amplitude · exp(−|x|²/(2 width²)).
pub fn gaussian(grid: &SpatialGrid, amplitude: f64, width: f64) -> Field {
    let w2 = 2.0 * width * width;
    Field::from_fn(*grid, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        amplitude * (-r2 / w2).exp()
    })
}

/// Smooth positive bump supported on |x| < width, peak value `amplitude`:
/// amplitude · exp(1 − 1/(1 − (|x|/width)²)).
pub fn bump(grid: &SpatialGrid, amplitude: f64, width: f64) -> Field {
    Field::from_fn(*grid, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum::<f64>() / (width * width);
        if r2 < 1.0 {
            amplitude * (1.0 - 1.0 / (1.0 - r2)).exp()
        } else {
            0.0
        }
    })
}

/// A single lattice cosine along the first axis: amplitude · cos(πk x₁/L).
pub fn cosine_mode(grid: &SpatialGrid, amplitude: f64, k: i64) -> Result<Field> {
    let n = grid.points_per_axis() as i64;
    if k.abs() >= n / 2 {
        return Err(Error::input(format!(
            "mode index {k} outside the lattice range ±{}",
            n / 2 - 1
        )));
    }
    let xi = std::f64::consts::PI * k as f64 / grid.half_width();
    Ok(Field::from_fn(*grid, |x| amplitude * (xi * x[0]).cos()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_is_compactly_supported_with_unit_peak() {
        let grid = SpatialGrid::new(1, 256, 10.0).unwrap();
        let f = bump(&grid, 2.0, 3.0);
        assert!((f.max_abs() - 2.0).abs() < 1e-12);
        for (idx, v) in f.values.iter().enumerate() {
            let x = grid.point(idx)[0];
            if x.abs() >= 3.0 {
                assert_eq!(*v, 0.0, "support leak at {x}");
            }
        }
        assert!(f.values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn mode_profile_rejects_off_lattice() {
        let grid = SpatialGrid::new(1, 32, 5.0).unwrap();
        assert!(cosine_mode(&grid, 1.0, 16).is_err());
        assert!(cosine_mode(&grid, 1.0, 3).is_ok());
    }
}
