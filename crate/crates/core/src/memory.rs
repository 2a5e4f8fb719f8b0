//! Product-trapezoidal weights for memory integrals with power-law kernels.
//!
//! All the memory terms in this crate have the shape
//!
//! ```text
//! ∫₀^{t_k} (t_k − s)^γ  g(s) ds,      γ > −1,
//! ```
//!
//! on a uniform grid t_i = i·h. Approximating g by its piecewise-linear
//! interpolant and integrating the weight (t_k − s)^γ exactly per panel
//! keeps full accuracy through the weak endpoint singularity (γ ∈ (−1, 0))
//! instead of losing O(h^{γ+1}) to naive sampling. Per panel of lag
//! l = k − j (so s ∈ [t_{j}, t_{j+1}], τ = t_k − s ∈ [(l−1)h, lh]):
//!
//! ```text
//! ∫ τ^γ · hat_left  = (M1 − B·M0)/h   (weight of g at s = t_j,   lag l),
//! ∫ τ^γ · hat_right = (A·M0 − M1)/h   (weight of g at s = t_{j+1}, lag l−1),
//! ```
//!
//! with A = lh, B = (l−1)h, M0 = ∫_B^A τ^γ dτ, M1 = ∫_B^A τ^{γ+1} dτ.
//! Both weights are nonnegative, so convolution against a nonnegative g
//! stays nonnegative.

/// Per-lag hat-function weights for the kernel τ^γ.
#[derive(Debug, Clone)]
pub(crate) struct PowerPanelWeights {
    /// `left[l]` multiplies the sample at lag l (panel, l = 1..=n_lags).
    pub left: Vec<f64>,
    /// `right[l]` multiplies the sample at lag l−1 of the same panel.
    pub right: Vec<f64>,
    /// `combined[l] = left[l] + right[l+1]`: total weight of the sample at
    /// lag l when all panels 1..=k are summed, valid for 1 ≤ l ≤ k−1.
    pub combined: Vec<f64>,
}

impl PowerPanelWeights {
    /// Build weights for lags 1..=n_lags on a grid of step `h`.
    pub fn new(gamma: f64, n_lags: usize, h: f64) -> Self {
        assert!(gamma > -1.0, "power weight needs gamma > -1");
        assert!(h > 0.0);
        let g1 = gamma + 1.0;
        let g2 = gamma + 2.0;
        let mut left = vec![0.0; n_lags + 1];
        let mut right = vec![0.0; n_lags + 1];
        // powers of the panel edges: edge_p1[l] = (lh)^{γ+1}, edge_p2[l] = (lh)^{γ+2}
        let mut prev_p1 = 0.0;
        let mut prev_p2 = 0.0;
        for l in 1..=n_lags {
            let a_edge = l as f64 * h;
            let p1 = a_edge.powf(g1);
            let p2 = a_edge.powf(g2);
            let m0 = (p1 - prev_p1) / g1;
            let m1 = (p2 - prev_p2) / g2;
            let b_edge = (l - 1) as f64 * h;
            left[l] = (m1 - b_edge * m0) / h;
            right[l] = (a_edge * m0 - m1) / h;
            prev_p1 = p1;
            prev_p2 = p2;
        }
        let mut combined = vec![0.0; n_lags + 1];
        for l in 1..n_lags {
            combined[l] = left[l] + right[l + 1];
        }
        Self {
            left,
            right,
            combined,
        }
    }

    /// ∫₀^{t_k} (t_k − s)^γ g(s) ds for the piecewise-linear interpolant of
    /// `g[0..=k]`.
    pub fn convolve_at(&self, g: &[f64], k: usize) -> f64 {
        debug_assert!(k < g.len());
        if k == 0 {
            return 0.0;
        }
        let mut acc = self.right[1] * g[k];
        for l in 1..k {
            acc += self.combined[l] * g[k - l];
        }
        acc + self.left[k] * g[0]
    }
}
