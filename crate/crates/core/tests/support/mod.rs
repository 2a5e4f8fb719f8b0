//! Shared test oracles, independent of the implementation paths they check.

use fracwave::quad;

/// High-accuracy quadrature of ∫₀ᵗ (t−s)^{−a} (1+s)^{−b} ds, a < 1.
///
/// The substitution w = (t−s)^{1−a} removes the endpoint singularity:
/// the integral becomes (1−a)^{−1} ∫₀^{t^{1−a}} (1 + t − w^{1/(1−a)})^{−b} dw
/// with a bounded, piecewise-smooth integrand.
pub fn lemma_integral_quadrature(a: f64, b: f64, t: f64) -> f64 {
    assert!(a < 1.0);
    if t == 0.0 {
        return 0.0;
    }
    let q = 1.0 / (1.0 - a);
    let upper = t.powf(1.0 - a);
    let f = move |w: f64| {
        let v = w.max(0.0).powf(q); // v = t − s
        (1.0 + t - v).powf(-b)
    };
    let r = quad::integrate(f, 0.0, upper, 1e-10, 1e-14, 2000).expect("oracle quadrature");
    r.value * q
}

/// High-accuracy quadrature of ∫₀ᵗ min{(t−s)^{−a0}(1+s)^{−b0},
/// (t−s)^{−a1}(1+s)^{−b1}} ds with a1 < 1 (a0 unrestricted: near s = t the
/// min falls back to the integrable a1 envelope).
pub fn lemma_extended_quadrature(a0: f64, b0: f64, a1: f64, b1: f64, t: f64) -> f64 {
    assert!(a1 < 1.0);
    if t == 0.0 {
        return 0.0;
    }
    let q = 1.0 / (1.0 - a1);
    let upper = t.powf(1.0 - a1);
    let f = move |w: f64| {
        let v = w.max(1e-300).powf(q); // v = t − s
        let s = (t - v).max(0.0);
        let first = v.powf(a1 - a0) * (1.0 + s).powf(-b0);
        let second = (1.0 + s).powf(-b1);
        first.min(second)
    };
    let r = quad::integrate(f, 0.0, upper, 1e-9, 1e-14, 4000).expect("oracle quadrature");
    r.value * q
}

/// The frozen corpus of (a, b, t) triples for the single-envelope bound:
/// 44 seeded-random samples plus 6 fixed b = 1 cases.
pub fn bound_corpus() -> Vec<(f64, f64, f64)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut corpus = Vec::with_capacity(50);
    for _ in 0..44 {
        let a = rng.gen_range(-1.0..0.95);
        let b = rng.gen_range(-1.5..3.0);
        let t = rng.gen_range(0.5..50.0);
        corpus.push((a, b, t));
    }
    for &(a, t) in &[
        (0.5, 10.0),
        (0.2, 3.0),
        (-0.5, 25.0),
        (0.8, 1.0),
        (0.0, 40.0),
        (0.9, 5.0),
    ] {
        corpus.push((a, 1.0, t));
    }
    corpus
}

/// Frozen corpus for the two-envelope bound: 50 seeded tuples
/// (a0, b0, a1, b1, t) including fixed b0 = 1 entries.
pub fn bound_extended_corpus() -> Vec<(f64, f64, f64, f64, f64)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xc0ffee);
    let mut corpus = Vec::with_capacity(50);
    for _ in 0..44 {
        let a0 = rng.gen_range(-1.0..1.8);
        let b0 = rng.gen_range(-1.5..3.0);
        let a1 = rng.gen_range(-1.0..0.95);
        let b1 = rng.gen_range(-1.5..3.0);
        let t = rng.gen_range(0.5..50.0);
        corpus.push((a0, b0, a1, b1, t));
    }
    for &(a0, a1, b1, t) in &[
        (0.5, 0.3, 2.0, 10.0),
        (1.2, 0.5, 0.5, 20.0),
        (0.0, 0.8, -0.5, 5.0),
        (1.5, 0.2, 1.5, 30.0),
        (-0.3, 0.6, 0.0, 2.0),
        (0.9, 0.9, 2.5, 45.0),
    ] {
        corpus.push((a0, 1.0, a1, b1, t));
    }
    corpus
}
