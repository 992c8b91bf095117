use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::C64;

/// Largest singular value by power iteration on `M^H M`, started from a
/// seeded random vector. The estimate is a lower bound that converges from
/// below; [`frobenius_norm`] gives the matching upper bound.
pub fn spectral_norm_estimate(m: &DMatrix<C64>, iterations: usize, seed: u64) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DVector::from_fn(m.ncols(), |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let norm = v.norm();
    if norm == 0.0 {
        return 0.0;
    }
    v /= C64::new(norm, 0.0);
    let mut best = 0.0f64;
    for _ in 0..iterations.max(1) {
        let w = m * &v;
        best = best.max(w.norm());
        let x = m.ad_mul(&w);
        let xn = x.norm();
        if xn == 0.0 || !xn.is_finite() {
            break;
        }
        v = x / C64::new(xn, 0.0);
    }
    best.max((m * &v).norm())
}

pub fn frobenius_norm(m: &DMatrix<C64>) -> f64 {
    m.norm()
}
