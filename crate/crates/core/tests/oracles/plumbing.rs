//! Independent routes to the plumbing quantities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stratglue::arith::{q, GaussianRational, Q};

/// Length of |z| = c in the metric |dz| / (|z| (-log |z|)), the Poincare
/// metric of the half plane carried over by z = exp(2 pi i zeta). The circle
/// is traced with a non-uniform speed so the quadrature has real work to do.
pub fn horocycle_integral(c: f64) -> f64 {
    use std::f64::consts::PI;
    let n = 4000;
    let h = 1.0 / n as f64;
    // trace z / c, which keeps tiny radii out of the finite differences;
    // |dz| / |z| is scale free and log |z| = log c + log |z / c|
    let point = |u: f64| {
        let theta = 2.0 * PI * u + 0.3 * (2.0 * PI * u).sin();
        (theta.cos(), theta.sin())
    };
    let density = |u: f64| {
        let e = 1e-6;
        let (x0, y0) = point(u - e);
        let (x1, y1) = point(u + e);
        let speed = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt() / (2.0 * e);
        let (x, y) = point(u);
        let r = (x * x + y * y).sqrt();
        speed / (r * -(c.ln() + r.ln()))
    };
    // composite Simpson
    let mut sum = density(0.0) + density(1.0);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * density(k as f64 * h);
    }
    sum * h / 3.0
}

/// 50 values of c spread logarithmically over (0, e^{-2 pi}).
pub fn length_grid() -> Vec<f64> {
    use std::f64::consts::PI;
    (0..50).map(|k| (-2.0 * PI * (1.01 * 100f64.powf(k as f64 / 49.0))).exp()).collect()
}

fn small_rational(rng: &mut ChaCha8Rng, bound: i64) -> Q {
    let den = rng.gen_range(1..=bound);
    q(rng.gen_range(-den..=den), den)
}

/// (t, delta, z) with 0 < |t| < delta^2 and |t|/delta < |z| < delta, found by
/// rejection from raw random rationals.
pub fn plumbing_inputs(count: usize, seed: u64) -> Vec<(GaussianRational, Q, GaussianRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let den = rng.gen_range(2..=50);
        let delta = q(rng.gen_range(1..den), den);
        let t = GaussianRational::new(small_rational(&mut rng, 97), small_rational(&mut rng, 97));
        let z = GaussianRational::new(small_rational(&mut rng, 89), small_rational(&mut rng, 89));
        let d2 = &delta * &delta;
        let tn = t.norm_sqr();
        let zn = z.norm_sqr();
        let ok = tn > q(0, 1) && tn < &d2 * &d2 && tn < &d2 * &zn && zn < d2;
        if ok {
            out.push((t, delta, z));
        }
    }
    out
}
