use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{format_q, q_string, q_to_f64, GaussianRational, Q};
use crate::error::{Error, Result};

use super::cusp::CUSP_RADIUS;

pub const DEFAULT_DEGREE: usize = 8;

/// A metric scale on the tangent line, a radius and a chart
/// h(z) = sum_k a_k z^k truncated at some degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorocycleStructure {
    #[serde(with = "q_string")]
    pub scale: Q,
    pub delta: f64,
    /// a_0, a_1, ..., a_degree.
    pub coefficients: Vec<GaussianRational>,
}

impl HorocycleStructure {
    /// Unit scale, radius e^{-2 pi} and the identity chart.
    pub fn canonical(degree: usize) -> Self {
        let mut coefficients = vec![GaussianRational::zero(); degree.max(1) + 1];
        coefficients[1] = GaussianRational::one();
        Self { scale: Q::one(), delta: CUSP_RADIUS, coefficients }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// h(z), exact.
    pub fn apply(&self, z: &GaussianRational) -> GaussianRational {
        self.coefficients.iter().rev().fold(GaussianRational::zero(), |acc, a| &(&acc * z) + a)
    }

    pub fn with_coefficient(mut self, k: usize, a: GaussianRational) -> Self {
        if self.coefficients.len() <= k {
            self.coefficients.resize(k + 1, GaussianRational::zero());
        }
        self.coefficients[k] = a;
        self
    }
}

/// 1 - sum_{k>=2} k |a_k| delta^{k-1}; positive means h is injective on
/// the delta-disc.
pub fn certificate(coefficients: &[GaussianRational], delta: f64) -> f64 {
    let mut sum = 0.0;
    for (k, a) in coefficients.iter().enumerate().skip(2) {
        if !a.is_zero() {
            sum += k as f64 * q_to_f64(&a.norm_sqr()).sqrt() * delta.powi(k as i32 - 1);
        }
    }
    1.0 - sum
}

/// The largest radius up to `cap` passing the certificate, found by
/// bisection to 1e-12.
pub fn certified_radius(coefficients: &[GaussianRational], cap: f64) -> Option<f64> {
    if !(cap > 0.0 && cap.is_finite()) {
        return None;
    }
    if certificate(coefficients, cap) > 0.0 {
        return Some(cap);
    }
    let (mut lo, mut hi) = (0.0, cap);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if certificate(coefficients, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo > 0.0).then_some(lo)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HorocycleCheck {
    pub ok: bool,
    pub reason: Option<String>,
}

pub fn validate_horocycle(h: &HorocycleStructure) -> HorocycleCheck {
    let reason = if !h.scale.is_positive() {
        Some(format!("scale {} is not positive", format_q(&h.scale)))
    } else if !(h.delta > 0.0 && h.delta.is_finite()) {
        Some(format!("radius {} is not positive", h.delta))
    } else if h.coefficients.len() < 2 {
        Some("series has no linear term".to_string())
    } else if !h.coefficients[0].is_zero() {
        Some(format!("h(0) = {} is not 0", h.coefficients[0]))
    } else if h.coefficients[1] != GaussianRational::one() {
        Some(format!("h'(0) = {} is not 1", h.coefficients[1]))
    } else {
        let c = certificate(&h.coefficients, h.delta);
        (c <= 0.0).then(|| format!("injectivity certificate {c} fails at radius {}", h.delta))
    };
    HorocycleCheck { ok: reason.is_none(), reason }
}

/// (1 - s) h0 + s h1 coefficientwise, with the radius recertified below
/// min(delta0, delta1).
pub fn blend(h0: &HorocycleStructure, h1: &HorocycleStructure, s: &Q) -> Result<HorocycleStructure> {
    if s.is_negative() || s > &Q::one() {
        return Err(Error::OutOfRange(format!("blend parameter {} is not in [0, 1]", format_q(s))));
    }
    for h in [h0, h1] {
        if let Some(reason) = validate_horocycle(h).reason {
            return Err(Error::InvalidHorocycle(reason));
        }
    }
    let r = Q::one() - s;
    let n = h0.coefficients.len().max(h1.coefficients.len());
    let zero = GaussianRational::zero();
    let coefficients: Vec<GaussianRational> = (0..n)
        .map(|k| {
            let a = h0.coefficients.get(k).unwrap_or(&zero);
            let b = h1.coefficients.get(k).unwrap_or(&zero);
            &a.scale(&r) + &b.scale(s)
        })
        .collect();
    let cap = h0.delta.min(h1.delta);
    let delta = certified_radius(&coefficients, cap).ok_or_else(|| {
        Error::NoCertifiedRadius(format!("blend at s = {} fails the certificate below {cap}", format_q(s)))
    })?;
    let scale = &h0.scale * &r + &h1.scale * s;
    if scale.is_zero() {
        return Err(Error::InvalidHorocycle("blended scale vanishes".into()));
    }
    Ok(HorocycleStructure { scale, delta, coefficients })
}
