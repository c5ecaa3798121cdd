use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// e^{-2 pi}: the radius of the horodisc cut out by Im zeta = 1.
pub const CUSP_RADIUS: f64 = 0.001_867_442_731_707_988_8;

/// z = exp(2 pi i zeta) on the cylinder Im zeta >= 1.
pub fn cusp_to_disk(zeta: Complex64) -> Result<Complex64> {
    if zeta.im.is_nan() || zeta.im < 1.0 {
        return Err(Error::OutOfRange(format!("Im zeta = {} is below 1", zeta.im)));
    }
    Ok((Complex64::i() * 2.0 * PI * zeta).exp())
}

/// Hyperbolic length of the horocycle |z| = c.
pub fn horocycle_length(c: f64) -> Result<f64> {
    if !(c > 0.0 && c < CUSP_RADIUS) {
        return Err(Error::OutOfRange(format!("c = {c} is not in (0, e^-2pi)")));
    }
    Ok(-2.0 * PI / c.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_constant() {
        assert!((CUSP_RADIUS - (-2.0 * PI).exp()).abs() < 1e-18);
    }

    #[test]
    fn boundary_of_cylinder() {
        let z = cusp_to_disk(Complex64::new(0.0, 1.0)).unwrap();
        assert!((z - Complex64::new(CUSP_RADIUS, 0.0)).norm() < 1e-15);
        let shifted = cusp_to_disk(Complex64::new(1.0, 1.0)).unwrap();
        assert!((z - shifted).norm() < 1e-15);
        let deeper = cusp_to_disk(Complex64::new(0.0, 2.0)).unwrap();
        assert!((deeper.norm() - (-4.0 * PI).exp()).abs() < 1e-18);
        assert!(cusp_to_disk(Complex64::new(0.3, 0.99)).is_err());
        assert!(cusp_to_disk(Complex64::new(0.0, f64::NAN)).is_err());
    }

    #[test]
    fn lengths() {
        assert!((horocycle_length((-4.0 * PI).exp()).unwrap() - 0.5).abs() < 1e-12);
        assert!((horocycle_length((-3.0 * PI).exp()).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let mut last = 0.0;
        for k in (2..40).rev() {
            let l = horocycle_length(CUSP_RADIUS.powi(k)).unwrap();
            assert!(l > last);
            last = l;
        }
        assert!(horocycle_length(1e-300).unwrap() < 0.01);
        assert!(horocycle_length(0.0).is_err());
        assert!(horocycle_length(CUSP_RADIUS).is_err());
    }
}
