//! Cauchy law on the real line, parameterized by a point `phi` of the upper
//! half-plane: location `Re(phi)`, scale `Im(phi)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealCauchyParams {
    phi: Complex64,
}

impl RealCauchyParams {
    pub fn new(phi: Complex64) -> Result<Self> {
        if !(phi.im > 0.0) || !phi.re.is_finite() || !phi.im.is_finite() {
            return Err(Error::domain(format!("Cauchy parameter needs Im(phi) > 0, got {phi}")));
        }
        Ok(Self { phi })
    }

    /// `C(i)`.
    pub fn standard() -> Self {
        Self { phi: Complex64::new(0.0, 1.0) }
    }

    pub fn location(&self) -> f64 {
        self.phi.re
    }

    pub fn scale(&self) -> f64 {
        self.phi.im
    }

    pub fn phi(&self) -> Complex64 {
        self.phi
    }
}

pub fn real_cauchy_density(x: f64, p: &RealCauchyParams) -> f64 {
    let (m, s) = (p.location(), p.scale());
    s / (PI * (s * s + (x - m) * (x - m)))
}

pub fn real_cauchy_cdf(x: f64, p: &RealCauchyParams) -> f64 {
    0.5 + ((x - p.location()) / p.scale()).atan() / PI
}

pub fn real_cauchy_quantile(u: f64, p: &RealCauchyParams) -> f64 {
    p.location() + p.scale() * (PI * (u - 0.5)).tan()
}

pub fn real_cauchy_sample(p: &RealCauchyParams, rng: &mut RngStream) -> f64 {
    real_cauchy_quantile(rng.uniform(), p)
}

/// Cayley map `i (1 - z) / (1 + z)` from the unit circle to the real line.
pub fn cayley(z: Complex64) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    (i * (1.0 - z) / (1.0 + z)).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::quad_1d;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn standard_values() {
        let p = RealCauchyParams::standard();
        assert!((real_cauchy_density(0.0, &p) - 1.0 / PI).abs() < 1e-15);
        let q = RealCauchyParams::new(Complex64::new(2.5, 0.3)).unwrap();
        assert!((real_cauchy_cdf(2.5, &q) - 0.5).abs() < 1e-15);
        assert!(RealCauchyParams::new(Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn integrates_to_one() {
        let p = RealCauchyParams::new(Complex64::new(-1.0, 2.0)).unwrap();
        // x = m + s tan(t)
        let total = quad_1d(
            |t| {
                let x = -1.0 + 2.0 * t.tan();
                real_cauchy_density(x, &p) * 2.0 / t.cos().powi(2)
            },
            -FRAC_PI_2 + 1e-12,
            FRAC_PI_2 - 1e-12,
            1e-12,
        )
        .unwrap();
        assert!((total.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quantile_inverts_cdf() {
        let p = RealCauchyParams::new(Complex64::new(0.4, 1.7)).unwrap();
        for &u in &[0.01, 0.3, 0.5, 0.9] {
            assert!((real_cauchy_cdf(real_cauchy_quantile(u, &p), &p) - u).abs() < 1e-13);
        }
    }

    #[test]
    fn cayley_maps_circle_to_line() {
        assert!(cayley(Complex64::new(1.0, 0.0)).abs() < 1e-15);
        assert!((cayley(Complex64::new(0.0, 1.0)) - 1.0).abs() < 1e-15);
    }
}
