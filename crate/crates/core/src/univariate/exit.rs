//! Exit (harmonic-measure) distribution on `S^{d-1}` for Brownian motion
//! started at a pole `eta` inside the unit ball.

use nalgebra::DVector;

use super::hprime::{hprime_sample, HPrimeParams};
use super::sphere::{ln_sphere_area, uniform_sphere_sample, UnitVector};
use crate::error::{Error, Result};
use crate::math::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct ExitParams {
    eta: DVector<f64>,
}

impl ExitParams {
    pub fn new(eta: DVector<f64>) -> Result<Self> {
        if eta.len() < 2 {
            return Err(Error::domain("exit distribution needs d >= 2"));
        }
        let r = eta.norm();
        if !(r < 1.0) {
            return Err(Error::domain(format!("exit pole must satisfy |eta| < 1, got {r}")));
        }
        Ok(Self { eta })
    }

    pub fn from_slice(eta: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(eta))
    }

    pub fn eta(&self) -> &DVector<f64> {
        &self.eta
    }

    pub fn dim(&self) -> usize {
        self.eta.len()
    }
}

/// `ln f(x) = -ln A_{d-1} + ln(1 - |eta|^2) - d ln|x - eta|`.
pub fn exit_log_density(x: &UnitVector, p: &ExitParams) -> Result<f64> {
    let d = p.dim();
    if x.dim() != d {
        return Err(Error::domain(format!("point has dimension {}, pole has {d}", x.dim())));
    }
    let r2 = p.eta.norm_squared();
    // |x - eta|^2 = 1 - 2 x'eta + |eta|^2 on the sphere
    let dist2 = 1.0 - 2.0 * x.coords().dot(&p.eta) + r2;
    Ok(-ln_sphere_area(d) + (1.0 - r2).ln() - 0.5 * d as f64 * dist2.ln())
}

/// Density with respect to surface measure on `S^{d-1}`.
pub fn exit_density(x: &UnitVector, p: &ExitParams) -> Result<f64> {
    exit_log_density(x, p).map(f64::exp)
}

/// Draw `X = W mu + sqrt(1 - W^2) t` with `mu = eta/|eta|`,
/// `W ~ H'(|eta|, (d-2)/2)` and `t` uniform on the unit sphere orthogonal
/// to `mu`.
pub fn exit_sample(p: &ExitParams, rng: &mut RngStream) -> UnitVector {
    let d = p.dim();
    let r = p.eta.norm();
    if r == 0.0 {
        return uniform_sphere_sample(d, rng).expect("d >= 2 checked at construction");
    }
    let mu = &p.eta / r;
    let h = HPrimeParams::new(r, (d as f64 - 2.0) / 2.0).expect("0 < r < 1");
    let w = hprime_sample(&h, rng);
    let t = tangent_direction(&mu, rng);
    let x = &mu * w + t * (1.0 - w * w).max(0.0).sqrt();
    UnitVector::normalize(x).expect("non-zero combination of orthonormal vectors")
}

/// Uniform unit vector orthogonal to the unit vector `mu`.
pub(crate) fn tangent_direction(mu: &DVector<f64>, rng: &mut RngStream) -> DVector<f64> {
    loop {
        let g = DVector::from_fn(mu.len(), |_, _| rng.gaussian());
        let t = &g - mu * mu.dot(&g);
        let n = t.norm();
        if n > 1e-12 {
            return t / n;
        }
    }
}
