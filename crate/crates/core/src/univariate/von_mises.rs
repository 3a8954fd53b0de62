//! Von Mises law on `[0, 2pi)`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::math::special::{bessel_ratios, log_bessel_i0};
use crate::math::{find_root, wrap_angle};

#[derive(Debug, Clone, PartialEq)]
pub struct VonMisesParams {
    mu: f64,
    kappa: f64,
    /// `I_k(kappa) / I_0(kappa)` for k = 1, 2, ...
    ratios: Vec<f64>,
    log_i0: f64,
}

impl VonMisesParams {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() || !mu.is_finite() {
            return Err(Error::domain(format!("von Mises needs finite mu and kappa >= 0, got ({mu}, {kappa})")));
        }
        Ok(Self { mu: wrap_angle(mu), kappa, ratios: bessel_ratios(kappa, 1e-17), log_i0: log_bessel_i0(kappa)? })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

pub fn von_mises_log_density(theta: f64, p: &VonMisesParams) -> f64 {
    p.kappa * (theta - p.mu).cos() - TAU.ln() - p.log_i0
}

pub fn von_mises_density(theta: f64, p: &VonMisesParams) -> f64 {
    von_mises_log_density(theta, p).exp()
}

/// `F(theta) = P(0 <= Theta <= theta)` for `theta` in `[0, 2pi]`, from the
/// Fourier series
/// `theta/2pi + (1/pi) sum_k (r_k/k) [sin k(theta - mu) + sin k mu]`
/// with `r_k = I_k(kappa)/I_0(kappa)`.
pub fn von_mises_cdf(theta: f64, p: &VonMisesParams) -> f64 {
    if theta <= 0.0 {
        return 0.0;
    }
    if theta >= TAU {
        return 1.0;
    }
    let (s1, c1) = (theta - p.mu).sin_cos();
    let (s2, c2) = p.mu.sin_cos();
    // running sin/cos of k(theta - mu) and k mu by angle addition
    let (mut sa, mut ca) = (s1, c1);
    let (mut sb, mut cb) = (s2, c2);
    let mut sum = 0.0;
    for (i, r) in p.ratios.iter().enumerate() {
        let k = (i + 1) as f64;
        sum += r / k * (sa + sb);
        (sa, ca) = (sa * c1 + ca * s1, ca * c1 - sa * s1);
        (sb, cb) = (sb * c2 + cb * s2, cb * c2 - sb * s2);
    }
    (theta / TAU + sum / PI).clamp(0.0, 1.0)
}

/// Inverse of [`von_mises_cdf`]; `u = 0` maps to 0 and `u = 1` to `2pi`.
pub fn von_mises_quantile(u: f64, p: &VonMisesParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("quantile level must be in [0, 1], got {u}")));
    }
    if p.kappa == 0.0 {
        return Ok(TAU * u);
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    if u == 1.0 {
        return Ok(TAU);
    }
    find_root(|t| von_mises_cdf(t, p) - u, 0.0, TAU, 1e-13)
}
