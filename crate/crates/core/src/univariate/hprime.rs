//! The `H'(theta, nu)` family on `(-1, 1)`.
//!
//! Density
//! `(1 - theta^2) (1 - x^2)^{nu - 1/2} / [B(nu + 1/2, 1/2) (1 - 2 theta x + theta^2)^{nu + 1}]`.
//! It is the law of the projection `mu'X` of an exit point onto the
//! direction of the pole when `nu = (d - 2)/2`, and of `U'QV` for the
//! bivariate sphere model.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math::special::{inv_reg_inc_beta, ln_beta};
use crate::math::{find_root, golden_section_min, quad_1d, RngStream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPrimeParams {
    theta: f64,
    nu: f64,
}

impl HPrimeParams {
    pub fn new(theta: f64, nu: f64) -> Result<Self> {
        if !(theta.abs() < 1.0) {
            return Err(Error::domain(format!("H' needs -1 < theta < 1, got {theta}")));
        }
        if !(nu > -0.5) || !nu.is_finite() {
            return Err(Error::domain(format!("H' needs nu > -1/2, got {nu}")));
        }
        Ok(Self { theta, nu })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Expected fraction of proposals accepted by [`hprime_sample`]:
    /// `(1 - |theta|)^{2(nu+1)} / (1 - theta^2)`.
    pub fn acceptance_rate(&self) -> f64 {
        let t = self.theta.abs();
        (1.0 - t).powf(2.0 * (self.nu + 1.0)) / (1.0 - t * t)
    }
}

pub fn hprime_log_density(x: f64, p: &HPrimeParams) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!("H' support is [-1, 1], got {x}")));
    }
    let (t, nu) = (p.theta, p.nu);
    let one_minus_x2 = (1.0 - x) * (1.0 + x);
    let kernel = if one_minus_x2 == 0.0 {
        if nu > 0.5 {
            f64::NEG_INFINITY
        } else if nu == 0.5 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (nu - 0.5) * one_minus_x2.ln()
    };
    Ok((1.0 - t * t).ln() + kernel - ln_beta(nu + 0.5, 0.5) - (nu + 1.0) * (1.0 - 2.0 * t * x + t * t).ln())
}

/// Density of `H'(theta, nu)` at `x`.
pub fn hprime_density(x: f64, p: &HPrimeParams) -> Result<f64> {
    hprime_log_density(x, p).map(f64::exp)
}

/// Distribution function, by adaptive quadrature in `x = cos(phi)` (which
/// removes the endpoint singularity of the density for `nu < 1/2`).
pub fn hprime_cdf(x: f64, p: &HPrimeParams) -> Result<f64> {
    if x <= -1.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(1.0);
    }
    let (t, nu) = (p.theta, p.nu);
    let log_c = (1.0 - t * t).ln() - ln_beta(nu + 0.5, 0.5);
    let integrand = |phi: f64| {
        let c = phi.cos();
        let s = phi.sin();
        let s_pow = if s > 0.0 {
            (2.0 * nu) * s.ln()
        } else if nu == 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        };
        (log_c + s_pow - (nu + 1.0) * (1.0 - 2.0 * t * c + t * t).ln()).exp()
    };
    let r = quad_1d(integrand, x.acos(), PI, 1e-13)?;
    Ok(r.value.clamp(0.0, 1.0))
}

/// Draw from the symmetric `theta = 0` member: `(1 - x^2)^{nu - 1/2}`.
fn symmetric_draw(nu: f64, rng: &mut RngStream) -> f64 {
    // 2 nu + 2 integral: first coordinate of a uniform point on S^{m-1}
    let m = 2.0 * nu + 2.0;
    if (m - m.round()).abs() < 1e-12 && m.round() >= 2.0 {
        let m = m.round() as usize;
        if m == 2 {
            return (2.0 * PI * rng.uniform()).cos();
        }
        let first = rng.gaussian();
        let rest: f64 = (1..m).map(|_| rng.gaussian().powi(2)).sum();
        return first / (first * first + rest).sqrt();
    }
    let a = nu + 0.5;
    let u = rng.uniform();
    let b = inv_reg_inc_beta(u, a, a).unwrap_or(0.5);
    2.0 * b - 1.0
}

/// Exact draw by rejection from the `theta = 0` member of the family. See
/// [`HPrimeParams::acceptance_rate`] for the expected cost.
pub fn hprime_sample(p: &HPrimeParams, rng: &mut RngStream) -> f64 {
    let (t, nu) = (p.theta, p.nu);
    if t == 0.0 {
        return symmetric_draw(nu, rng);
    }
    let peak = (1.0 - t.abs()).powi(2);
    loop {
        let x = symmetric_draw(nu, rng);
        let ratio = (peak / (1.0 - 2.0 * t * x + t * t)).powf(nu + 1.0);
        if rng.uniform() < ratio {
            return x;
        }
    }
}

/// Result of a one-parameter likelihood maximization on a closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedMle {
    pub estimate: f64,
    pub loglik: f64,
    /// Score at the estimate.
    pub gradient: f64,
    /// True when the maximum sits on an end of the search interval.
    pub at_boundary: bool,
}

/// Maximum likelihood for `theta` with `nu` known, over `[lo, hi]` inside
/// `(-1, 1)`.
///
/// `l(theta) = n ln(1 - theta^2) - (nu + 1) sum ln(1 - 2 theta x_j + theta^2)`,
/// located by golden section and refined on the score.
pub fn hprime_mle(xs: &[f64], nu: f64, lo: f64, hi: f64) -> Result<BoundedMle> {
    if xs.is_empty() {
        return Err(Error::domain("H' MLE needs at least one observation"));
    }
    if !(lo < hi && lo > -1.0 && hi < 1.0) {
        return Err(Error::domain(format!("invalid search interval [{lo}, {hi}]")));
    }
    if xs.iter().any(|x| !(x.abs() <= 1.0)) {
        return Err(Error::domain("H' observations must lie in [-1, 1]"));
    }
    let n = xs.len() as f64;
    let loglik =
        |t: f64| n * (1.0 - t * t).ln() - (nu + 1.0) * xs.iter().map(|x| (1.0 - 2.0 * t * x + t * t).ln()).sum::<f64>();
    let score = |t: f64| {
        -2.0 * n * t / (1.0 - t * t)
            + 2.0 * (nu + 1.0) * xs.iter().map(|x| (x - t) / (1.0 - 2.0 * t * x + t * t)).sum::<f64>()
    };
    let (mut t, _) = golden_section_min(|t| -loglik(t), lo, hi, 1e-7);
    let width = 1e-5;
    let (a, b) = ((t - width).max(lo), (t + width).min(hi));
    let (sa, sb) = (score(a), score(b));
    if sa > 0.0 && sb < 0.0 {
        t = find_root(score, a, b, 1e-15)?;
    }
    let mut at_boundary = false;
    if t - lo < 1e-6 && score(lo) <= 0.0 {
        t = lo;
        at_boundary = true;
    } else if hi - t < 1e-6 && score(hi) >= 0.0 {
        t = hi;
        at_boundary = true;
    }
    Ok(BoundedMle { estimate: t, loglik: loglik(t), gradient: score(t), at_boundary })
}
