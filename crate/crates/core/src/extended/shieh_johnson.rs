//! Bivariate angles with von Mises marginals joined through a von Mises
//! density on the difference of the probability-integral transforms:
//! `exp[kappa_1 cos(t_u - mu_1) + kappa_2 cos(t_v - mu_2)
//!      + kappa_3 cos(2pi{F_1(t_u) - F_2(t_v)} - mu_3)]
//!  / (4 pi^2 I_0(kappa_1) I_0(kappa_2) I_0(kappa_3))`.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::fit::{circular_mean, inverse_a1, multi_start, FitResult, Fitted};
use crate::error::{Error, Result};
use crate::math::special::log_bessel_i0;
use crate::math::wrap_angle;
use crate::univariate::von_mises::{von_mises_cdf, von_mises_log_density, VonMisesParams};

pub const SHIEH_JOHNSON_K: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct ShiehJohnsonParams {
    vm1: VonMisesParams,
    vm2: VonMisesParams,
    mu3: f64,
    kappa3: f64,
    log_i0_k3: f64,
}

impl ShiehJohnsonParams {
    pub fn new(mu: [f64; 3], kappa: [f64; 3]) -> Result<Self> {
        if !(kappa[2] >= 0.0) || !kappa[2].is_finite() || !mu[2].is_finite() {
            return Err(Error::domain("kappa_3 must be finite and non-negative"));
        }
        Ok(Self {
            vm1: VonMisesParams::new(mu[0], kappa[0])?,
            vm2: VonMisesParams::new(mu[1], kappa[1])?,
            mu3: wrap_angle(mu[2]),
            kappa3: kappa[2],
            log_i0_k3: log_bessel_i0(kappa[2])?,
        })
    }

    pub fn marginal_u(&self) -> &VonMisesParams {
        &self.vm1
    }

    pub fn marginal_v(&self) -> &VonMisesParams {
        &self.vm2
    }

    fn named(&self) -> Vec<(String, f64)> {
        vec![
            ("mu1".into(), self.vm1.mu()),
            ("mu2".into(), self.vm2.mu()),
            ("mu3".into(), self.mu3),
            ("kappa1".into(), self.vm1.kappa()),
            ("kappa2".into(), self.vm2.kappa()),
            ("kappa3".into(), self.kappa3),
        ]
    }
}

pub fn shieh_johnson_log_density(theta_u: f64, theta_v: f64, p: &ShiehJohnsonParams) -> f64 {
    let (tu, tv) = (wrap_angle(theta_u), wrap_angle(theta_v));
    let diff = TAU * (von_mises_cdf(tu, &p.vm1) - von_mises_cdf(tv, &p.vm2));
    von_mises_log_density(tu, &p.vm1) + von_mises_log_density(tv, &p.vm2) + p.kappa3 * (diff - p.mu3).cos()
        - p.log_i0_k3
}

fn from_search(x: &[f64]) -> Result<ShiehJohnsonParams> {
    ShiehJohnsonParams::new([x[0], x[1], x[5]], [x[2].exp(), x[3].exp(), x[4].exp()])
}

/// Maximum likelihood fit (`k = 6`) over
/// `(mu_1, mu_2, ln kappa_1, ln kappa_2, ln kappa_3, mu_3)`.
pub fn shieh_johnson_fit(
    sample: &[(f64, f64)],
    init: Option<&ShiehJohnsonParams>,
) -> Result<Fitted<ShiehJohnsonParams>> {
    if sample.len() < 10 {
        return Err(Error::domain("fitting needs at least 10 observations"));
    }
    let init = match init {
        Some(p) => p.clone(),
        None => {
            let (mu1, r1) = circular_mean(sample.iter().map(|s| s.0));
            let (mu2, r2) = circular_mean(sample.iter().map(|s| s.1));
            let vm1 = VonMisesParams::new(mu1, inverse_a1(r1).max(0.01))?;
            let vm2 = VonMisesParams::new(mu2, inverse_a1(r2).max(0.01))?;
            let m: Complex64 = sample
                .iter()
                .map(|&(a, b)| {
                    Complex64::from_polar(
                        1.0,
                        TAU * (von_mises_cdf(wrap_angle(a), &vm1) - von_mises_cdf(wrap_angle(b), &vm2)),
                    )
                })
                .sum::<Complex64>()
                / sample.len() as f64;
            ShiehJohnsonParams::new([mu1, mu2, m.arg()], [vm1.kappa(), vm2.kappa(), inverse_a1(m.norm()).max(0.01)])?
        }
    };
    let x0 = vec![
        init.vm1.mu(),
        init.vm2.mu(),
        init.vm1.kappa().max(1e-3).ln(),
        init.vm2.kappa().max(1e-3).ln(),
        init.kappa3.max(1e-3).ln(),
        init.mu3,
    ];
    let loglik = |x: &[f64]| match from_search(x) {
        Ok(p) => sample.iter().map(|&(a, b)| shieh_johnson_log_density(a, b, &p)).sum(),
        Err(_) => f64::NEG_INFINITY,
    };
    let out = multi_start(loglik, &x0, 0.3)?;
    let params = from_search(&out.x)?;
    let mut result = FitResult::from_loglik("shieh-johnson", out.loglik, SHIEH_JOHNSON_K, sample.len());
    result.params = params.named();
    result.converged = out.converged;
    result.iterations = out.iterations;
    result.init_loglik = out.init_loglik;
    Ok(Fitted { params, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::quad_torus_2d;
    use crate::univariate::von_mises::von_mises_density;

    #[test]
    fn independent_when_kappa3_is_zero() {
        let p = ShiehJohnsonParams::new([1.0, 2.0, 0.5], [1.5, 0.3, 0.0]).unwrap();
        for &(a, b) in &[(0.2, 0.4), (5.0, 3.0)] {
            let prod = von_mises_density(a, p.marginal_u()) * von_mises_density(b, p.marginal_v());
            assert!((shieh_johnson_log_density(a, b, &p).exp() - prod).abs() < 1e-13);
        }
    }

    #[test]
    fn normalized_on_torus() {
        let p = ShiehJohnsonParams::new([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]).unwrap();
        let total = quad_torus_2d(|a, b| shieh_johnson_log_density(a, b, &p).exp(), 64);
        assert!((total - 1.0).abs() < 1e-6);
    }
}
