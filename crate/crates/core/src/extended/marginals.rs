//! Prescribed marginals for uniform-marginal circular pairs.
//!
//! Angles `(theta_u, theta_v)` with uniform marginals are mapped to
//! `(F_U^{-1}(theta_u / 2pi), F_V^{-1}(theta_v / 2pi))`, which has marginal
//! distribution functions `F_U` and `F_V` and keeps the dependence
//! structure.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::math::find_root;
use crate::math::special::normal_cdf;
use crate::univariate::cauchy::{real_cauchy_cdf, real_cauchy_quantile, RealCauchyParams};
use crate::univariate::von_mises::{von_mises_cdf, von_mises_quantile, VonMisesParams};
use crate::univariate::wrapped_cauchy::{wrapped_cauchy_cdf, WrappedCauchyParams};

/// A continuous, strictly increasing distribution function with its inverse.
pub trait Marginal {
    fn cdf(&self, x: f64) -> f64;
    fn quantile(&self, u: f64) -> Result<f64>;
}

/// Uniform law on `[0, 2pi)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CircularUniform;

impl Marginal for CircularUniform {
    fn cdf(&self, x: f64) -> f64 {
        (x / TAU).clamp(0.0, 1.0)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        check_level(u)?;
        Ok(TAU * u)
    }
}

impl Marginal for VonMisesParams {
    fn cdf(&self, x: f64) -> f64 {
        von_mises_cdf(x, self)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        von_mises_quantile(u, self)
    }
}

impl Marginal for WrappedCauchyParams {
    fn cdf(&self, x: f64) -> f64 {
        wrapped_cauchy_cdf(x, self)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        check_level(u)?;
        if u == 0.0 || u == 1.0 {
            return Ok(TAU * u);
        }
        find_root(|t| wrapped_cauchy_cdf(t, self) - u, 0.0, TAU, 1e-13)
    }
}

impl Marginal for RealCauchyParams {
    fn cdf(&self, x: f64) -> f64 {
        real_cauchy_cdf(x, self)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        check_level(u)?;
        Ok(real_cauchy_quantile(u, self))
    }
}

/// Normal law on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normal {
    pub mean: f64,
    pub sd: f64,
}

impl Normal {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0) || !mean.is_finite() || !sd.is_finite() {
            return Err(Error::domain(format!("normal law needs finite mean and sd > 0, got ({mean}, {sd})")));
        }
        Ok(Self { mean, sd })
    }
}

impl Marginal for Normal {
    fn cdf(&self, x: f64) -> f64 {
        normal_cdf((x - self.mean) / self.sd)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        check_level(u)?;
        if u == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if u == 1.0 {
            return Ok(f64::INFINITY);
        }
        let z = find_root(|z| normal_cdf(z) - u, -40.0, 40.0, 1e-14)?;
        Ok(self.mean + self.sd * z)
    }
}

fn check_level(u: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("probability level must be in [0, 1], got {u}")));
    }
    Ok(())
}

/// Verify that a quantile function is strictly increasing on a probe grid.
pub fn check_monotone(m: &dyn Marginal) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for i in 1..100 {
        let q = m.quantile(i as f64 / 100.0)?;
        if !(q > prev) {
            return Err(Error::domain("target marginal is not strictly increasing"));
        }
        prev = q;
    }
    Ok(())
}

/// `(F_U^{-1}(theta_u / 2pi), F_V^{-1}(theta_v / 2pi))` for each pair of
/// angles in `[0, 2pi)`.
pub fn transform_marginals(
    sample: &[(f64, f64)],
    target_u: &dyn Marginal,
    target_v: &dyn Marginal,
) -> Result<Vec<(f64, f64)>> {
    check_monotone(target_u)?;
    check_monotone(target_v)?;
    sample.iter().map(|&(a, b)| Ok((target_u.quantile(level(a))?, target_v.quantile(level(b))?))).collect()
}

fn level(theta: f64) -> f64 {
    (crate::math::wrap_angle(theta) / TAU).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::RngStream;
    use crate::univariate::gof::ks_test;

    #[test]
    fn uniform_targets_leave_sample_unchanged() {
        let sample = vec![(0.1, 6.2), (3.0, 1.5), (5.5, 0.0)];
        let out = transform_marginals(&sample, &CircularUniform, &CircularUniform).unwrap();
        for (a, b) in sample.iter().zip(&out) {
            assert!((a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14);
        }
    }

    #[test]
    fn round_trip_through_forward_cdf() {
        let vm = VonMisesParams::new(1.0, 2.0).unwrap();
        let nrm = Normal::new(0.5, 2.0).unwrap();
        let sample = vec![(0.3, 1.0), (2.9, 4.4), (6.0, 5.9)];
        let out = transform_marginals(&sample, &vm, &nrm).unwrap();
        for (a, b) in sample.iter().zip(&out) {
            assert!((TAU * vm.cdf(b.0) - a.0).abs() < 1e-8);
            assert!((TAU * nrm.cdf(b.1) - a.1).abs() < 1e-8);
        }
    }

    #[test]
    fn normal_target_passes_ks() {
        let mut rng = RngStream::new(44, 0);
        let sample: Vec<(f64, f64)> = (0..5000).map(|_| (TAU * rng.uniform(), TAU * rng.uniform())).collect();
        let nrm = Normal::new(0.0, 1.0).unwrap();
        let out = transform_marginals(&sample, &CircularUniform, &nrm).unwrap();
        let xs: Vec<f64> = out.iter().map(|p| p.1).collect();
        assert!(ks_test(&xs, normal_cdf).unwrap().p_value > 0.01);
    }

    struct Folded;
    impl Marginal for Folded {
        fn cdf(&self, x: f64) -> f64 {
            x
        }
        fn quantile(&self, u: f64) -> Result<f64> {
            Ok((u - 0.5).abs())
        }
    }

    #[test]
    fn non_monotone_target_is_rejected() {
        assert!(transform_marginals(&[(1.0, 1.0)], &Folded, &CircularUniform).is_err());
    }

    #[test]
    fn wrapped_cauchy_quantile_inverts() {
        let w = WrappedCauchyParams::new(num_complex::Complex64::new(0.2, 0.5)).unwrap();
        for &u in &[0.05, 0.5, 0.93] {
            assert!((w.cdf(w.quantile(u).unwrap()) - u).abs() < 1e-12);
        }
    }
}
