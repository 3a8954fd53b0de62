//! Bivariate angles with von Mises marginals and `BC+(psi)` dependence.
//!
//! `(Theta_U, Theta_V) = (F_1^{-1}(T_U / 2pi), F_2^{-1}(T_V / 2pi))` where
//! `(T_U, T_V)` are the angles of a `BC+(psi)` pair and `F_j` is the
//! `vM(mu_j, kappa_j)` distribution function. Density:
//! `(1 - |psi|^2) exp{kappa_1 cos(t_u - mu_1) + kappa_2 cos(t_v - mu_2)}
//!  / (4 pi^2 I_0(kappa_1) I_0(kappa_2)
//!     [1 + |psi|^2 - 2|psi| cos(2pi{F_1(t_u) - F_2(t_v)} - arg psi)])`.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::fit::{circular_mean, inverse_a1, logistic, logit, multi_start, FitResult, Fitted};
use super::marginals::transform_marginals;
use crate::bc::{bc_sample, BCParams};
use crate::error::{Error, Result};
use crate::math::{wrap_angle, RngStream};
use crate::univariate::von_mises::{von_mises_cdf, von_mises_log_density, VonMisesParams};

pub const VM_COPULA_K: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct VMCopulaParams {
    vm1: VonMisesParams,
    vm2: VonMisesParams,
    psi: Complex64,
}

impl VMCopulaParams {
    pub fn new(mu1: f64, mu2: f64, kappa1: f64, kappa2: f64, psi: Complex64) -> Result<Self> {
        if !(psi.norm() < 1.0) {
            return Err(Error::domain(format!("copula needs |psi| < 1, got {}", psi.norm())));
        }
        Ok(Self { vm1: VonMisesParams::new(mu1, kappa1)?, vm2: VonMisesParams::new(mu2, kappa2)?, psi })
    }

    pub fn marginal_u(&self) -> &VonMisesParams {
        &self.vm1
    }

    pub fn marginal_v(&self) -> &VonMisesParams {
        &self.vm2
    }

    pub fn psi(&self) -> Complex64 {
        self.psi
    }

    fn named(&self) -> Vec<(String, f64)> {
        vec![
            ("mu1".into(), self.vm1.mu()),
            ("mu2".into(), self.vm2.mu()),
            ("kappa1".into(), self.vm1.kappa()),
            ("kappa2".into(), self.vm2.kappa()),
            ("psi_abs".into(), self.psi.norm()),
            ("psi_arg".into(), wrap_angle(self.psi.arg())),
        ]
    }
}

pub fn vm_copula_log_density(theta_u: f64, theta_v: f64, p: &VMCopulaParams) -> f64 {
    let (tu, tv) = (wrap_angle(theta_u), wrap_angle(theta_v));
    let r = p.psi.norm();
    let diff = TAU * (von_mises_cdf(tu, &p.vm1) - von_mises_cdf(tv, &p.vm2));
    (1.0 - r * r).ln() + von_mises_log_density(tu, &p.vm1) + von_mises_log_density(tv, &p.vm2)
        - (1.0 + r * r - 2.0 * r * (diff - p.psi.arg()).cos()).ln()
}

pub fn vm_copula_sample(p: &VMCopulaParams, n: usize, rng: &mut RngStream) -> Result<Vec<(f64, f64)>> {
    let base = bc_sample(&BCParams::plus(p.psi)?, n, rng);
    transform_marginals(&base.angles(), &p.vm1, &p.vm2)
}

fn from_search(x: &[f64]) -> Result<VMCopulaParams> {
    VMCopulaParams::new(x[0], x[1], x[2].exp(), x[3].exp(), Complex64::from_polar(logistic(x[4]), x[5]))
}

/// Moment-based starting values: marginal mean directions and
/// concentrations, then the moment estimate of `psi` on the
/// probability-integral-transformed angles.
pub fn vm_copula_initial(sample: &[(f64, f64)]) -> Result<VMCopulaParams> {
    let (mu1, r1) = circular_mean(sample.iter().map(|s| s.0));
    let (mu2, r2) = circular_mean(sample.iter().map(|s| s.1));
    let vm1 = VonMisesParams::new(mu1, inverse_a1(r1).max(0.01))?;
    let vm2 = VonMisesParams::new(mu2, inverse_a1(r2).max(0.01))?;
    let psi: Complex64 = sample
        .iter()
        .map(|&(a, b)| {
            Complex64::from_polar(1.0, TAU * (von_mises_cdf(wrap_angle(a), &vm1) - von_mises_cdf(wrap_angle(b), &vm2)))
        })
        .sum::<Complex64>()
        / sample.len() as f64;
    let psi = if psi.norm() > 0.95 { psi * (0.95 / psi.norm()) } else { psi };
    Ok(VMCopulaParams { vm1, vm2, psi })
}

/// Maximum likelihood fit (`k = 6`) by multi-start simplex search over
/// `(mu_1, mu_2, ln kappa_1, ln kappa_2, logit |psi|, arg psi)`.
pub fn vm_copula_fit(sample: &[(f64, f64)], init: Option<&VMCopulaParams>) -> Result<Fitted<VMCopulaParams>> {
    if sample.len() < 10 {
        return Err(Error::domain("fitting needs at least 10 observations"));
    }
    let init = match init {
        Some(p) => p.clone(),
        None => vm_copula_initial(sample)?,
    };
    let x0 = vec![
        init.vm1.mu(),
        init.vm2.mu(),
        init.vm1.kappa().max(1e-3).ln(),
        init.vm2.kappa().max(1e-3).ln(),
        logit(init.psi.norm().max(0.01)),
        init.psi.arg(),
    ];
    let loglik = |x: &[f64]| match from_search(x) {
        Ok(p) => sample.iter().map(|&(a, b)| vm_copula_log_density(a, b, &p)).sum(),
        Err(_) => f64::NEG_INFINITY,
    };
    let out = multi_start(loglik, &x0, 0.3)?;
    let params = from_search(&out.x)?;
    let mut result = FitResult::from_loglik("vm-copula", out.loglik, VM_COPULA_K, sample.len());
    result.params = params.named();
    result.converged = out.converged;
    result.iterations = out.iterations;
    result.init_loglik = out.init_loglik;
    Ok(Fitted { params, result })
}
