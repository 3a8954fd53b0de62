//! A common interface over the models for pairs of angles, used for
//! goodness-of-fit reporting.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use super::mobius_marginal::{mobius_marginal_log_density, MobiusMarginalParams};
use super::sengupta::{
    sengupta_log_density, sengupta_marginal_u_log_density, sengupta_marginal_v_log_density, SenGuptaParams,
};
use super::shieh_johnson::{shieh_johnson_log_density, ShiehJohnsonParams};
use super::vm_copula::{vm_copula_log_density, VMCopulaParams};
use crate::bc::{bc_log_density, BCParams};
use crate::error::{Error, Result};
use crate::math::{quad_1d, quad_torus_2d, wrap_angle};
use crate::univariate::gof::{chi_square_test, ks_test, ChiSquareResult, KsResult};
use crate::univariate::von_mises::von_mises_cdf;
use crate::univariate::wrapped_cauchy::{wrapped_cauchy_cdf, WrappedCauchyParams};

#[derive(Debug, Clone, PartialEq)]
pub enum AnglePairModel {
    Bc(BCParams),
    MobiusMarginal(MobiusMarginalParams),
    VmCopula(VMCopulaParams),
    SenGupta(SenGuptaParams),
    ShiehJohnson(ShiehJohnsonParams),
}

impl AnglePairModel {
    pub fn name(&self) -> String {
        match self {
            AnglePairModel::Bc(p) => format!("bc{}", p.sign()),
            AnglePairModel::MobiusMarginal(_) => "mobius-marginal".into(),
            AnglePairModel::VmCopula(_) => "vm-copula".into(),
            AnglePairModel::SenGupta(_) => "sengupta".into(),
            AnglePairModel::ShiehJohnson(_) => "shieh-johnson".into(),
        }
    }

    pub fn log_density(&self, theta_u: f64, theta_v: f64) -> f64 {
        let z = |t: f64| Complex64::from_polar(1.0, t);
        match self {
            AnglePairModel::Bc(p) => bc_log_density(z(theta_u), z(theta_v), p),
            AnglePairModel::MobiusMarginal(p) => mobius_marginal_log_density(z(theta_u), z(theta_v), p),
            AnglePairModel::VmCopula(p) => vm_copula_log_density(theta_u, theta_v, p),
            AnglePairModel::SenGupta(p) => sengupta_log_density(theta_u, theta_v, p),
            AnglePairModel::ShiehJohnson(p) => shieh_johnson_log_density(theta_u, theta_v, p),
        }
    }

    /// Marginal distribution function of `theta_u` (`first = true`) or
    /// `theta_v` on `[0, 2pi)`.
    pub fn marginal_cdf(&self, theta: f64, first: bool) -> Result<f64> {
        let t = wrap_angle(theta);
        Ok(match self {
            AnglePairModel::Bc(_) => t / TAU,
            AnglePairModel::MobiusMarginal(p) => {
                let alpha = if first { p.alpha1() } else { p.alpha2() };
                wrapped_cauchy_cdf(t, &WrappedCauchyParams::new(alpha)?)
            }
            AnglePairModel::VmCopula(p) => von_mises_cdf(t, if first { p.marginal_u() } else { p.marginal_v() }),
            AnglePairModel::ShiehJohnson(p) => von_mises_cdf(t, if first { p.marginal_u() } else { p.marginal_v() }),
            AnglePairModel::SenGupta(p) => {
                let f = |x: f64| {
                    if first {
                        sengupta_marginal_u_log_density(x, p).exp()
                    } else {
                        sengupta_marginal_v_log_density(x, p).exp()
                    }
                };
                quad_1d(f, 0.0, t, 1e-11)?.value.clamp(0.0, 1.0)
            }
        })
    }

    /// Torus integral of the density (a numerical self-check; should be 1).
    pub fn normalization(&self) -> f64 {
        quad_torus_2d(|a, b| self.log_density(a, b).exp(), 64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub model: String,
    pub n: usize,
    pub ks_u: KsResult,
    pub ks_v: KsResult,
    /// Pearson test on a square grid of cells; absent when the sample is
    /// too small to fill enough cells.
    pub chi2: Option<ChiSquareResult>,
    pub grid_bins: usize,
    pub normalization: f64,
}

/// Marginal Kolmogorov–Smirnov tests and a joint histogram test.
pub fn angle_pair_gof(model: &AnglePairModel, rows: &[(f64, f64)]) -> Result<GofReport> {
    if rows.len() < 2 {
        return Err(Error::domain("goodness of fit needs at least two observations"));
    }
    let us: Vec<f64> = rows.iter().map(|r| wrap_angle(r.0)).collect();
    let vs: Vec<f64> = rows.iter().map(|r| wrap_angle(r.1)).collect();
    let fu = us.iter().map(|&t| model.marginal_cdf(t, true)).collect::<Result<Vec<_>>>()?;
    let fv = vs.iter().map(|&t| model.marginal_cdf(t, false)).collect::<Result<Vec<_>>>()?;
    let ks_u = ks_test(&fu, |x| x)?;
    let ks_v = ks_test(&fv, |x| x)?;

    let n = rows.len();
    let bins = ((n as f64 / 10.0).sqrt().floor() as usize).clamp(2, 12);
    let w = TAU / bins as f64;
    let sub = 8;
    let h = w / sub as f64;
    let mut expected = vec![0.0; bins * bins];
    for i in 0..bins {
        for j in 0..bins {
            let mut acc = 0.0;
            for a in 0..sub {
                for b in 0..sub {
                    let tu = i as f64 * w + (a as f64 + 0.5) * h;
                    let tv = j as f64 * w + (b as f64 + 0.5) * h;
                    acc += model.log_density(tu, tv).exp();
                }
            }
            expected[i * bins + j] = acc * h * h * n as f64;
        }
    }
    let mut observed = vec![0.0; bins * bins];
    for (u, v) in us.iter().zip(&vs) {
        let i = ((u / w) as usize).min(bins - 1);
        let j = ((v / w) as usize).min(bins - 1);
        observed[i * bins + j] += 1.0;
    }
    let chi2 = chi_square_test(&observed, &expected, 0).ok();
    Ok(GofReport { model: model.name(), n, ks_u, ks_v, chi2, grid_bins: bins, normalization: model.normalization() })
}
