//! Bivariate angles with von Mises conditionals:
//! `f(t_u, t_v) = exp{(1, cos t_u, sin t_u) M (1, cos t_v, sin t_v)'} / N(M)`
//! with `m_11 = 0` and the normalizer `N(M)` computed numerically.

use nalgebra::Matrix3;
use std::f64::consts::TAU;

use super::fit::{circular_mean, inverse_a1, multi_start, FitResult, Fitted};
use crate::error::{Error, Result};
use crate::math::quad::quad_periodic;
use crate::math::special::log_bessel_i0;

pub const SENGUPTA_K: usize = 8;

/// Positions of the eight free entries, row-major after `m_11`.
const FREE: [(usize, usize); 8] = [(0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)];

#[derive(Debug, Clone, PartialEq)]
pub struct SenGuptaParams {
    m: Matrix3<f64>,
    log_norm: f64,
}

impl SenGuptaParams {
    /// `m_11` is ignored (set to zero).
    pub fn new(mut m: Matrix3<f64>) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("SenGupta matrix entries must be finite"));
        }
        m[(0, 0)] = 0.0;
        let log_norm = log_normalizer(&m);
        Ok(Self { m, log_norm })
    }

    /// From the eight free entries `(m12, m13, m21, m22, m23, m31, m32, m33)`.
    pub fn from_free(x: &[f64]) -> Result<Self> {
        if x.len() != 8 {
            return Err(Error::domain("expected eight free entries"));
        }
        let mut m = Matrix3::zeros();
        for (v, &(i, j)) in x.iter().zip(FREE.iter()) {
            m[(i, j)] = *v;
        }
        Self::new(m)
    }

    pub fn free(&self) -> Vec<f64> {
        FREE.iter().map(|&(i, j)| self.m[(i, j)]).collect()
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// `ln N(M)`.
    pub fn log_normalizer(&self) -> f64 {
        self.log_norm
    }
}

fn exponent(m: &Matrix3<f64>, tu: f64, tv: f64) -> f64 {
    let (su, cu) = tu.sin_cos();
    let (sv, cv) = tv.sin_cos();
    let a = [1.0, cu, su];
    let b = [1.0, cv, sv];
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += a[i] * m[(i, j)] * b[j];
        }
    }
    s
}

/// `ln N(M)`, reducing the inner integral over `t_v` to a Bessel function:
/// `N = 2pi int exp{A(t)} I_0(sqrt(B(t)^2 + C(t)^2)) dt` with
/// `A, B, C` the three columns of `(1, cos t, sin t) M`.
fn log_normalizer(m: &Matrix3<f64>) -> f64 {
    let row = |t: f64| {
        let (s, c) = t.sin_cos();
        let col = |j: usize| m[(0, j)] + c * m[(1, j)] + s * m[(2, j)];
        (col(0), col(1), col(2))
    };
    let log_terms = |t: f64| {
        let (a, b, c) = row(t);
        a + log_bessel_i0((b * b + c * c).sqrt()).unwrap_or(f64::INFINITY)
    };
    // scale by the largest log term to avoid overflow
    let shift = (0..256).map(|i| log_terms(i as f64 * TAU / 256.0)).fold(f64::NEG_INFINITY, f64::max);
    let integral = quad_periodic(|t| (log_terms(t) - shift).exp(), 64, 1e-14);
    TAU.ln() + shift + integral.ln()
}

pub fn sengupta_log_density(theta_u: f64, theta_v: f64, p: &SenGuptaParams) -> f64 {
    exponent(&p.m, theta_u, theta_v) - p.log_norm
}

/// Log density of `theta_u` alone:
/// `ln[2pi exp{A(t)} I_0(sqrt(B(t)^2 + C(t)^2)) / N(M)]`.
pub fn sengupta_marginal_u_log_density(theta_u: f64, p: &SenGuptaParams) -> f64 {
    let (s, c) = theta_u.sin_cos();
    let col = |j: usize| p.m[(0, j)] + c * p.m[(1, j)] + s * p.m[(2, j)];
    let (a, b, cc) = (col(0), col(1), col(2));
    TAU.ln() + a + log_bessel_i0((b * b + cc * cc).sqrt()).unwrap_or(f64::INFINITY) - p.log_norm
}

/// Log density of `theta_v` alone (the `theta_u` marginal of the transposed
/// matrix).
pub fn sengupta_marginal_v_log_density(theta_v: f64, p: &SenGuptaParams) -> f64 {
    let t = SenGuptaParams { m: p.m.transpose(), log_norm: p.log_norm };
    sengupta_marginal_u_log_density(theta_v, &t)
}

/// Starting values from independent von Mises fits to the two margins.
pub fn sengupta_initial(sample: &[(f64, f64)]) -> Result<SenGuptaParams> {
    let (mu1, r1) = circular_mean(sample.iter().map(|s| s.0));
    let (mu2, r2) = circular_mean(sample.iter().map(|s| s.1));
    let (k1, k2) = (inverse_a1(r1), inverse_a1(r2));
    let mut m = Matrix3::zeros();
    m[(1, 0)] = k1 * mu1.cos();
    m[(2, 0)] = k1 * mu1.sin();
    m[(0, 1)] = k2 * mu2.cos();
    m[(0, 2)] = k2 * mu2.sin();
    SenGuptaParams::new(m)
}

/// Maximum likelihood fit (`k = 8`) over the free entries.
pub fn sengupta_fit(sample: &[(f64, f64)], init: Option<&SenGuptaParams>) -> Result<Fitted<SenGuptaParams>> {
    if sample.len() < 10 {
        return Err(Error::domain("fitting needs at least 10 observations"));
    }
    let init = match init {
        Some(p) => p.clone(),
        None => sengupta_initial(sample)?,
    };
    let loglik = |x: &[f64]| match SenGuptaParams::from_free(x) {
        Ok(p) => sample.iter().map(|&(a, b)| sengupta_log_density(a, b, &p)).sum(),
        Err(_) => f64::NEG_INFINITY,
    };
    let out = multi_start(loglik, &init.free(), 0.3)?;
    let params = SenGuptaParams::from_free(&out.x)?;
    let names = ["m12", "m13", "m21", "m22", "m23", "m31", "m32", "m33"];
    let mut result = FitResult::from_loglik("sengupta", out.loglik, SENGUPTA_K, sample.len());
    result.params = names.iter().map(|s| s.to_string()).zip(params.free()).collect();
    result.converged = out.converged;
    result.iterations = out.iterations;
    result.init_loglik = out.init_loglik;
    Ok(Fitted { params, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{quad_torus_2d, RngStream};
    use std::f64::consts::PI;

    #[test]
    fn zero_matrix_is_uniform() {
        let p = SenGuptaParams::new(Matrix3::zeros()).unwrap();
        assert!((sengupta_log_density(1.0, 2.0, &p).exp() - 1.0 / (4.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn normalizer_matches_torus_quadrature() {
        let mut rng = RngStream::new(31, 0);
        for _ in 0..5 {
            let x: Vec<f64> = (0..8).map(|_| 2.0 * rng.uniform() - 1.0).collect();
            let p = SenGuptaParams::from_free(&x).unwrap();
            let direct = quad_torus_2d(|a, b| exponent(p.matrix(), a, b).exp(), 128);
            assert!((p.log_normalizer() - direct.ln()).abs() < 1e-9);
            let total = quad_torus_2d(|a, b| sengupta_log_density(a, b, &p).exp(), 128);
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn marginals_integrate_the_joint() {
        let p = SenGuptaParams::from_free(&[0.4, -0.3, 1.1, 0.5, -0.2, 0.3, 0.7, -0.6]).unwrap();
        let n = 256;
        for &t in &[0.3, 2.0, 5.5] {
            let h = TAU / n as f64;
            let fu: f64 = (0..n).map(|k| sengupta_log_density(t, k as f64 * h, &p).exp()).sum::<f64>() * h;
            let fv: f64 = (0..n).map(|k| sengupta_log_density(k as f64 * h, t, &p).exp()).sum::<f64>() * h;
            assert!((fu - sengupta_marginal_u_log_density(t, &p).exp()).abs() < 1e-12);
            assert!((fv - sengupta_marginal_v_log_density(t, &p).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn m11_is_absorbed() {
        let mut m = Matrix3::zeros();
        m[(0, 0)] = 5.0;
        m[(1, 1)] = 0.5;
        let p = SenGuptaParams::new(m).unwrap();
        assert_eq!(p.matrix()[(0, 0)], 0.0);
    }
}
