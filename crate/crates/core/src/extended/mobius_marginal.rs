//! Circle pairs with wrapped Cauchy marginals: a `BC+(psi)` pair pushed
//! through one Möbius map per coordinate,
//! `z -> (z + alpha_j) / (1 + conj(alpha_j) z)`.

use num_complex::Complex64;

use crate::bc::{bc_log_density, bc_sample, BCParams, CirclePairSample, DetSign};
use crate::error::{Error, Result};
use crate::math::RngStream;
use crate::univariate::wrapped_cauchy::mobius_unit;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMarginalParams {
    base: BCParams,
    alpha1: Complex64,
    alpha2: Complex64,
}

impl MobiusMarginalParams {
    pub fn new(psi: Complex64, alpha1: Complex64, alpha2: Complex64) -> Result<Self> {
        if !(alpha1.norm() < 1.0 && alpha2.norm() < 1.0) {
            return Err(Error::domain("Möbius parameters need |alpha_j| < 1"));
        }
        Ok(Self { base: BCParams::new(psi, DetSign::Plus)?, alpha1, alpha2 })
    }

    pub fn psi(&self) -> Complex64 {
        self.base.psi()
    }

    pub fn alpha1(&self) -> Complex64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> Complex64 {
        self.alpha2
    }
}

/// `ln |d g^{-1}(w) / dw| = ln (1 - |alpha|^2) - ln |1 - conj(alpha) w|^2`.
fn log_jacobian(w: Complex64, alpha: Complex64) -> f64 {
    (1.0 - alpha.norm_sqr()).ln() - (1.0 - alpha.conj() * w).norm_sqr().ln()
}

pub fn mobius_marginal_log_density(z_u: Complex64, z_v: Complex64, p: &MobiusMarginalParams) -> f64 {
    let zu0 = mobius_unit(z_u, -p.alpha1);
    let zv0 = mobius_unit(z_v, -p.alpha2);
    bc_log_density(zu0, zv0, &p.base) + log_jacobian(z_u, p.alpha1) + log_jacobian(z_v, p.alpha2)
}

pub fn mobius_marginal_sample(p: &MobiusMarginalParams, n: usize, rng: &mut RngStream) -> CirclePairSample {
    let base = bc_sample(&p.base, n, rng);
    let pairs = base.pairs().iter().map(|&(a, b)| (mobius_unit(a, p.alpha1), mobius_unit(b, p.alpha2))).collect();
    CirclePairSample::new(pairs).expect("Möbius maps keep points on the circle")
}
