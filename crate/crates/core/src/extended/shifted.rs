//! Sphere pairs generated by a path started at `xi` instead of the origin.
//!
//! `U ~ Exit_d(Q xi / rho)`, `V | U = u ~ Exit_d(rho Q'u)`, `V ~ Exit_d(xi)`.
//! The joint density is
//! `(1/A^2) (1 - rho^2) / (1 - 2 rho u'Qv + rho^2)^{d/2}
//!  * rho^{d-2} (rho^2 - |xi|^2) / (rho^2 - 2 rho u'Q xi + |xi|^2)^{d/2}`.

use nalgebra::DVector;

use crate::bs::{bs_log_density, BSParams, OrthogonalMatrix, PairSample};
use crate::error::{Error, Result};
use crate::math::RngStream;
use crate::univariate::exit::{exit_sample, ExitParams};
use crate::univariate::sphere::UnitVector;

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedParams {
    base: BSParams,
    xi: DVector<f64>,
}

impl ShiftedParams {
    pub fn new(rho: f64, q: OrthogonalMatrix, xi: DVector<f64>) -> Result<Self> {
        if xi.len() != q.dim() {
            return Err(Error::domain(format!("xi has length {}, Q is {}x{}", xi.len(), q.dim(), q.dim())));
        }
        let base = BSParams::new(rho, q)?;
        let r = xi.norm();
        if !(r < rho) {
            return Err(Error::domain(format!("start point needs |xi| < rho, got |xi| = {r}, rho = {rho}")));
        }
        Ok(Self { base, xi })
    }

    pub fn base(&self) -> &BSParams {
        &self.base
    }

    pub fn xi(&self) -> &DVector<f64> {
        &self.xi
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Law of `U`: `Exit_d(Q xi / rho)`.
    pub fn u_marginal(&self) -> ExitParams {
        ExitParams::new(self.base.q().matrix() * &self.xi / self.base.rho()).expect("|xi| < rho")
    }

    /// Law of `V`: `Exit_d(xi)`.
    pub fn v_marginal(&self) -> ExitParams {
        ExitParams::new(self.xi.clone()).expect("|xi| < rho < 1")
    }
}

pub fn shifted_log_density(u: &UnitVector, v: &UnitVector, p: &ShiftedParams) -> Result<f64> {
    let base = bs_log_density(u, v, &p.base)?;
    let d = p.dim() as f64;
    let rho = p.base.rho();
    let xi2 = p.xi.norm_squared();
    let uqxi = u.coords().dot(&(p.base.q().matrix() * &p.xi));
    Ok(base + (d - 2.0) * rho.ln() + (rho * rho - xi2).ln() - 0.5 * d * (rho * rho - 2.0 * rho * uqxi + xi2).ln())
}

pub fn shifted_sample(p: &ShiftedParams, n: usize, rng: &mut RngStream) -> PairSample {
    let u_law = p.u_marginal();
    let pairs = (0..n)
        .map(|_| {
            let u = exit_sample(&u_law, rng);
            let v = exit_sample(&p.base.v_given_u(&u), rng);
            (u, v)
        })
        .collect();
    PairSample::from_draws(p.dim(), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bc::DetSign;
    use crate::math::quad_torus_2d;

    #[test]
    fn reduces_to_base_at_origin() {
        let q = OrthogonalMatrix::rotation2(0.4, DetSign::Plus);
        let p = ShiftedParams::new(0.6, q.clone(), DVector::zeros(2)).unwrap();
        let b = BSParams::new(0.6, q).unwrap();
        for &(a, c) in &[(0.1, 2.0), (3.0, 3.1), (5.0, 0.2)] {
            let (u, v) = (UnitVector::from_angle(a), UnitVector::from_angle(c));
            assert!((shifted_log_density(&u, &v, &p).unwrap() - bs_log_density(&u, &v, &b).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn torus_normalization() {
        let p = ShiftedParams::new(0.6, OrthogonalMatrix::identity(2), DVector::from_vec(vec![0.3, 0.0])).unwrap();
        let total = quad_torus_2d(
            |a, b| shifted_log_density(&UnitVector::from_angle(a), &UnitVector::from_angle(b), &p).unwrap().exp(),
            64,
        );
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_start_outside_inner_sphere() {
        let q = OrthogonalMatrix::identity(2);
        assert!(ShiftedParams::new(0.5, q.clone(), DVector::from_vec(vec![0.5, 0.0])).is_err());
        assert!(ShiftedParams::new(0.5, q, DVector::from_vec(vec![0.1, 0.0, 0.0])).is_err());
    }
}
