use nalgebra::DVector;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math::special::ln_gamma;
use crate::math::RngStream;

const UNIT_TOL: f64 = 1e-12;

/// A point on the unit sphere `S^{d-1}` in `R^d`, `d >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(DVector<f64>);

impl UnitVector {
    /// Wrap `coords`, which must already have unit norm (to 1e-12).
    pub fn new(coords: DVector<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::domain(format!("unit vectors need d >= 2, got {}", coords.len())));
        }
        let norm = coords.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::domain(format!("vector norm is {norm}, expected 1")));
        }
        Ok(Self(coords))
    }

    /// Scale a non-zero vector onto the sphere.
    pub fn normalize(coords: DVector<f64>) -> Result<Self> {
        let norm = coords.norm();
        if coords.len() < 2 || !(norm.is_finite() && norm > 0.0) {
            return Err(Error::domain("cannot normalize a zero, non-finite or 1-d vector"));
        }
        Ok(Self(coords / norm))
    }

    pub fn from_slice(xs: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(xs))
    }

    /// `(cos theta, sin theta)`.
    pub fn from_angle(theta: f64) -> Self {
        Self(DVector::from_vec(vec![theta.cos(), theta.sin()]))
    }

    /// Standard basis vector `e_i` (0-based) in `R^d`.
    pub fn basis(d: usize, i: usize) -> Self {
        assert!(d >= 2 && i < d, "basis index out of range");
        let mut v = DVector::zeros(d);
        v[i] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.0.dot(&other.0)
    }

    /// Angle in `[0, 2pi)` of a circle point (`d == 2`).
    pub fn angle(&self) -> f64 {
        crate::math::wrap_angle(self.0[1].atan2(self.0[0]))
    }
}

/// Surface area `A_{d-1} = 2 pi^{d/2} / Gamma(d/2)` of the unit sphere in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    ln_sphere_area(d).exp()
}

pub(crate) fn ln_sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2f64.ln() + h * PI.ln() - ln_gamma(h)
}

/// Uniform point on `S^{d-1}` (normalized standard Gaussian vector).
pub fn uniform_sphere_sample(d: usize, rng: &mut RngStream) -> Result<UnitVector> {
    if d < 2 {
        return Err(Error::domain(format!("sphere sampling needs d >= 2, got {d}")));
    }
    loop {
        let g = DVector::from_fn(d, |_, _| rng.gaussian());
        let norm = g.norm();
        if norm > 1e-150 {
            return Ok(UnitVector(g / norm));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-12);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn construction_checks_norm() {
        assert!(UnitVector::from_slice(&[0.6, 0.8]).is_ok());
        assert!(UnitVector::from_slice(&[0.6, 0.81]).is_err());
        assert!(UnitVector::from_slice(&[1.0]).is_err());
        assert!(UnitVector::normalize(DVector::zeros(3)).is_err());
        let v = UnitVector::normalize(DVector::from_vec(vec![3.0, 4.0])).unwrap();
        assert!((v.as_slice()[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn samples_are_unit_and_centered() {
        let mut rng = RngStream::new(3, 0);
        let n = 100_000;
        let d = 3;
        let mut mean = vec![0.0; d];
        let mut second = vec![0.0; d];
        for _ in 0..n {
            let v = uniform_sphere_sample(d, &mut rng).unwrap();
            assert!((v.coords().norm() - 1.0).abs() < 1e-12);
            for i in 0..d {
                mean[i] += v.as_slice()[i] / n as f64;
                second[i] += v.as_slice()[i].powi(2) / n as f64;
            }
        }
        // Var(x_i) = 1/d; Var(x_i^2) = E x^4 - 1/d^2 = 3/(d(d+2)) - 1/d^2
        let se1 = (1.0 / d as f64 / n as f64).sqrt();
        let var2 = 3.0 / (d * (d + 2)) as f64 - 1.0 / (d * d) as f64;
        let se2 = (var2 / n as f64).sqrt();
        for i in 0..d {
            assert!(mean[i].abs() < 4.0 * se1);
            assert!((second[i] - 1.0 / d as f64).abs() < 4.0 * se2);
        }
        assert!(uniform_sphere_sample(1, &mut rng).is_err());
    }
}
