//! Transforms of the circular pair families to the plane and to the cylinder
//! through the Cayley map `x = i (1 - z) / (1 + z)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bc::{bc_sample, BCParams};
use crate::error::Result;
use crate::math::RngStream;
use crate::univariate::cauchy::{cayley, RealCauchyParams};
use crate::univariate::wrapped_cauchy::WrappedCauchyParams;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Inverse Cayley map: `(1 + i x) / (1 - i x)`.
pub fn inverse_cayley(x: f64) -> Complex64 {
    (1.0 + I * x) / (1.0 - I * x)
}

/// Upper half-plane image `theta = i (1 - psi) / (1 + psi)` of the
/// dependence parameter.
pub fn plane_theta(psi: Complex64) -> Result<Complex64> {
    BCParams::minus(psi)?;
    Ok(I * (1.0 - psi) / (1.0 + psi))
}

/// `Im(theta) / (pi^2 |x + y + theta (1 - x y)|^2)`.
pub fn plane_density(x: f64, y: f64, psi: Complex64) -> Result<f64> {
    let theta = plane_theta(psi)?;
    let d = x + y + theta * (1.0 - x * y);
    Ok(theta.im / (PI * PI * d.norm_sqr()))
}

/// Cayley images of a `BC-(psi)` sample.
pub fn plane_sample(psi: Complex64, n: usize, rng: &mut RngStream) -> Result<Vec<(f64, f64)>> {
    let p = BCParams::minus(psi)?;
    Ok(bc_sample(&p, n, rng).pairs().iter().map(|&(u, v)| (cayley(u), cayley(v))).collect())
}

/// Law of `X | Y = y` (and by symmetry of `Y | X = y`).
///
/// Writing `a = (theta + y) / (1 - theta y)`, the conditional density is
/// proportional to `1 / |x + a|^2`, which is the Cauchy law with location
/// `-Re(a)` and scale `Im(a)`.
pub fn plane_conditional(psi: Complex64, y: f64) -> Result<RealCauchyParams> {
    let theta = plane_theta(psi)?;
    let a = (theta + y) / (1.0 - theta * y);
    RealCauchyParams::new(-a.conj())
}

/// `(Z_U, cayley(Z_V))` for `(Z_U, Z_V)` drawn from `BC+(psi)`.
pub fn cylinder_sample(psi: Complex64, n: usize, rng: &mut RngStream) -> Result<Vec<(Complex64, f64)>> {
    let p = BCParams::plus(psi)?;
    Ok(bc_sample(&p, n, rng).pairs().iter().map(|&(u, v)| (u, cayley(v))).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderConditionals {
    /// Wrapped Cauchy law of the angle given the line coordinate.
    pub z_given_x: WrappedCauchyParams,
    /// Real Cauchy law of the line coordinate given the angle.
    pub x_given_z: RealCauchyParams,
}

/// Conditional laws of the cylinder model at the point `(z, x)`.
pub fn cylinder_conditionals(psi: Complex64, z: Complex64, x: f64) -> Result<CylinderConditionals> {
    BCParams::plus(psi)?;
    let z_given_x = WrappedCauchyParams::new(psi * inverse_cayley(x))?;
    let w = psi.conj() * z;
    let x_given_z = RealCauchyParams::new(I * (1.0 - w) / (1.0 + w))?;
    Ok(CylinderConditionals { z_given_x, x_given_z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bc::bc_log_density;
    use crate::math::quad_1d;
    use crate::univariate::cauchy::real_cauchy_density;
    use crate::univariate::wrapped_cauchy::wrapped_cauchy_density;

    #[test]
    fn independent_cauchy_at_zero() {
        let mut rng = RngStream::new(5, 0);
        for _ in 0..100 {
            let x = 20.0 * (rng.uniform() - 0.5);
            let y = 20.0 * (rng.uniform() - 0.5);
            let f = plane_density(x, y, Complex64::new(0.0, 0.0)).unwrap();
            let g = 1.0 / (PI * PI * (1.0 + x * x) * (1.0 + y * y));
            assert!((f - g).abs() <= 1e-10 * g);
        }
    }

    #[test]
    fn plane_density_is_change_of_variables() {
        let psi = Complex64::new(0.3, -0.45);
        let p = BCParams::minus(psi).unwrap();
        for &(x, y) in &[(0.3, -1.2), (4.0, 0.1), (-2.5, -0.7)] {
            let jac = 4.0 / ((1.0 + x * x) * (1.0 + y * y));
            let circle = bc_log_density(inverse_cayley(x), inverse_cayley(y), &p).exp() * jac;
            let f = plane_density(x, y, psi).unwrap();
            assert!((f - circle).abs() < 1e-13 * f.max(1.0));
        }
    }

    #[test]
    fn plane_conditional_matches_density_ratio() {
        let psi = Complex64::new(-0.2, 0.6);
        for &y in &[-3.0, 0.0, 0.8] {
            let c = plane_conditional(psi, y).unwrap();
            let marg =
                quad_1d(|t| plane_density(t.tan(), y, psi).unwrap() / t.cos().powi(2), -PI / 2.0, PI / 2.0, 1e-12)
                    .unwrap()
                    .value;
            assert!((marg - 1.0 / (PI * (1.0 + y * y))).abs() < 1e-9);
            for &x in &[-1.0, 0.5, 6.0] {
                let ratio = plane_density(x, y, psi).unwrap() / marg;
                assert!((ratio - real_cauchy_density(x, &c)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn cylinder_conditionals_match_joint() {
        let psi = Complex64::new(0.4, 0.35);
        let p = BCParams::plus(psi).unwrap();
        let z = Complex64::from_polar(1.0, 2.2);
        let x = -0.9;
        let c = cylinder_conditionals(psi, z, x).unwrap();
        let joint = |z: Complex64, x: f64| bc_log_density(z, inverse_cayley(x), &p).exp() * 2.0 / (1.0 + x * x);
        // both marginals are known: uniform angle density 1 / (2 pi), standard Cauchy line
        let fx = 1.0 / (PI * (1.0 + x * x));
        let fz = 1.0 / (2.0 * PI);
        assert!((joint(z, x) / fx - wrapped_cauchy_density(z, &c.z_given_x)).abs() < 1e-12);
        assert!((joint(z, x) / fz - real_cauchy_density(x, &c.x_given_z)).abs() < 1e-12);
    }
}
