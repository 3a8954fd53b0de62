//! Wrapped (circular) Cauchy law `C*(phi)` on the unit circle.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::math::{nelder_mead, NelderMeadOptions, RngStream};

/// Largest modulus an estimate may take.
pub const BOUNDARY_MODULUS: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappedCauchyParams {
    phi: Complex64,
}

impl WrappedCauchyParams {
    pub fn new(phi: Complex64) -> Result<Self> {
        if !(phi.norm() < 1.0) {
            return Err(Error::domain(format!("wrapped Cauchy needs |phi| < 1, got {}", phi.norm())));
        }
        Ok(Self { phi })
    }

    pub fn phi(&self) -> Complex64 {
        self.phi
    }
}

/// `(1 - |phi|^2) / (2 pi |z - phi|^2)`, a density in the angle of `z`.
pub fn wrapped_cauchy_density(z: Complex64, p: &WrappedCauchyParams) -> f64 {
    (1.0 - p.phi.norm_sqr()) / (TAU * (z - p.phi).norm_sqr())
}

pub fn wrapped_cauchy_log_density(z: Complex64, p: &WrappedCauchyParams) -> f64 {
    (1.0 - p.phi.norm_sqr()).ln() - TAU.ln() - (z - p.phi).norm_sqr().ln()
}

/// Möbius map `(z + beta) / (1 + conj(beta) z)` of the circle onto itself.
pub fn mobius_unit(z: Complex64, beta: Complex64) -> Complex64 {
    (z + beta) / (Complex64::new(1.0, 0.0) + beta.conj() * z)
}

/// Distribution function of the angle on `[0, 2pi]`.
///
/// The inverse Möbius map sends `C*(phi)` to the uniform law and preserves
/// orientation, so the probability of the arc `[0, theta]` is the length of
/// its image divided by `2pi`.
pub fn wrapped_cauchy_cdf(theta: f64, p: &WrappedCauchyParams) -> f64 {
    if theta <= 0.0 {
        return 0.0;
    }
    if theta >= TAU {
        return 1.0;
    }
    let w = |t: f64| mobius_unit(Complex64::from_polar(1.0, t), -p.phi).arg();
    ((w(theta) - w(0.0)).rem_euclid(TAU) / TAU).clamp(0.0, 1.0)
}

pub fn wrapped_cauchy_sample(p: &WrappedCauchyParams, rng: &mut RngStream) -> Complex64 {
    let z = Complex64::from_polar(1.0, TAU * rng.uniform());
    mobius_unit(z, p.phi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappedCauchyFit {
    pub phi: Complex64,
    pub loglik: f64,
    pub iterations: usize,
    /// Estimate was clamped to `|phi| = 1 - 1e-9`.
    pub boundary: bool,
    /// The fixed-point iteration failed and the simplex fallback was used.
    pub used_fallback: bool,
}

fn loglik(zs: &[Complex64], phi: Complex64) -> f64 {
    let n = zs.len() as f64;
    n * (1.0 - phi.norm_sqr()).ln() - zs.iter().map(|z| (z - phi).norm_sqr().ln()).sum::<f64>()
}

/// Score of [`loglik`] with respect to `(Re phi, Im phi)`, as a complex number.
fn score(zs: &[Complex64], phi: Complex64) -> Complex64 {
    let n = zs.len() as f64;
    let s: Complex64 = zs.iter().map(|z| (z - phi) / (z - phi).norm_sqr()).sum();
    2.0 * (-n * phi / (1.0 - phi.norm_sqr()) + s)
}

fn clamp_to_boundary(phi: Complex64) -> (Complex64, bool) {
    let r = phi.norm();
    if r > BOUNDARY_MODULUS {
        (phi * (BOUNDARY_MODULUS / r), true)
    } else {
        (phi, false)
    }
}

/// Maximum likelihood estimate of `phi` (Kent–Tyler fixed point).
///
/// With `v = 2 phi / (1 + |phi|^2)` the likelihood equations become
/// `v = sum w_j z_j / sum w_j`, `w_j = 1 / (1 - Re(conj(z_j) v))`, which is
/// iterated until `|delta phi| <= 1e-10`. The result must also be stationary
/// (mean score below `1e-6`); otherwise a Nelder–Mead search on the disc is
/// used instead.
pub fn wrapped_cauchy_mle(zs: &[Complex64]) -> Result<WrappedCauchyFit> {
    if zs.len() < 2 {
        return Err(Error::domain("wrapped Cauchy MLE needs at least two observations"));
    }
    if zs.iter().any(|z| !((z.norm() - 1.0).abs() < 1e-9)) {
        return Err(Error::domain("wrapped Cauchy observations must lie on the unit circle"));
    }
    let n = zs.len() as f64;
    if zs.iter().all(|z| (z - zs[0]).norm() < 1e-12) {
        let phi = zs[0] * BOUNDARY_MODULUS;
        return Ok(WrappedCauchyFit {
            phi,
            loglik: loglik(zs, phi),
            iterations: 0,
            boundary: true,
            used_fallback: false,
        });
    }

    let mean: Complex64 = zs.iter().sum::<Complex64>() / n;
    let mut v = 2.0 * mean / (1.0 + mean.norm_sqr());
    let mut phi = mean;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < 100_000 {
        iterations += 1;
        let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
        for z in zs {
            let w = 1.0 / (1.0 - (z.conj() * v).re);
            num += w * z;
            den += w;
        }
        v = num / den;
        let r2 = v.norm_sqr();
        if r2 >= 1.0 {
            break;
        }
        let next = v / (1.0 + (1.0 - r2).sqrt());
        let step = (next - phi).norm();
        phi = next;
        if step <= 1e-10 {
            converged = true;
            break;
        }
    }

    let (clamped, boundary) = clamp_to_boundary(phi);
    if converged && !boundary && (score(zs, phi).norm() / n) <= 1e-6 {
        return Ok(WrappedCauchyFit { phi, loglik: loglik(zs, phi), iterations, boundary, used_fallback: false });
    }
    if boundary && converged {
        return Ok(WrappedCauchyFit {
            phi: clamped,
            loglik: loglik(zs, clamped),
            iterations,
            boundary,
            used_fallback: false,
        });
    }

    // fallback: maximize over the disc via phi = tanh(r) e^{i a} in Cartesian form
    let to_phi = |x: &[f64]| {
        let s = (x[0] * x[0] + x[1] * x[1]).sqrt();
        if s == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(x[0], x[1]) * (s.tanh() / s)
        }
    };
    let start = {
        let r = mean.norm().min(0.99);
        let s = r.atanh();
        if r > 0.0 {
            vec![mean.re / r * s, mean.im / r * s]
        } else {
            vec![0.0, 0.0]
        }
    };
    let m = nelder_mead(
        |x| -loglik(zs, to_phi(x)),
        &start,
        &NelderMeadOptions { step: vec![0.2], x_tol: 1e-12, ..Default::default() },
    )?;
    let (phi, boundary) = clamp_to_boundary(to_phi(&m.x));
    if !boundary && score(zs, phi).norm() / n > 1e-6 {
        return Err(Error::Estimation(format!(
            "wrapped Cauchy MLE did not reach a stationary point (last iterate {phi})"
        )));
    }
    Ok(WrappedCauchyFit {
        phi,
        loglik: loglik(zs, phi),
        iterations: iterations + m.iterations,
        boundary,
        used_fallback: true,
    })
}

/// Modal density value `(1 + |phi|) / (2 pi (1 - |phi|))`.
pub fn wrapped_cauchy_mode_density(p: &WrappedCauchyParams) -> f64 {
    let r = p.phi.norm();
    (1.0 + r) / (2.0 * PI * (1.0 - r))
}
