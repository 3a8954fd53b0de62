//! The circular family `BC±(psi)` in complex form.
//!
//! With `z_u, z_v` on the unit circle the density with respect to
//! `d theta_u d theta_v` is
//! `(1 / 4 pi^2) (1 - |psi|^2) / |1 - psi z_v conj(z_u)|^2` for `BC+` and
//! the same with `z_u` in place of `conj(z_u)` for `BC-`. These are the
//! `d = 2` members of the sphere family, with the sign given by `det Q`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::bs::{BSParams, OrthogonalMatrix};
use crate::error::{Error, Result};
use crate::math::RngStream;
use crate::univariate::sphere::UnitVector;
use crate::univariate::wrapped_cauchy::{mobius_unit, wrapped_cauchy_mle, WrappedCauchyFit};

/// Sign of `det Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DetSign {
    Plus,
    Minus,
}

impl DetSign {
    pub fn value(self) -> f64 {
        match self {
            DetSign::Plus => 1.0,
            DetSign::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for DetSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DetSign::Plus => "+",
            DetSign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BCParams {
    psi: Complex64,
    sign: DetSign,
}

impl BCParams {
    pub fn new(psi: Complex64, sign: DetSign) -> Result<Self> {
        if !(psi.norm() < 1.0) {
            return Err(Error::domain(format!("BC needs |psi| < 1, got {}", psi.norm())));
        }
        Ok(Self { psi, sign })
    }

    pub fn plus(psi: Complex64) -> Result<Self> {
        Self::new(psi, DetSign::Plus)
    }

    pub fn minus(psi: Complex64) -> Result<Self> {
        Self::new(psi, DetSign::Minus)
    }

    pub fn psi(&self) -> Complex64 {
        self.psi
    }

    pub fn sign(&self) -> DetSign {
        self.sign
    }

    /// The equivalent sphere-model parameters for `d = 2`: `rho = |psi|`,
    /// `Q` the rotation by `arg psi` (sign `+`) or the reflection with
    /// angle `-arg psi` (sign `-`).
    pub fn to_bs(&self) -> BSParams {
        let q = match self.sign {
            DetSign::Plus => OrthogonalMatrix::rotation2(self.psi.arg(), DetSign::Plus),
            DetSign::Minus => OrthogonalMatrix::rotation2(-self.psi.arg(), DetSign::Minus),
        };
        BSParams::new(self.psi.norm(), q).expect("|psi| < 1")
    }

    /// `z_u^{-det Q}`: `conj(z_u)` for `+`, `z_u` for `-`.
    fn twist(&self, z_u: Complex64) -> Complex64 {
        match self.sign {
            DetSign::Plus => z_u.conj(),
            DetSign::Minus => z_u,
        }
    }
}

/// Circle pairs `(z_u, z_v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePairSample {
    pairs: Vec<(Complex64, Complex64)>,
}

impl CirclePairSample {
    pub fn new(pairs: Vec<(Complex64, Complex64)>) -> Result<Self> {
        if pairs.iter().any(|(a, b)| !((a.norm() - 1.0).abs() < 1e-9 && (b.norm() - 1.0).abs() < 1e-9)) {
            return Err(Error::domain("circle pair entries must have unit modulus"));
        }
        Ok(Self { pairs })
    }

    pub fn from_angles(angles: &[(f64, f64)]) -> Self {
        Self {
            pairs: angles
                .iter()
                .map(|&(a, b)| (Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, b)))
                .collect(),
        }
    }

    pub fn pairs(&self) -> &[(Complex64, Complex64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Angles in `[0, 2pi)`.
    pub fn angles(&self) -> Vec<(f64, f64)> {
        self.pairs.iter().map(|(a, b)| (crate::math::wrap_angle(a.arg()), crate::math::wrap_angle(b.arg()))).collect()
    }

    /// The pairs as 2-d unit vectors.
    pub fn to_unit_vectors(&self) -> Vec<(UnitVector, UnitVector)> {
        self.pairs.iter().map(|(a, b)| (UnitVector::from_angle(a.arg()), UnitVector::from_angle(b.arg()))).collect()
    }

    /// `W_j = z_u conj(z_v)` for `+`, `conj(z_u z_v)` for `-`; distributed
    /// `C*(psi)` under `BC±(psi)`.
    pub fn reduced(&self, sign: DetSign) -> Vec<Complex64> {
        self.pairs
            .iter()
            .map(|(zu, zv)| match sign {
                DetSign::Plus => zu * zv.conj(),
                DetSign::Minus => (zu * zv).conj(),
            })
            .collect()
    }
}

pub fn bc_log_density(z_u: Complex64, z_v: Complex64, p: &BCParams) -> f64 {
    let w = p.psi * z_v * p.twist(z_u);
    (1.0 - p.psi.norm_sqr()).ln() - (4.0 * PI * PI).ln() - (1.0 - w).norm_sqr().ln()
}

/// Conditional pole of `Z_V | Z_U = z_u`: `conj(psi) z_u` for `+`,
/// `conj(psi) conj(z_u)` for `-`.
pub fn bc_conditional_pole(z_u: Complex64, p: &BCParams) -> Complex64 {
    p.psi.conj() * p.twist(z_u).conj()
}

/// `Z_U = exp(2 pi i U_1)`, `Z_T = exp(2 pi i U_2)` and `Z_V` the Möbius
/// image of `Z_T` with pole [`bc_conditional_pole`].
pub fn bc_sample(p: &BCParams, n: usize, rng: &mut RngStream) -> CirclePairSample {
    let pairs = (0..n)
        .map(|_| {
            let z_u = Complex64::from_polar(1.0, TAU * rng.uniform());
            let z_t = Complex64::from_polar(1.0, TAU * rng.uniform());
            (z_u, mobius_unit(z_t, bc_conditional_pole(z_u, p)))
        })
        .collect();
    CirclePairSample { pairs }
}

/// `E(Z_U^j Z_V^k)`.
pub fn bc_moment(j: i32, k: i32, p: &BCParams) -> Complex64 {
    let psi = p.psi;
    let pow = |z: Complex64, e: i32| z.powi(e);
    match p.sign {
        DetSign::Plus if j == -k => {
            if j >= 0 {
                pow(psi, j)
            } else {
                pow(psi.conj(), -j)
            }
        }
        DetSign::Minus if j == k => {
            if k >= 0 {
                pow(psi.conj(), k)
            } else {
                pow(psi, -k)
            }
        }
        _ => Complex64::new(0.0, 0.0),
    }
}

/// Moment estimator: the sample mean of the reduced variables.
pub fn bc_mom_estimate(s: &CirclePairSample, sign: DetSign) -> Result<Complex64> {
    if s.is_empty() {
        return Err(Error::Estimation("the moment estimator needs at least one pair".into()));
    }
    Ok(s.reduced(sign).iter().sum::<Complex64>() / s.len() as f64)
}

/// Maximum likelihood estimate; the likelihood is that of the wrapped
/// Cauchy law of the reduced variables.
pub fn bc_mle_estimate(s: &CirclePairSample, sign: DetSign) -> Result<WrappedCauchyFit> {
    let w = s.reduced(sign);
    match w.len() {
        0 => Err(Error::Estimation("the MLE needs at least one pair".into())),
        1 => Ok(WrappedCauchyFit {
            phi: w[0],
            loglik: f64::INFINITY,
            iterations: 0,
            boundary: true,
            used_fallback: false,
        }),
        _ => wrapped_cauchy_mle(&w),
    }
}

/// Fisher information for `(Re psi, Im psi)`: `2 / (1 - |psi|^2)^2 I`.
pub fn bc_fisher_info(psi: Complex64) -> Result<Matrix2<f64>> {
    if !(psi.norm() < 1.0) {
        return Err(Error::domain("Fisher information needs |psi| < 1"));
    }
    Ok(Matrix2::identity() * (2.0 / (1.0 - psi.norm_sqr()).powi(2)))
}

/// Componentwise product of two equally long samples.
pub fn bc_product(s1: &CirclePairSample, s2: &CirclePairSample) -> Result<CirclePairSample> {
    if s1.len() != s2.len() {
        return Err(Error::domain(format!("sample lengths differ: {} vs {}", s1.len(), s2.len())));
    }
    Ok(CirclePairSample { pairs: s1.pairs.iter().zip(&s2.pairs).map(|((a, b), (c, d))| (a * c, b * d)).collect() })
}

/// Componentwise `n`-th powers.
pub fn bc_power(s: &CirclePairSample, n: u32) -> Result<CirclePairSample> {
    if n == 0 {
        return Err(Error::domain("power must be positive"));
    }
    Ok(CirclePairSample { pairs: s.pairs.iter().map(|(a, b)| (a.powu(n), b.powu(n))).collect() })
}

/// Draws from `BC±(psi^{1/n})` with the principal root; the product of `n`
/// independent such samples is `BC±(psi)`.
pub fn bc_root_sample(p: &BCParams, root: u32, size: usize, rng: &mut RngStream) -> Result<CirclePairSample> {
    if root == 0 {
        return Err(Error::domain("root order must be positive"));
    }
    let psi = if p.psi.norm() == 0.0 { p.psi } else { p.psi.powf(1.0 / root as f64) };
    Ok(bc_sample(&BCParams::new(psi, p.sign)?, size, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bs::bs_log_density;

    #[test]
    fn density_values() {
        let p0 = BCParams::plus(Complex64::new(0.0, 0.0)).unwrap();
        let z = Complex64::from_polar(1.0, 0.3);
        assert!((bc_log_density(z, z.conj(), &p0) + (4.0 * PI * PI).ln()).abs() < 1e-14);

        let psi = Complex64::from_polar(0.6, 1.2);
        let p = BCParams::plus(psi).unwrap();
        // choose z_v with psi z_v conj(z_u) = |psi|
        let z_u = Complex64::from_polar(1.0, 0.4);
        let z_v = z_u * Complex64::from_polar(1.0, -1.2);
        let expect = 1.6 / (4.0 * PI * PI * 0.4);
        assert!((bc_log_density(z_u, z_v, &p).exp() - expect).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_sphere_density() {
        let mut rng = RngStream::new(3, 0);
        for sign in [DetSign::Plus, DetSign::Minus] {
            let p = BCParams::new(Complex64::from_polar(0.55, 2.3), sign).unwrap();
            let bs = p.to_bs();
            for _ in 0..100 {
                let (a, b) = (TAU * rng.uniform(), TAU * rng.uniform());
                let x = bc_log_density(Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, b), &p);
                let y = bs_log_density(&UnitVector::from_angle(a), &UnitVector::from_angle(b), &bs).unwrap();
                assert!((x - y).abs() < 1e-12, "{sign}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn moment_table() {
        let psi = Complex64::new(0.3, -0.4);
        let p = BCParams::plus(psi).unwrap();
        assert_eq!(bc_moment(1, -1, &p), psi);
        assert_eq!(bc_moment(1, 1, &p), Complex64::new(0.0, 0.0));
        assert!((bc_moment(-2, 2, &p) - psi.conj() * psi.conj()).norm() < 1e-15);
        assert_eq!(bc_moment(0, 0, &p), Complex64::new(1.0, 0.0));
        let m = BCParams::minus(psi).unwrap();
        assert_eq!(bc_moment(-1, -1, &m), psi);
        assert_eq!(bc_moment(1, -1, &m), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_observation_estimates() {
        let zu = Complex64::from_polar(1.0, 0.7);
        let zv = Complex64::from_polar(1.0, 2.9);
        let s = CirclePairSample::new(vec![(zu, zv)]).unwrap();
        assert_eq!(bc_mom_estimate(&s, DetSign::Plus).unwrap(), zu * zv.conj());
        assert_eq!(bc_mle_estimate(&s, DetSign::Plus).unwrap().phi, zu * zv.conj());
    }

    #[test]
    fn fisher_values() {
        assert_eq!(bc_fisher_info(Complex64::new(0.0, 0.0)).unwrap(), Matrix2::identity() * 2.0);
        let f = bc_fisher_info(Complex64::new(0.0, 0.9)).unwrap();
        assert!((f[(0, 0)] - 55.4016620498615).abs() < 1e-9);
        assert!(bc_fisher_info(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn algebra_guards() {
        let mut rng = RngStream::new(0, 0);
        let p = BCParams::plus(Complex64::new(0.5, 0.0)).unwrap();
        let a = bc_sample(&p, 3, &mut rng);
        let b = bc_sample(&p, 4, &mut rng);
        assert!(bc_product(&a, &b).is_err());
        assert_eq!(bc_power(&a, 1).unwrap(), a);
        assert!(bc_power(&a, 0).is_err());
    }
}
