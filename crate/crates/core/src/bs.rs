//! The bivariate sphere family `BS_d(rho Q)`.
//!
//! Joint density on `S^{d-1} x S^{d-1}`:
//! `c(u, v) = (1 / A_{d-1}^2) (1 - rho^2) / (1 - 2 rho u'Qv + rho^2)^{d/2}`.
//! Both marginals are uniform, `V | U = u ~ Exit_d(rho Q'u)` and
//! `U | V = v ~ Exit_d(rho Q v)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::bc::DetSign;
use crate::error::{Error, Result};
use crate::math::linalg::polar_orthogonal;
use crate::math::special::inv_reg_inc_beta;
use crate::math::{reg_inc_beta, top_eigenvalue_sym, RngStream};
use crate::univariate::exit::{exit_log_density, exit_sample, ExitParams};
use crate::univariate::gof::{ks_test, KsResult};
use crate::univariate::hprime::{hprime_density, hprime_mle, BoundedMle, HPrimeParams};
use crate::univariate::sphere::{ln_sphere_area, uniform_sphere_sample, UnitVector};

const ORTHO_TOL: f64 = 1e-10;

/// Largest value of `rho` considered by the likelihood search.
pub const RHO_MAX: f64 = 1.0 - 1e-9;

/// A `d x d` orthogonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMatrix(DMatrix<f64>);

impl OrthogonalMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let d = m.nrows();
        if d < 2 || m.ncols() != d {
            return Err(Error::domain("orthogonal matrix must be square with d >= 2"));
        }
        let defect = (m.transpose() * &m - DMatrix::identity(d, d)).amax();
        if !(defect <= ORTHO_TOL) {
            return Err(Error::domain(format!("matrix is not orthogonal (max |Q'Q - I| = {defect:e})")));
        }
        Ok(Self(m))
    }

    pub fn from_row_slice(d: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::domain(format!("expected {} entries, got {}", d * d, entries.len())));
        }
        Self::new(DMatrix::from_row_slice(d, d, entries))
    }

    pub fn identity(d: usize) -> Self {
        assert!(d >= 2, "d >= 2");
        Self(DMatrix::identity(d, d))
    }

    /// `[[cos t, -s sin t], [sin t, s cos t]]` with `s` the determinant sign.
    pub fn rotation2(theta: f64, det: DetSign) -> Self {
        let s = det.value();
        let (sn, cs) = theta.sin_cos();
        Self(DMatrix::from_row_slice(2, 2, &[cs, -s * sn, sn, s * cs]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    pub fn det_sign(&self) -> DetSign {
        if self.det() > 0.0 {
            DetSign::Plus
        } else {
            DetSign::Minus
        }
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn mul(&self, other: &OrthogonalMatrix) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn apply(&self, x: &UnitVector) -> UnitVector {
        UnitVector::normalize(&self.0 * x.coords()).expect("orthogonal maps preserve norm")
    }
}

/// Orthogonal matrix from the QR factorization of a standard Gaussian
/// matrix, with column signs chosen so that `R` has a positive diagonal.
pub fn random_orthogonal(d: usize, rng: &mut RngStream) -> Result<OrthogonalMatrix> {
    if d < 2 {
        return Err(Error::domain("random_orthogonal needs d >= 2"));
    }
    let g = DMatrix::from_fn(d, d, |_, _| rng.gaussian());
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    OrthogonalMatrix::new(q)
}

/// Orthogonal polar factor of a square matrix (the closest orthogonal
/// matrix in Frobenius norm).
pub fn nearest_orthogonal(m: &DMatrix<f64>) -> Result<OrthogonalMatrix> {
    let q = polar_orthogonal(m).ok_or_else(|| Error::Estimation("matrix is singular".into()))?;
    OrthogonalMatrix::new(q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BSParams {
    rho: f64,
    q: OrthogonalMatrix,
}

impl BSParams {
    pub fn new(rho: f64, q: OrthogonalMatrix) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::domain(format!("rho must lie in [0, 1), got {rho}")));
        }
        Ok(Self { rho, q })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn q(&self) -> &OrthogonalMatrix {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    /// Law of `u'Qv`: `H'(rho, (d - 2)/2)`.
    pub fn t_law(&self) -> HPrimeParams {
        HPrimeParams::new(self.rho, (self.dim() as f64 - 2.0) / 2.0).expect("0 <= rho < 1")
    }

    /// Parameters of `V | U = u`, i.e. `Exit_d(rho Q'u)`.
    pub fn v_given_u(&self, u: &UnitVector) -> ExitParams {
        ExitParams::new(self.q.matrix().tr_mul(u.coords()) * self.rho).expect("|rho Q'u| < 1")
    }

    /// Parameters of `U | V = v`, i.e. `Exit_d(rho Q v)`.
    pub fn u_given_v(&self, v: &UnitVector) -> ExitParams {
        ExitParams::new(self.q.matrix() * v.coords() * self.rho).expect("|rho Q v| < 1")
    }
}

/// Pairs `(u_j, v_j)` of unit vectors of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSample {
    d: usize,
    pairs: Vec<(UnitVector, UnitVector)>,
}

impl PairSample {
    pub fn new(pairs: Vec<(UnitVector, UnitVector)>) -> Result<Self> {
        let Some(first) = pairs.first() else {
            return Err(Error::domain("a pair sample needs at least one pair"));
        };
        let d = first.0.dim();
        if pairs.iter().any(|(u, v)| u.dim() != d || v.dim() != d) {
            return Err(Error::domain("all vectors in a pair sample must share one dimension"));
        }
        Ok(Self { d, pairs })
    }

    /// Sampler output; every vector is already known to have dimension `d`.
    pub(crate) fn from_draws(d: usize, pairs: Vec<(UnitVector, UnitVector)>) -> Self {
        Self { d, pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn pairs(&self) -> &[(UnitVector, UnitVector)] {
        &self.pairs
    }

    /// `(Q1 u_j, Q2 v_j)`.
    pub fn transform(&self, q1: &OrthogonalMatrix, q2: &OrthogonalMatrix) -> Self {
        Self { d: self.d, pairs: self.pairs.iter().map(|(u, v)| (q1.apply(u), q2.apply(v))).collect() }
    }

    /// `u_j' Q v_j` for every pair.
    pub fn inner_products(&self, q: &OrthogonalMatrix) -> Vec<f64> {
        self.pairs.iter().map(|(u, v)| u.coords().dot(&(q.matrix() * v.coords()))).collect()
    }

    /// Sample cross moment `(1/n) sum u_j v_j'`.
    pub fn cross_moment(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (u, v) in &self.pairs {
            m += u.coords() * v.coords().transpose();
        }
        m / self.len() as f64
    }
}

fn check_dims(u: &UnitVector, v: &UnitVector, d: usize) -> Result<()> {
    if u.dim() != d || v.dim() != d {
        return Err(Error::domain(format!("expected vectors of dimension {d}, got {} and {}", u.dim(), v.dim())));
    }
    Ok(())
}

pub fn bs_log_density(u: &UnitVector, v: &UnitVector, p: &BSParams) -> Result<f64> {
    let d = p.dim();
    check_dims(u, v, d)?;
    let t = u.coords().dot(&(p.q.matrix() * v.coords()));
    let rho = p.rho;
    Ok(-2.0 * ln_sphere_area(d) + (1.0 - rho * rho).ln() - 0.5 * d as f64 * (1.0 - 2.0 * rho * t + rho * rho).ln())
}

/// The same density written as `f_U(u) g(v | u)` with the exit conditional.
pub fn bs_log_density_conditional(u: &UnitVector, v: &UnitVector, p: &BSParams) -> Result<f64> {
    check_dims(u, v, p.dim())?;
    Ok(-ln_sphere_area(p.dim()) + exit_log_density(v, &p.v_given_u(u))?)
}

/// `n` independent pairs: `V` uniform, then `U | V = v ~ Exit_d(rho Q v)`.
pub fn bs_sample(p: &BSParams, n: usize, rng: &mut RngStream) -> PairSample {
    let d = p.dim();
    let pairs = (0..n)
        .map(|_| {
            let v = uniform_sphere_sample(d, rng).expect("d >= 2");
            let u = exit_sample(&p.u_given_v(&v), rng);
            (u, v)
        })
        .collect();
    PairSample::from_draws(d, pairs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BSMoments {
    pub mean_u: DVector<f64>,
    pub mean_v: DVector<f64>,
    /// `E(UU') = E(VV') = I/d`.
    pub cov_uu: DMatrix<f64>,
    /// `E(UV') = rho Q / d`.
    pub cross_uv: DMatrix<f64>,
}

pub fn bs_moments(p: &BSParams) -> BSMoments {
    let d = p.dim();
    BSMoments {
        mean_u: DVector::zeros(d),
        mean_v: DVector::zeros(d),
        cov_uu: DMatrix::identity(d, d) / d as f64,
        cross_uv: p.q.matrix() * (p.rho / d as f64),
    }
}

fn sample_covariances(s: &PairSample) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let d = s.dim();
    let n = s.len() as f64;
    let mut mu = DVector::zeros(d);
    let mut mv = DVector::zeros(d);
    for (u, v) in s.pairs() {
        mu += u.coords();
        mv += v.coords();
    }
    mu /= n;
    mv /= n;
    let (mut suu, mut svv, mut suv) = (DMatrix::zeros(d, d), DMatrix::zeros(d, d), DMatrix::zeros(d, d));
    for (u, v) in s.pairs() {
        let cu = u.coords() - &mu;
        let cv = v.coords() - &mv;
        suu += &cu * cu.transpose();
        svv += &cv * cv.transpose();
        suv += &cu * cv.transpose();
    }
    (suu / n, svv / n, suv / n)
}

/// Plug-in Jupp–Mardia correlation: square root of the largest eigenvalue of
/// `S_uu^{-1} S_uv S_vv^{-1} S_uv'`.
pub fn jw_correlation(s: &PairSample) -> Result<f64> {
    let d = s.dim();
    if s.len() < d + 1 {
        return Err(Error::Estimation(format!("need at least {} pairs, got {}", d + 1, s.len())));
    }
    let (suu, svv, suv) = sample_covariances(s);
    let chol = suu.cholesky().ok_or_else(|| Error::Estimation("covariance of U is singular".into()))?;
    let svv_inv = svv.try_inverse().ok_or_else(|| Error::Estimation("covariance of V is singular".into()))?;
    let l = chol.l();
    let a = l.solve_lower_triangular(&suv).ok_or_else(|| Error::Estimation("covariance of U is singular".into()))?;
    // L^{-1} S_uv S_vv^{-1} S_uv' L^{-T}, symmetric with the same spectrum
    let mut m = &a * svv_inv * a.transpose();
    m = (&m + m.transpose()) * 0.5;
    Ok(top_eigenvalue_sym(&m)?.max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomEstimate {
    pub rho: f64,
    /// Not necessarily orthogonal.
    pub q: DMatrix<f64>,
    /// `(d/n) sum u_j v_j'`.
    pub rho_q: DMatrix<f64>,
    /// `|| Q'Q - I ||_F` of the estimate.
    pub orthogonality_defect: f64,
}

impl MomEstimate {
    /// Closest orthogonal matrix to the estimated `Q`.
    pub fn projected_q(&self) -> Result<OrthogonalMatrix> {
        nearest_orthogonal(&self.q)
    }
}

/// Moment estimator: `rho Q = (d/n) sum u_j v_j'`, `rho = d |det((1/n) sum u_j v_j')|^{1/d}`.
pub fn bs_mom_estimate(s: &PairSample) -> Result<MomEstimate> {
    let d = s.dim();
    if s.len() < 2 {
        return Err(Error::Estimation("the moment estimator needs n >= 2".into()));
    }
    let m = s.cross_moment();
    let sv = m.singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if !(smax > 0.0) || smin <= 1e-12 * smax {
        return Err(Error::Estimation(format!(
            "(1/n) sum u_j v_j' must have full rank {d}; smallest singular value is {smin:e}"
        )));
    }
    let rho = d as f64 * m.determinant().abs().powf(1.0 / d as f64);
    let rho_q = m * d as f64;
    let q = &rho_q / rho;
    let orthogonality_defect = (q.transpose() * &q - DMatrix::identity(d, d)).norm();
    Ok(MomEstimate { rho, q, rho_q, orthogonality_defect })
}

/// Asymptotic covariance of `sqrt(n) vec(rho_hat Q_hat)`, a `d^2 x d^2`
/// matrix indexed by `m = d (j - 1) + i` (column-major vec).
#[derive(Debug, Clone, PartialEq)]
pub struct MomCovariance {
    pub sigma: DMatrix<f64>,
}

pub fn bs_mom_asymptotic_cov(p: &BSParams) -> MomCovariance {
    let d = p.dim();
    let q = p.q.matrix();
    let r2 = p.rho * p.rho;
    let df = d as f64;
    let mut sigma = DMatrix::zeros(d * d, d * d);
    for j in 0..d {
        for i in 0..d {
            let m = d * j + i;
            for l in 0..d {
                for k in 0..d {
                    let n = d * l + k;
                    sigma[(m, n)] = if m == n {
                        1.0 + r2 * ((df - 2.0) * q[(i, j)].powi(2) - 2.0) / (df + 2.0)
                    } else {
                        r2 * (df * q[(k, j)] * q[(i, l)] - 2.0 * q[(i, j)] * q[(k, l)]) / (df + 2.0)
                    };
                }
            }
        }
    }
    MomCovariance { sigma }
}

/// Maximum likelihood for `rho` with `Q` known, over `[0, 1 - 1e-9]`.
pub fn bs_mle_rho(s: &PairSample, q: &OrthogonalMatrix) -> Result<BoundedMle> {
    if q.dim() != s.dim() {
        return Err(Error::domain("Q and sample dimensions differ"));
    }
    let xs: Vec<f64> = s.inner_products(q).into_iter().map(|x| x.clamp(-1.0, 1.0)).collect();
    hprime_mle(&xs, (s.dim() as f64 - 2.0) / 2.0, 0.0, RHO_MAX)
}

/// Density of `T = U'QV`.
pub fn t_density(t: f64, p: &BSParams) -> Result<f64> {
    hprime_density(t, &p.t_law())
}

/// `T = (1 - x^2) / (1 - 2 rho x + rho^2)` with `x = u'Qv`; distributed
/// `Beta((d-1)/2, 1/2)` at the true parameters.
pub fn pivotal_statistic(u: &UnitVector, v: &UnitVector, p: &BSParams) -> Result<f64> {
    check_dims(u, v, p.dim())?;
    let x = u.coords().dot(&(p.q.matrix() * v.coords())).clamp(-1.0, 1.0);
    let rho = p.rho;
    Ok((1.0 - x * x) / (1.0 - 2.0 * rho * x + rho * rho))
}

pub fn pivotal_values(s: &PairSample, p: &BSParams) -> Result<Vec<f64>> {
    s.pairs().iter().map(|(u, v)| pivotal_statistic(u, v, p)).collect()
}

/// Kolmogorov–Smirnov test of the pivotal values against their Beta law.
pub fn pivotal_test(s: &PairSample, p: &BSParams) -> Result<KsResult> {
    let ts = pivotal_values(s, p)?;
    let a = (p.dim() as f64 - 1.0) / 2.0;
    ks_test(&ts, |t| reg_inc_beta(t.clamp(0.0, 1.0), a, 0.5).unwrap_or(f64::NAN))
}

/// One point of a quantile-quantile comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantilePair {
    pub level: f64,
    pub empirical: f64,
    pub theoretical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PivotalReport {
    pub ks: KsResult,
    pub mean: f64,
    /// `(d - 1) / d`, the mean of the reference Beta law.
    pub expected_mean: f64,
    /// Deciles of the pivotal values against the Beta quantiles.
    pub deciles: Vec<QuantilePair>,
}

/// [`pivotal_test`] plus a decile summary against
/// `Beta((d-1)/2, 1/2)`.
pub fn pivotal_report(s: &PairSample, p: &BSParams) -> Result<PivotalReport> {
    let mut ts = pivotal_values(s, p)?;
    let a = (p.dim() as f64 - 1.0) / 2.0;
    let ks = ks_test(&ts, |t| reg_inc_beta(t.clamp(0.0, 1.0), a, 0.5).unwrap_or(f64::NAN))?;
    let mean = ts.iter().sum::<f64>() / ts.len() as f64;
    ts.sort_by(f64::total_cmp);
    let deciles = (1..10)
        .map(|k| {
            let level = k as f64 / 10.0;
            // type-7 sample quantile
            let h = level * (ts.len() - 1) as f64;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(ts.len() - 1);
            let empirical = ts[lo] + (h - lo as f64) * (ts[hi] - ts[lo]);
            Ok(QuantilePair { level, empirical, theoretical: inv_reg_inc_beta(level, a, 0.5)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PivotalReport { ks, mean, expected_mean: 2.0 * a / (2.0 * a + 1.0), deciles })
}

/// Harmonic test functions on the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HarmonicFn {
    /// `x_i` (0-based).
    Coordinate(usize),
    /// `Re (x_1 + i x_2)^k`, `d = 2` only.
    RePower(u32),
    /// `Im (x_1 + i x_2)^k`, `d = 2` only.
    ImPower(u32),
}

impl HarmonicFn {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            HarmonicFn::Coordinate(i) => x[i],
            HarmonicFn::RePower(k) => num_complex::Complex64::new(x[0], x[1]).powu(k).re,
            HarmonicFn::ImPower(k) => num_complex::Complex64::new(x[0], x[1]).powu(k).im,
        }
    }

    fn check(&self, d: usize) -> Result<()> {
        match *self {
            HarmonicFn::Coordinate(i) if i >= d => {
                Err(Error::domain(format!("coordinate {i} out of range for d = {d}")))
            }
            HarmonicFn::RePower(_) | HarmonicFn::ImPower(_) if d != 2 => {
                Err(Error::domain("complex power test functions need d = 2"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicCheck {
    /// Monte Carlo mean of `f(V)` over draws from `V | U = u`.
    pub mean: f64,
    pub std_error: f64,
    /// `f(rho Q'u)`.
    pub expected: f64,
}

/// Monte Carlo estimate of `E{f(V) | U = u}` for a harmonic `f`, next to its
/// value `f(rho Q'u)` at the conditional pole.
pub fn harmonic_conditional_mean_check(
    p: &BSParams,
    f: HarmonicFn,
    u: &UnitVector,
    n: usize,
    rng: &mut RngStream,
) -> Result<HarmonicCheck> {
    f.check(p.dim())?;
    if u.dim() != p.dim() || n < 2 {
        return Err(Error::domain("need a conditioning vector of matching dimension and n >= 2"));
    }
    let cond = p.v_given_u(u);
    let values: Vec<f64> = (0..n).map(|_| f.eval(exit_sample(&cond, rng).as_slice())).collect();
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Ok(HarmonicCheck { mean, std_error: (var / n as f64).sqrt(), expected: f.eval(cond.eta().as_slice()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::quad_1d;
    use std::f64::consts::PI;

    #[test]
    fn density_values() {
        let p0 = BSParams::new(0.0, OrthogonalMatrix::identity(2)).unwrap();
        let u = UnitVector::from_angle(0.4);
        let v = UnitVector::from_angle(2.0);
        assert!((bs_log_density(&u, &v, &p0).unwrap() - (1.0 / (4.0 * PI * PI)).ln()).abs() < 1e-14);
        let q = OrthogonalMatrix::rotation2(0.9, DetSign::Plus);
        let p = BSParams::new(0.5, q.clone()).unwrap();
        let u = q.apply(&v);
        assert!((bs_log_density(&u, &v, &p).unwrap() - (3.0 / (4.0 * PI * PI)).ln()).abs() < 1e-13);
        assert!(bs_log_density(&UnitVector::basis(3, 0), &v, &p).is_err());
    }

    #[test]
    fn conditional_factorization() {
        let mut rng = RngStream::new(1, 0);
        let q = random_orthogonal(4, &mut rng).unwrap();
        let p = BSParams::new(0.65, q).unwrap();
        for _ in 0..20 {
            let u = uniform_sphere_sample(4, &mut rng).unwrap();
            let v = uniform_sphere_sample(4, &mut rng).unwrap();
            let a = bs_log_density(&u, &v, &p).unwrap();
            let b = bs_log_density_conditional(&u, &v, &p).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation2_and_random_orthogonal() {
        assert_eq!(OrthogonalMatrix::rotation2(0.0, DetSign::Plus).matrix(), &DMatrix::identity(2, 2));
        let r = OrthogonalMatrix::rotation2(PI / 2.0, DetSign::Plus);
        let e = r.apply(&UnitVector::basis(2, 0));
        assert!((e.as_slice()[0]).abs() < 1e-15 && (e.as_slice()[1] - 1.0).abs() < 1e-15);
        assert!((OrthogonalMatrix::rotation2(0.3, DetSign::Minus).det() + 1.0).abs() < 1e-15);
        let mut rng = RngStream::new(2, 0);
        let q = random_orthogonal(4, &mut rng).unwrap();
        assert!((q.matrix().transpose() * q.matrix() - DMatrix::identity(4, 4)).norm() <= 1e-10);
        assert!(OrthogonalMatrix::from_row_slice(2, &[1.0, 0.1, 0.0, 1.0]).is_err());
    }

    /// Density of `U'QV` from the kernel:
    /// `A_{d-1} A_{d-2} g(t) (1 - t^2)^{(d-3)/2}`.
    fn t_density_from_kernel(t: f64, rho: f64, d: usize) -> f64 {
        use crate::univariate::sphere::sphere_area;
        let a = sphere_area(d);
        let g = (1.0 - rho * rho) / (a * a * (1.0 - 2.0 * rho * t + rho * rho).powf(d as f64 / 2.0));
        a * sphere_area(d - 1) * g * (1.0 - t * t).powf((d as f64 - 3.0) / 2.0)
    }

    #[test]
    fn t_density_matches_kernel_form() {
        for d in [3usize, 4, 5, 7] {
            let p = BSParams::new(0.5, OrthogonalMatrix::identity(d)).unwrap();
            for &t in &[-0.8, -0.1, 0.3, 0.9] {
                let a = t_density(t, &p).unwrap();
                let b = t_density_from_kernel(t, 0.5, d);
                assert!((a - b).abs() < 1e-12 * b.max(1.0), "d={d} t={t}: {a} vs {b}");
            }
        }
        let p = BSParams::new(0.5, OrthogonalMatrix::identity(3)).unwrap();
        let total = quad_1d(|t| t_density(t, &p).unwrap(), -1.0, 1.0, 1e-12).unwrap();
        assert!((total.value - 1.0).abs() < 1e-10);
        let mean = quad_1d(|t| t * t_density(t, &p).unwrap(), -1.0, 1.0, 1e-12).unwrap();
        assert!((mean.value - 0.5).abs() < 1e-10);
    }

    #[test]
    fn asymptotic_cov_entries() {
        let p = BSParams::new(0.0, OrthogonalMatrix::identity(3)).unwrap();
        assert_eq!(bs_mom_asymptotic_cov(&p).sigma, DMatrix::identity(9, 9));
        let p = BSParams::new(0.6, OrthogonalMatrix::rotation2(0.7, DetSign::Plus)).unwrap();
        let s = bs_mom_asymptotic_cov(&p).sigma;
        for m in 0..4 {
            assert!((s[(m, m)] - (1.0 - 0.36 / 2.0)).abs() < 1e-15);
        }
        assert!((s.clone() - s.transpose()).amax() < 1e-15);
        let p = BSParams::new(0.5, OrthogonalMatrix::identity(3)).unwrap();
        assert!((bs_mom_asymptotic_cov(&p).sigma[(0, 0)] - 0.95).abs() < 1e-15);
    }

    /// For d = 2 the covariance of `d u_i v_j` and `d u_k v_l` can be
    /// computed by quadrature over the torus.
    #[test]
    fn asymptotic_cov_matches_torus_quadrature() {
        use crate::math::quad_torus_2d;
        let q = OrthogonalMatrix::rotation2(0.8, DetSign::Minus);
        let p = BSParams::new(0.45, q.clone()).unwrap();
        let s = bs_mom_asymptotic_cov(&p).sigma;
        let density =
            |a: f64, b: f64| bs_log_density(&UnitVector::from_angle(a), &UnitVector::from_angle(b), &p).unwrap().exp();
        let coord = |t: f64, i: usize| if i == 0 { t.cos() } else { t.sin() };
        for m in 0..4 {
            for n in 0..4 {
                let (i, j, k, l) = (m % 2, m / 2, n % 2, n / 2);
                let e4 = quad_torus_2d(
                    |a, b| 4.0 * coord(a, i) * coord(b, j) * coord(a, k) * coord(b, l) * density(a, b),
                    64,
                );
                let expect = e4 - 0.45 * 0.45 * q.matrix()[(i, j)] * q.matrix()[(k, l)];
                assert!((s[(m, n)] - expect).abs() < 1e-9, "({m},{n}): {} vs {expect}", s[(m, n)]);
            }
        }
    }

    #[test]
    fn mom_estimate_with_aligned_pairs() {
        let mut rng = RngStream::new(5, 0);
        let pairs: Vec<_> = (0..50)
            .map(|_| {
                let v = uniform_sphere_sample(3, &mut rng).unwrap();
                (v.clone(), v)
            })
            .collect();
        let s = PairSample::new(pairs).unwrap();
        let est = bs_mom_estimate(&s).unwrap();
        assert!((est.rho_q.clone() - s.cross_moment() * 3.0).amax() < 1e-15);
        let single = PairSample::new(vec![(UnitVector::basis(2, 0), UnitVector::basis(2, 1))]).unwrap();
        assert!(bs_mom_estimate(&single).is_err());
        let rank1 = PairSample::new(vec![(UnitVector::basis(2, 0), UnitVector::basis(2, 1)); 4]).unwrap();
        assert!(matches!(bs_mom_estimate(&rank1), Err(Error::Estimation(msg)) if msg.contains("rank")));
    }

    #[test]
    fn mle_with_zero_inner_products() {
        let pairs = vec![(UnitVector::basis(3, 0), UnitVector::basis(3, 1)); 10];
        let s = PairSample::new(pairs).unwrap();
        let r = bs_mle_rho(&s, &OrthogonalMatrix::identity(3)).unwrap();
        assert_eq!(r.estimate, 0.0);
    }

    #[test]
    fn pivotal_mean_d2() {
        let p = BSParams::new(0.7, OrthogonalMatrix::rotation2(1.0, DetSign::Plus)).unwrap();
        let mut rng = RngStream::new(6, 0);
        let s = bs_sample(&p, 20_000, &mut rng);
        let ts = pivotal_values(&s, &p).unwrap();
        assert!(ts.iter().all(|&t| t > 0.0 && t < 1.0 + 1e-12));
        let mean = ts.iter().sum::<f64>() / ts.len() as f64;
        // Beta(1/2, 1/2): mean 1/2, variance 1/8
        assert!((mean - 0.5).abs() < 4.0 * (0.125 / ts.len() as f64).sqrt());
    }

    #[test]
    fn harmonic_rejects_mismatched_function() {
        let p = BSParams::new(0.5, OrthogonalMatrix::identity(3)).unwrap();
        let mut rng = RngStream::new(0, 0);
        let u = UnitVector::basis(3, 0);
        assert!(harmonic_conditional_mean_check(&p, HarmonicFn::RePower(2), &u, 10, &mut rng).is_err());
        assert!(harmonic_conditional_mean_check(&p, HarmonicFn::Coordinate(3), &u, 10, &mut rng).is_err());
    }
}
