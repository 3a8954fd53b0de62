//! Generative check of the pair laws by direct simulation of Brownian paths.
//!
//! A path starts at `start` inside the sphere of radius `rho`. Its first exit
//! direction from that sphere, rotated by `Q`, gives `u`; its first exit
//! point from the unit sphere gives `v`. Paths are Euler discretized with
//! `sqrt(dt)` Gaussian increments, and each crossing is located on the
//! segment between the last inside point and the first outside point.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::bs::{bs_log_density, BSParams, OrthogonalMatrix, PairSample};
use crate::error::{Error, Result};
use crate::extended::shifted::{shifted_log_density, shifted_sample, ShiftedParams};
use crate::math::rng::stream_id;
use crate::math::{wrap_angle, RngStream};
use crate::univariate::exit::exit_sample;
use crate::univariate::gof::{chi_square_test, histogram, ks_test, ks_two_sample, ChiSquareResult, KsResult};
use crate::univariate::hprime::hprime_cdf;
use crate::univariate::sphere::UnitVector;
use crate::univariate::wrapped_cauchy::{wrapped_cauchy_cdf, WrappedCauchyParams};

/// Mean overshoot of a Gaussian random walk over a flat barrier, in units of
/// the step standard deviation: `-zeta(1/2) / sqrt(2 pi)`.
pub const OVERSHOOT_CONSTANT: f64 = 0.582_597_157_939_010_7;

/// Stream tags keep the path randomness apart from every reference sampler.
const PATH_TAG: u64 = 0x0b10_7a7e;
const COUPLED_TAG: u64 = 0x0b10_7a7f;
const REFERENCE_TAG: u64 = 0x5eed_0f2e;

#[derive(Debug, Clone, PartialEq)]
pub struct PathConfig {
    rho: f64,
    q: OrthogonalMatrix,
    start: DVector<f64>,
    dt: f64,
    max_steps: u64,
}

impl PathConfig {
    /// `0 < dt <= 1e-3`, `|start| < rho < 1`. The step cap defaults to
    /// 200 times the expected number of steps to reach the unit sphere.
    pub fn new(rho: f64, q: OrthogonalMatrix, start: DVector<f64>, dt: f64) -> Result<Self> {
        let d = q.dim();
        if start.len() != d {
            return Err(Error::domain(format!("start has length {}, Q is {d}x{d}", start.len())));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::domain(format!("inner radius must lie in (0, 1), got {rho}")));
        }
        if !(start.norm() < rho) {
            return Err(Error::domain(format!("start point needs |start| < rho, got {}", start.norm())));
        }
        if !(dt > 0.0 && dt <= 1e-3) {
            return Err(Error::domain(format!("step size must lie in (0, 1e-3], got {dt}")));
        }
        let expected = (1.0 - start.norm_squared()) / d as f64 / dt;
        let max_steps = (200.0 * expected).ceil().max(1e5) as u64;
        Ok(Self { rho, q, start, dt, max_steps })
    }

    /// Centered start with `Q = I`.
    pub fn centered(d: usize, rho: f64, dt: f64) -> Result<Self> {
        Self::new(rho, OrthogonalMatrix::identity(d), DVector::zeros(d), dt)
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(self.rho, self.q.clone(), self.start.clone(), dt)
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn q(&self) -> &OrthogonalMatrix {
        &self.q
    }

    pub fn start(&self) -> &DVector<f64> {
        &self.start
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn max_steps(&self) -> u64 {
        self.max_steps
    }

    fn is_centered(&self) -> bool {
        self.start.iter().all(|&x| x == 0.0)
    }

    /// Closed-form law of the simulated pairs when the walk is exact.
    pub fn model(&self) -> Result<ModelLaw> {
        if self.is_centered() {
            Ok(ModelLaw::Centered(BSParams::new(self.rho, self.q.clone())?))
        } else {
            Ok(ModelLaw::Shifted(ShiftedParams::new(self.rho, self.q.clone(), self.start.clone())?))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelLaw {
    Centered(BSParams),
    Shifted(ShiftedParams),
}

impl ModelLaw {
    pub fn log_density(&self, u: &UnitVector, v: &UnitVector) -> Result<f64> {
        match self {
            ModelLaw::Centered(p) => bs_log_density(u, v, p),
            ModelLaw::Shifted(p) => shifted_log_density(u, v, p),
        }
    }
}

/// State of one discretized path.
#[derive(Debug, Clone)]
struct Walker {
    x: Vec<f64>,
    prev: Vec<f64>,
    /// Exit point from the inner sphere, once reached.
    inner: Option<Vec<f64>>,
    outer: Option<Vec<f64>>,
}

impl Walker {
    fn new(start: &[f64]) -> Self {
        Self { x: start.to_vec(), prev: start.to_vec(), inner: None, outer: None }
    }

    fn done(&self) -> bool {
        self.outer.is_some()
    }

    /// Largest `s` in `[0, 1]` with `|a + s (b - a)| = r`, given `|a| < r <= |b|`.
    fn crossing(a: &[f64], b: &[f64], r: f64) -> Vec<f64> {
        let (mut aa, mut ab, mut bb) = (0.0, 0.0, 0.0);
        for (x, y) in a.iter().zip(b) {
            let h = y - x;
            aa += x * x;
            ab += x * h;
            bb += h * h;
        }
        // |a|^2 + 2 s a.h + s^2 |h|^2 = r^2 has one root in (0, 1]
        let c = aa - r * r;
        let disc = (ab * ab - bb * c).max(0.0);
        let s = ((-ab + disc.sqrt()) / bb).clamp(0.0, 1.0);
        let p: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect();
        let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        p.into_iter().map(|v| v / n).collect()
    }

    fn step(&mut self, incr: &[f64], rho: f64) {
        self.prev.copy_from_slice(&self.x);
        for (x, dx) in self.x.iter_mut().zip(incr) {
            *x += dx;
        }
        let r2: f64 = self.x.iter().map(|v| v * v).sum();
        if self.inner.is_none() {
            if r2 < rho * rho {
                return;
            }
            self.inner = Some(Self::crossing(&self.prev, &self.x, rho));
            if r2 >= 1.0 {
                // both spheres crossed within one step; the outer crossing
                // is located on the part of the segment past the inner one
                let from: Vec<f64> = self.inner.as_ref().unwrap().iter().map(|v| v * rho).collect();
                self.outer = Some(Self::crossing(&from, &self.x, 1.0));
            }
        } else if r2 >= 1.0 {
            self.outer = Some(Self::crossing(&self.prev, &self.x, 1.0));
        }
    }

    fn finish(self, q: &OrthogonalMatrix) -> Result<(UnitVector, UnitVector)> {
        let inner = self.inner.ok_or_else(|| Error::Simulation("path has no inner exit".into()))?;
        let outer = self.outer.ok_or_else(|| Error::Simulation("path has no outer exit".into()))?;
        let w = DVector::from_vec(inner);
        let u = UnitVector::normalize(q.matrix() * w)?;
        let v = UnitVector::normalize(DVector::from_vec(outer))?;
        Ok((u, v))
    }
}

/// One path, returning `(Q * inner exit direction, outer exit point)`.
pub fn simulate_exit_pair(cfg: &PathConfig, rng: &mut RngStream) -> Result<(UnitVector, UnitVector)> {
    let d = cfg.dim();
    let sd = cfg.dt.sqrt();
    let mut walker = Walker::new(cfg.start.as_slice());
    let mut incr = vec![0.0; d];
    let mut steps = 0u64;
    while !walker.done() {
        if steps == cfg.max_steps {
            return Err(Error::Simulation(format!(
                "path did not reach the unit sphere within {} steps",
                cfg.max_steps
            )));
        }
        for v in incr.iter_mut() {
            *v = sd * rng.gaussian();
        }
        walker.step(&incr, cfg.rho);
        steps += 1;
    }
    walker.finish(&cfg.q)
}

/// `n` independent paths, path `i` driven by stream `(seed, i)`.
pub fn simulate_exit_pairs(cfg: &PathConfig, n: usize, seed: u64) -> Result<PairSample> {
    let pairs = (0..n)
        .into_par_iter()
        .map(|i| simulate_exit_pair(cfg, &mut RngStream::new(seed, stream_id(&[PATH_TAG, i as u64]))))
        .collect::<Result<Vec<_>>>()?;
    PairSample::new(pairs)
}

/// Coupled coarse/fine paths: every coarse increment is the sum of
/// `refine` consecutive fine increments of the same Brownian path.
fn simulate_coupled(cfg: &PathConfig, refine: usize, rng: &mut RngStream) -> Result<[(UnitVector, UnitVector); 2]> {
    let d = cfg.dim();
    let sd = (cfg.dt / refine as f64).sqrt();
    let mut coarse = Walker::new(cfg.start.as_slice());
    let mut fine = coarse.clone();
    let mut incr = vec![0.0; d];
    let mut sum = vec![0.0; d];
    let mut steps = 0u64;
    while !(coarse.done() && fine.done()) {
        if steps == cfg.max_steps {
            return Err(Error::Simulation(format!(
                "coupled path did not finish within {} coarse steps",
                cfg.max_steps
            )));
        }
        sum.iter_mut().for_each(|v| *v = 0.0);
        for _ in 0..refine {
            for (v, s) in incr.iter_mut().zip(sum.iter_mut()) {
                *v = sd * rng.gaussian();
                *s += *v;
            }
            if !fine.done() {
                fine.step(&incr, cfg.rho);
            }
        }
        if !coarse.done() {
            coarse.step(&sum, cfg.rho);
        }
        steps += 1;
    }
    Ok([coarse.finish(&cfg.q)?, fine.finish(&cfg.q)?])
}

/// Discretization bias of `mean(u'Qv)` measured as the shift between step
/// sizes `dt` and `dt/4` on coupled paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasCheck {
    pub dt_coarse: f64,
    pub dt_fine: f64,
    pub paths: usize,
    pub mean_coarse: f64,
    pub mean_fine: f64,
    /// `mean_fine - mean_coarse`.
    pub shift: f64,
    pub shift_std_error: f64,
    /// Shift predicted by the overshoot model
    /// `bias(dt) = c (1 - rho) / (1 + c)` with `c = 0.5826 sqrt(dt)`.
    pub predicted_shift: f64,
    /// `|shift| <= 2 |predicted_shift| + 3 shift_std_error`.
    pub pass: bool,
}

/// Overshoot model for the bias of `mean(u'Qv)` at step size `dt`.
pub fn predicted_bias(rho: f64, dt: f64) -> f64 {
    let c = OVERSHOOT_CONSTANT * dt.sqrt();
    (rho + c) / (1.0 + c) - rho
}

pub fn discretization_bias(cfg: &PathConfig, paths: usize, seed: u64) -> Result<BiasCheck> {
    if paths < 2 {
        return Err(Error::domain("bias check needs at least two paths"));
    }
    let q = cfg.q.matrix();
    let diffs = (0..paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, stream_id(&[COUPLED_TAG, i as u64]));
            let [(uc, vc), (uf, vf)] = simulate_coupled(cfg, 4, &mut rng)?;
            let xc = uc.coords().dot(&(q * vc.coords()));
            let xf = uf.coords().dot(&(q * vf.coords()));
            Ok((xc, xf))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = paths as f64;
    let mean_coarse = diffs.iter().map(|d| d.0).sum::<f64>() / n;
    let mean_fine = diffs.iter().map(|d| d.1).sum::<f64>() / n;
    let shift = mean_fine - mean_coarse;
    let var = diffs.iter().map(|d| (d.1 - d.0 - shift).powi(2)).sum::<f64>() / (n - 1.0);
    let shift_std_error = (var / n).sqrt();
    let predicted_shift = predicted_bias(cfg.rho, cfg.dt / 4.0) - predicted_bias(cfg.rho, cfg.dt);
    let pass = shift.abs() <= 2.0 * predicted_shift.abs() + 3.0 * shift_std_error;
    Ok(BiasCheck {
        dt_coarse: cfg.dt,
        dt_fine: cfg.dt / 4.0,
        paths,
        mean_coarse,
        mean_fine,
        shift,
        shift_std_error,
        predicted_shift,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Bins of the `u'Qv` histogram (equal probability under the model).
    pub inner_product_bins: usize,
    /// Bins per axis of the angular grid (d = 2 only).
    pub angular_bins: usize,
    /// Size of Monte Carlo reference samples, as a multiple of `n`.
    pub reference_factor: usize,
    /// Paths for the coupled bias check; 0 skips it.
    pub bias_paths: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { inner_product_bins: 40, angular_bins: 12, reference_factor: 4, bias_paths: 2000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub d: usize,
    pub rho: f64,
    pub start: Vec<f64>,
    pub dt: f64,
    pub paths: usize,
    pub mean_inner_product: f64,
    pub mean_std_error: f64,
    /// `E(u'Qv) = rho` for every start point.
    pub expected_mean: f64,
    /// `u'Qv` against the `H'(rho, (d-2)/2)` law (centered start) or against
    /// a reference sample of the closed-form model (shifted start).
    pub ks_inner_product: KsResult,
    /// Histogram of `u'Qv` against the `H'` law; centered start only.
    pub chi2_inner_product: Option<ChiSquareResult>,
    /// Joint angular histogram against the model density; d = 2 only.
    pub chi2_angular: Option<ChiSquareResult>,
    /// Law of `v` against `Exit_d(start)`.
    pub ks_v_marginal: KsResult,
    pub bias: Option<BiasCheck>,
}

/// Simulate `n` paths and compare them with the closed-form model.
pub fn oracle_compare(cfg: &PathConfig, n: usize, rng: &mut RngStream) -> Result<OracleReport> {
    oracle_compare_with(cfg, n, rng, &OracleOptions::default())
}

pub fn oracle_compare_with(
    cfg: &PathConfig,
    n: usize,
    rng: &mut RngStream,
    opts: &OracleOptions,
) -> Result<OracleReport> {
    if n < 10 {
        return Err(Error::domain("the oracle needs at least 10 paths"));
    }
    let seed = rng.seed();
    let sample = simulate_exit_pairs(cfg, n, seed)?;
    let model = cfg.model()?;
    let q = cfg.q.matrix();
    let xs: Vec<f64> = sample.pairs().iter().map(|(u, v)| u.coords().dot(&(q * v.coords()))).collect();
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);

    let mut reference_rng = RngStream::new(seed, stream_id(&[REFERENCE_TAG, 0]));
    let n_ref = opts.reference_factor.max(1) * n;
    let (ks_inner_product, chi2_inner_product) = match &model {
        ModelLaw::Centered(p) => {
            let law = p.t_law();
            let pit = xs.iter().map(|&x| hprime_cdf(x, &law)).collect::<Result<Vec<_>>>()?;
            let ks = ks_test(&pit, |u| u.clamp(0.0, 1.0))?;
            let bins = opts.inner_product_bins.max(2);
            let observed = histogram(&pit, 0.0, 1.0, bins);
            let expected = vec![nf / bins as f64; bins];
            (ks, Some(chi_square_test(&observed, &expected, 0)?))
        }
        ModelLaw::Shifted(p) => {
            let reference = shifted_sample(p, n_ref, &mut reference_rng);
            let ys: Vec<f64> = reference.pairs().iter().map(|(u, v)| u.coords().dot(&(q * v.coords()))).collect();
            (ks_two_sample(&xs, &ys)?, None)
        }
    };

    let chi2_angular =
        if cfg.dim() == 2 { Some(angular_chi_square(&sample, &model, opts.angular_bins.max(2))?) } else { None };

    let v_law = crate::univariate::exit::ExitParams::new(cfg.start.clone())?;
    let ks_v_marginal = if cfg.dim() == 2 {
        let phi = num_complex::Complex64::new(cfg.start[0], cfg.start[1]);
        let wc = WrappedCauchyParams::new(phi)?;
        let angles: Vec<f64> = sample.pairs().iter().map(|(_, v)| wrap_angle(v.angle())).collect();
        ks_test(&angles, |t| wrapped_cauchy_cdf(t, &wc))?
    } else {
        let first: Vec<f64> = sample.pairs().iter().map(|(_, v)| v.coords()[0]).collect();
        let reference: Vec<f64> = (0..n_ref).map(|_| exit_sample(&v_law, &mut reference_rng).coords()[0]).collect();
        ks_two_sample(&first, &reference)?
    };

    let bias = if opts.bias_paths >= 2 { Some(discretization_bias(cfg, opts.bias_paths, seed)?) } else { None };

    Ok(OracleReport {
        d: cfg.dim(),
        rho: cfg.rho,
        start: cfg.start.iter().copied().collect(),
        dt: cfg.dt,
        paths: n,
        mean_inner_product: mean,
        mean_std_error: (var / nf).sqrt(),
        expected_mean: cfg.rho,
        ks_inner_product,
        chi2_inner_product,
        chi2_angular,
        ks_v_marginal,
        bias,
    })
}

/// Pearson test on a `bins x bins` grid of `(arg u, arg v)`, with cell
/// probabilities from an 8 x 8 midpoint rule on the model density.
fn angular_chi_square(sample: &PairSample, model: &ModelLaw, bins: usize) -> Result<ChiSquareResult> {
    let w = TAU / bins as f64;
    let sub = 8;
    let h = w / sub as f64;
    let mut expected = vec![0.0; bins * bins];
    for i in 0..bins {
        for j in 0..bins {
            let mut acc = 0.0;
            for a in 0..sub {
                let u = UnitVector::from_angle(i as f64 * w + (a as f64 + 0.5) * h);
                for b in 0..sub {
                    let v = UnitVector::from_angle(j as f64 * w + (b as f64 + 0.5) * h);
                    acc += model.log_density(&u, &v)?.exp();
                }
            }
            expected[i * bins + j] = acc * h * h * sample.len() as f64;
        }
    }
    let mut observed = vec![0.0; bins * bins];
    for (u, v) in sample.pairs() {
        let i = ((wrap_angle(u.angle()) / w) as usize).min(bins - 1);
        let j = ((wrap_angle(v.angle()) / w) as usize).min(bins - 1);
        observed[i * bins + j] += 1.0;
    }
    chi_square_test(&observed, &expected, 0)
}
