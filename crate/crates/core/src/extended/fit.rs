//! Likelihood fitting helpers and information-criterion model ranking.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::special::bessel_a1;
use crate::math::{find_root, nelder_mead, wrap_angle, NelderMeadOptions, RngStream};

/// Outcome of a maximum likelihood fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: String,
    /// Named estimates on the natural scale.
    pub params: Vec<(String, f64)>,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    /// Number of free parameters.
    pub k: usize,
    pub n: usize,
    pub converged: bool,
    pub iterations: usize,
    /// Log-likelihood at the moment-based starting point.
    pub init_loglik: f64,
}

impl FitResult {
    /// A result carrying only the likelihood summary.
    pub fn from_loglik(model: impl Into<String>, loglik: f64, k: usize, n: usize) -> Self {
        Self {
            model: model.into(),
            params: Vec::new(),
            loglik,
            aic: aic(loglik, k),
            bic: bic(loglik, k, n),
            k,
            n,
            converged: true,
            iterations: 0,
            init_loglik: loglik,
        }
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

/// `2k - 2 logL`.
pub fn aic(loglik: f64, k: usize) -> f64 {
    2.0 * k as f64 - 2.0 * loglik
}

/// `k ln n - 2 logL`.
pub fn bic(loglik: f64, k: usize, n: usize) -> f64 {
    k as f64 * (n as f64).ln() - 2.0 * loglik
}

/// Typed parameters together with the fit summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Fitted<P> {
    pub params: P,
    pub result: FitResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedFit {
    pub model: String,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub k: usize,
    pub aic_rank: usize,
    pub bic_rank: usize,
}

/// Rank fits by AIC (ties go to the model with fewer parameters) and report
/// the BIC rank alongside.
pub fn model_select(fits: &[FitResult]) -> Result<Vec<RankedFit>> {
    let Some(first) = fits.first() else {
        return Err(Error::domain("no fits to rank"));
    };
    if fits.iter().any(|f| f.n != first.n) {
        return Err(Error::domain("all fits must use the same sample size"));
    }
    let order_by = |key: fn(&FitResult) -> f64| {
        let mut idx: Vec<usize> = (0..fits.len()).collect();
        idx.sort_by(|&a, &b| key(&fits[a]).total_cmp(&key(&fits[b])).then(fits[a].k.cmp(&fits[b].k)));
        idx
    };
    let by_aic = order_by(|f| f.aic);
    let by_bic = order_by(|f| f.bic);
    Ok(by_aic
        .iter()
        .enumerate()
        .map(|(rank, &i)| {
            let f = &fits[i];
            RankedFit {
                model: f.model.clone(),
                loglik: f.loglik,
                aic: f.aic,
                bic: f.bic,
                k: f.k,
                aic_rank: rank + 1,
                bic_rank: by_bic.iter().position(|&j| j == i).unwrap_or(0) + 1,
            }
        })
        .collect())
}

/// Circular mean direction in `[0, 2pi)` and mean resultant length.
pub fn circular_mean(angles: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let (mut s, mut n) = (Complex64::new(0.0, 0.0), 0usize);
    for a in angles {
        s += Complex64::from_polar(1.0, a);
        n += 1;
    }
    if n == 0 {
        return (0.0, 0.0);
    }
    let m = s / n as f64;
    (wrap_angle(m.arg()), m.norm())
}

/// Solve `I_1(kappa) / I_0(kappa) = r` (von Mises concentration from a
/// mean resultant length), capped at 500.
pub fn inverse_a1(r: f64) -> f64 {
    if r <= 1e-8 {
        return 0.0;
    }
    let cap = 500.0;
    if r >= bessel_a1(cap) {
        return cap;
    }
    find_root(|k| bessel_a1(k) - r, 0.0, cap, 1e-12).unwrap_or(cap)
}

pub(crate) struct SearchOutcome {
    pub x: Vec<f64>,
    pub loglik: f64,
    pub init_loglik: f64,
    pub converged: bool,
    pub iterations: usize,
}

pub(crate) const FIT_STARTS: usize = 5;

/// Maximize `loglik` from `x0` and `FIT_STARTS - 1` jittered copies of it.
/// Non-finite objective values are treated as very poor fits.
pub(crate) fn multi_start(loglik: impl Fn(&[f64]) -> f64, x0: &[f64], jitter: f64) -> Result<SearchOutcome> {
    let nll = |x: &[f64]| {
        let l = loglik(x);
        if l.is_finite() {
            -l
        } else {
            1e300
        }
    };
    let init_loglik = loglik(x0);
    if !init_loglik.is_finite() {
        return Err(Error::Estimation("log-likelihood is not finite at the starting point".into()));
    }
    let opts = NelderMeadOptions { step: vec![0.25], x_tol: 1e-7, f_tol: 1e-10, max_iter: 4000 };
    let mut rng = RngStream::new(0x6a09_e667, x0.len() as u64);
    let mut best: Option<SearchOutcome> = None;
    let mut iterations = 0;
    for start in 0..FIT_STARTS {
        let x = if start == 0 {
            x0.to_vec()
        } else {
            x0.iter().map(|v| v + jitter * (2.0 * rng.uniform() - 1.0)).collect()
        };
        let m = nelder_mead(nll, &x, &opts)?;
        iterations += m.iterations;
        let l = -m.value;
        if best.as_ref().is_none_or(|b| l > b.loglik) {
            best = Some(SearchOutcome { x: m.x, loglik: l, init_loglik, converged: m.converged, iterations: 0 });
        }
    }
    let mut out = best.expect("at least one start");
    out.iterations = iterations;
    Ok(out)
}

pub(crate) fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

pub(crate) fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-6, 1.0 - 1e-6);
    (p / (1.0 - p)).ln()
}
