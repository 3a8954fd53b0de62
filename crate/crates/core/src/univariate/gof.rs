//! Goodness-of-fit statistics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::reg_inc_gamma_upper;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Number of cells after merging sparse neighbours.
    pub cells: usize,
}

/// Asymptotic Kolmogorov tail `2 sum (-1)^{k-1} exp(-2 k^2 n D^2)`.
pub fn kolmogorov_p_value(n_eff: f64, d: f64) -> f64 {
    let t = n_eff * d * d;
    if (n_eff.sqrt() * d) < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * t).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-12 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test against a continuous distribution
/// function.
pub fn ks_test(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    if sample.is_empty() {
        return Err(Error::domain("KS test needs a non-empty sample"));
    }
    let mut xs = sample.to_vec();
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("KS test sample contains NaN"));
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(KsResult { statistic: d, p_value: kolmogorov_p_value(n, d), n: xs.len() })
}

/// Two-sample Kolmogorov–Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("two-sample KS test needs two non-empty samples"));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(KsResult { statistic: d, p_value: kolmogorov_p_value(n * m / (n + m), d), n: xs.len() + ys.len() })
}

/// Pearson chi-square test of observed counts against expected counts.
///
/// Adjacent cells are merged until every expected count is at least 5.
/// `fitted` is the number of estimated parameters subtracted from the
/// degrees of freedom.
pub fn chi_square_test(observed: &[f64], expected: &[f64], fitted: usize) -> Result<ChiSquareResult> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(Error::domain("chi-square test needs equally long, non-empty count vectors"));
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        o_acc += o;
        e_acc += e;
        if e_acc >= 5.0 {
            cells.push((o_acc, e_acc));
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 || o_acc > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o_acc;
                last.1 += e_acc;
            }
            None => cells.push((o_acc, e_acc)),
        }
    }
    if cells.len() < fitted + 2 {
        return Err(Error::domain("too few populated cells for a chi-square test"));
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let df = cells.len() - 1 - fitted;
    let p_value = reg_inc_gamma_upper(df as f64 / 2.0, statistic / 2.0)?;
    Ok(ChiSquareResult { statistic, df, p_value, cells: cells.len() })
}

/// Histogram counts of `values` on `bins` equal-width cells of `[lo, hi)`;
/// values outside are clamped into the end cells.
pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut counts = vec![0.0; bins];
    let w = (hi - lo) / bins as f64;
    for &v in values {
        let k = (((v - lo) / w).floor().max(0.0) as usize).min(bins - 1);
        counts[k] += 1.0;
    }
    counts
}
