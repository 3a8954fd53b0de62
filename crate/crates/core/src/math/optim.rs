//! Derivative-free minimization.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    /// Initial simplex edge per coordinate; a single value is broadcast.
    pub step: Vec<f64>,
    /// Stop once every vertex lies within this distance of the best one.
    pub x_tol: f64,
    /// Optional stop on the spread of objective values (0 disables it).
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { step: vec![0.1], x_tol: 1e-8, f_tol: 0.0, max_iter: 20_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
}

struct Counted<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Search { reason: format!("objective returned {v}"), trace: x.to_vec() })
        }
    }
}

/// Nelder–Mead simplex search with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
pub fn nelder_mead(objective: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: &NelderMeadOptions) -> Result<Minimum> {
    let n = x0.len();
    if n == 0 {
        return Err(Error::domain("nelder_mead needs at least one coordinate"));
    }
    let mut f = Counted { f: objective, evaluations: 0 };
    let step = |i: usize| opts.step.get(i).or(opts.step.last()).copied().unwrap_or(0.1);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step(i);
        simplex.push(v);
    }
    let mut values = simplex.iter().map(|v| f.eval(v)).collect::<Result<Vec<_>>>()?;

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..].iter().map(|v| dist(v, &simplex[0])).fold(0.0, f64::max);
        let spread = values[n] - values[0];
        if diameter <= opts.x_tol || (opts.f_tol > 0.0 && spread <= opts.f_tol && diameter <= opts.x_tol.sqrt()) {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect() };

        let reflected = along(1.0);
        let f_r = f.eval(&reflected)?;
        if f_r < values[0] {
            let expanded = along(2.0);
            let f_e = f.eval(&expanded)?;
            if f_e < f_r {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
            continue;
        }
        if f_r < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_r;
            continue;
        }
        let (contracted, threshold) = if f_r < values[n] { (along(0.5), f_r) } else { (along(-0.5), values[n]) };
        let f_c = f.eval(&contracted)?;
        if f_c < threshold {
            simplex[n] = contracted;
            values[n] = f_c;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            for (x, b) in simplex[i].iter_mut().zip(&best) {
                *x = b + 0.5 * (*x - b);
            }
            values[i] = f.eval(&simplex[i])?;
        }
    }

    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Ok(Minimum { x: simplex[best].clone(), value: values[best], converged, iterations, evaluations: f.evaluations })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
/// Returns `(argmin, min)`.
pub fn golden_section_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    let mut best = (x, fx);
    for (p, fp) in [(lo, f(lo)), (hi, f(hi))] {
        if fp < best.1 {
            best = (p, fp);
        }
    }
    best
}
