//! Finite-sample comparison of the moment and maximum likelihood estimators
//! of the `BC+` dependence parameter.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

use crate::bc::{bc_mle_estimate, bc_mom_estimate, bc_sample, BCParams, DetSign};
use crate::error::{Error, Result};
use crate::math::rng::stream_id;
use crate::math::RngStream;

pub const STANDARD_SIZES: [usize; 5] = [10, 20, 30, 50, 100];
pub const STANDARD_PSI: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyGrid {
    sizes: Vec<usize>,
    psis: Vec<f64>,
    replicates: usize,
    seed: u64,
}

impl StudyGrid {
    pub fn new(sizes: Vec<usize>, psis: Vec<f64>, replicates: usize, seed: u64) -> Result<Self> {
        if replicates == 0 {
            return Err(Error::domain("a study needs at least one replicate"));
        }
        if sizes.is_empty() || psis.is_empty() {
            return Err(Error::domain("a study needs at least one sample size and one psi value"));
        }
        if let Some(&n) = sizes.iter().find(|&&n| n < 2) {
            return Err(Error::domain(format!("sample sizes must be at least 2, got {n}")));
        }
        if let Some(&p) = psis.iter().find(|p| !(p.abs() < 1.0)) {
            return Err(Error::domain(format!("psi values must satisfy |psi| < 1, got {p}")));
        }
        Ok(Self { sizes, psis, replicates, seed })
    }

    /// Sizes 10, 20, 30, 50, 100 against psi 0.1, 0.3, 0.5, 0.7, 0.9.
    pub fn standard(replicates: usize, seed: u64) -> Result<Self> {
        Self::new(STANDARD_SIZES.to_vec(), STANDARD_PSI.to_vec(), replicates, seed)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn psis(&self) -> &[f64] {
        &self.psis
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyCell {
    pub n: usize,
    pub psi: f64,
    pub mse_mom: f64,
    pub mse_mle: f64,
    /// `mse_mom / mse_mle`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyTable {
    pub grid: StudyGrid,
    /// Row-major: one row per sample size, one column per psi.
    pub cells: Vec<StudyCell>,
    /// Large-sample ratio `1 / (1 - |psi|^2)` per psi.
    pub analytic: Vec<f64>,
}

/// Limit of the ratio as `n -> infinity`: the moment estimator has
/// asymptotic variance `(1 - |psi|^2) / 2` per coordinate and the MLE
/// `(1 - |psi|^2)^2 / 2`.
pub fn analytic_ratio(psi: f64) -> f64 {
    1.0 / (1.0 - psi * psi)
}

/// Squared errors of both estimators on one simulated sample.
fn replicate(n: usize, psi: f64, rng: &mut RngStream) -> Result<(f64, f64)> {
    let p = BCParams::new(Complex64::new(psi, 0.0), DetSign::Plus)?;
    let s = bc_sample(&p, n, rng);
    let mom = bc_mom_estimate(&s, DetSign::Plus)?;
    let mle = bc_mle_estimate(&s, DetSign::Plus)?.phi;
    Ok(((mom - p.psi()).norm_sqr(), (mle - p.psi()).norm_sqr()))
}

/// Run every cell. Replicate `r` of cell `(i, j)` draws from stream
/// `stream_id([i, j, r])` under the grid seed, and sums are accumulated in
/// replicate order, so the table does not depend on the thread count.
pub fn run_study(grid: &StudyGrid) -> Result<StudyTable> {
    let mut cells = Vec::with_capacity(grid.sizes.len() * grid.psis.len());
    for (i, &n) in grid.sizes.iter().enumerate() {
        for (j, &psi) in grid.psis.iter().enumerate() {
            let errs = (0..grid.replicates)
                .into_par_iter()
                .map(|r| {
                    let mut rng = RngStream::new(grid.seed, stream_id(&[i as u64, j as u64, r as u64]));
                    replicate(n, psi, &mut rng)
                })
                .collect::<Result<Vec<_>>>()?;
            let m = grid.replicates as f64;
            let mse_mom = errs.iter().map(|e| e.0).sum::<f64>() / m;
            let mse_mle = errs.iter().map(|e| e.1).sum::<f64>() / m;
            cells.push(StudyCell { n, psi, mse_mom, mse_mle, ratio: mse_mom / mse_mle });
        }
    }
    let analytic = grid.psis.iter().map(|&p| analytic_ratio(p)).collect();
    Ok(StudyTable { grid: grid.clone(), cells, analytic })
}

impl StudyTable {
    pub fn cell(&self, size_index: usize, psi_index: usize) -> &StudyCell {
        &self.cells[size_index * self.grid.psis.len() + psi_index]
    }

    /// Header `n,<psi_1>,...`, one row per size, then the `inf` row.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("n");
        for p in &self.grid.psis {
            write!(out, ",{p}").unwrap();
        }
        out.push('\n');
        for (i, n) in self.grid.sizes.iter().enumerate() {
            out.push_str(&n.to_string());
            for j in 0..self.grid.psis.len() {
                write!(out, ",{:.*}", digits, self.cell(i, j).ratio).unwrap();
            }
            out.push('\n');
        }
        out.push_str("inf");
        for a in &self.analytic {
            write!(out, ",{:.*}", digits, a).unwrap();
        }
        out.push('\n');
        out
    }
}
