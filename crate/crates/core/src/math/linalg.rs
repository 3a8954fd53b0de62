//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const MAX_POWER_ITER: usize = 1_000_000;

/// Largest eigenvalue of a symmetric matrix by power iteration.
///
/// The matrix is shifted by its infinity norm so the spectrum is
/// non-negative, making the wanted eigenvalue the dominant one. Iteration
/// stops when the Rayleigh quotient changes by at most `1e-12`.
pub fn top_eigenvalue_sym(m: &DMatrix<f64>) -> Result<f64> {
    let d = m.nrows();
    if d == 0 || m.ncols() != d {
        return Err(Error::domain("top_eigenvalue_sym needs a non-empty square matrix"));
    }
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    for i in 0..d {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-10 * scale {
                return Err(Error::domain("top_eigenvalue_sym needs a symmetric matrix"));
            }
        }
    }
    let shift = (0..d).map(|i| (0..d).map(|j| m[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max);
    let shifted = m + DMatrix::identity(d, d) * shift;

    let mut x = nalgebra::DVector::from_fn(d, |i, _| 1.0 + 0.137 * i as f64);
    x /= x.norm();
    let mut lambda = f64::NAN;
    for _ in 0..MAX_POWER_ITER {
        let y = &shifted * &x;
        let next = x.dot(&y);
        let norm = y.norm();
        if norm == 0.0 {
            return Ok(-shift);
        }
        x = y / norm;
        if (next - lambda).abs() <= 1e-12 * next.abs().max(1.0) {
            return Ok(next - shift);
        }
        lambda = next;
    }
    Ok(lambda - shift)
}

/// Nearest orthogonal matrix (orthogonal polar factor) by Newton's iteration
/// `X <- (X + X^{-T}) / 2`. `None` if the input is singular.
pub fn polar_orthogonal(a: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let mut x = a.clone();
    for _ in 0..100 {
        let inv_t = x.clone().try_inverse()?.transpose();
        let next = (&x + inv_t) * 0.5;
        let delta = (&next - &x).norm();
        x = next;
        if delta <= 1e-14 * (a.nrows() as f64) {
            break;
        }
    }
    Some(x)
}
