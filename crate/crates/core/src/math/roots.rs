//! Bracketed root finding.

use crate::error::{Error, Result};

const MAX_ITER: usize = 300;

/// Brent's method: bisection safeguarded secant / inverse quadratic steps.
///
/// Returns a point whose bracket is at most `tol` wide (or where `f` is
/// exactly zero). `f(lo)` and `f(hi)` must differ in sign.
pub fn find_root(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || (fa > 0.0) == (fb > 0.0) {
        return Err(Error::Bracket { lo, hi, f_lo: fa, f_hi: fb });
    }
    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Bracket { lo, hi, f_lo: fa, f_hi: fb });
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn linear_root() {
        assert!((find_root(|x| x - 1.0, 0.0, 2.0, 1e-14).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cosine_root() {
        let r = find_root(f64::cos, 0.0, PI, 1e-14).unwrap();
        assert!((r - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn flat_tail_root() {
        // root of a very flat cubic
        let r = find_root(|x: f64| (x - 0.3).powi(3), 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 0.3).abs() < 1e-4);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10), Err(Error::Bracket { .. })));
    }
}
