//! Numerical building blocks shared by every model.

pub mod linalg;
pub mod optim;
pub mod quad;
pub mod rng;
pub mod roots;
pub mod special;

pub use linalg::top_eigenvalue_sym;
pub use optim::{golden_section_min, nelder_mead, Minimum, NelderMeadOptions};
pub use quad::{quad_1d, quad_torus_2d, QuadratureResult};
pub use rng::RngStream;
pub use roots::find_root;
pub use special::{bessel_i0, beta_fn, log_bessel_i0, log_gamma, reg_inc_beta, reg_inc_gamma_upper};

use std::f64::consts::TAU;

/// Reduce an angle to `[0, 2*pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}
