//! One-dimensional laws and laws on a single sphere.

pub mod cauchy;
pub mod exit;
pub mod gof;
pub mod hprime;
pub mod sphere;
pub mod von_mises;
pub mod wrapped_cauchy;

pub use cauchy::{real_cauchy_cdf, real_cauchy_density, RealCauchyParams};
pub use exit::{exit_density, exit_sample, ExitParams};
pub use gof::{chi_square_test, ks_test, ks_two_sample, ChiSquareResult, KsResult};
pub use hprime::{hprime_cdf, hprime_density, hprime_mle, hprime_sample, HPrimeParams};
pub use sphere::{sphere_area, uniform_sphere_sample, UnitVector};
pub use von_mises::{von_mises_cdf, von_mises_density, von_mises_quantile, VonMisesParams};
pub use wrapped_cauchy::{
    mobius_unit, wrapped_cauchy_cdf, wrapped_cauchy_density, wrapped_cauchy_mle, wrapped_cauchy_sample,
    WrappedCauchyFit, WrappedCauchyParams,
};
