//! Bivariate distributions for pairs of unit vectors whose dependence comes
//! from the exit points of a single Brownian path.
//!
//! A particle started inside the unit ball of `R^d` first crosses the sphere
//! of radius `rho` and later the unit sphere. The (rotated) direction of the
//! first crossing and the position of the second form a pair `(U, V)` with
//! uniform marginals and harmonic-measure ("exit") conditionals. This crate
//! provides densities, exact samplers, estimators and goodness-of-fit tools
//! for that family in general dimension ([`bs`]), its complex-form circular
//! case ([`bc`]), several generalizations and comparison models
//! ([`extended`]), and an independent path simulator ([`oracle`]) that checks
//! the closed forms generatively.
//!
//! Numerical plumbing (special functions, quadrature, root finding, simplex
//! search, the seedable RNG) lives in [`math`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bc;
pub mod bs;
pub mod dataset;
pub mod error;
pub mod extended;
pub mod math;
pub mod oracle;
pub mod study;
pub mod univariate;

pub use error::{Error, Result};
pub use math::rng::RngStream;
pub use num_complex::Complex64;

pub use bc::{BCParams, CirclePairSample, DetSign};
pub use bs::{BSParams, OrthogonalMatrix, PairSample};
pub use dataset::{AngleDataset, AngleUnit};
pub use extended::{
    FitResult, MobiusMarginalParams, SenGuptaParams, ShiehJohnsonParams, ShiftedParams, VMCopulaParams,
};
pub use oracle::PathConfig;
pub use study::StudyGrid;
pub use univariate::sphere::UnitVector;
