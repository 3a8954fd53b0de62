//! Generalizations of the base families, comparison models for bivariate
//! angles, transforms to the plane and the cylinder, and likelihood fitting.

pub mod angle_model;
pub mod fit;
pub mod marginals;
pub mod mobius_marginal;
pub mod plane;
pub mod sengupta;
pub mod shieh_johnson;
pub mod shifted;
pub mod vm_copula;

pub use angle_model::{angle_pair_gof, AnglePairModel, GofReport};
pub use fit::{model_select, FitResult, Fitted, RankedFit};
pub use marginals::{transform_marginals, Marginal};
pub use mobius_marginal::{mobius_marginal_log_density, mobius_marginal_sample, MobiusMarginalParams};
pub use plane::{cylinder_conditionals, cylinder_sample, plane_density, plane_sample, CylinderConditionals};
pub use sengupta::{sengupta_fit, sengupta_log_density, SenGuptaParams};
pub use shieh_johnson::{shieh_johnson_fit, shieh_johnson_log_density, ShiehJohnsonParams};
pub use shifted::{shifted_log_density, shifted_sample, ShiftedParams};
pub use vm_copula::{vm_copula_fit, vm_copula_log_density, vm_copula_sample, VMCopulaParams};
