use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "exitpair", version, about = "Sampling, fitting and checking Brownian exit-pair distributions")]
pub struct Cli {
    /// Master seed; every command that draws random numbers derives its
    /// streams from it.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Leave the elapsed time out of JSON reports, making them byte-identical
    /// across runs.
    #[arg(long, global = true)]
    pub omit_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a sample from a model and write it as CSV, with a JSON sidecar.
    Sample(SampleArgs),
    /// Fit the bivariate angle models to a dataset and rank them by AIC/BIC.
    Fit(FitArgs),
    /// Relative MSE of the moment estimator against the MLE of psi.
    Simstudy(SimstudyArgs),
    /// Test the pivotal statistic against its Beta law.
    Pivotal(PivotalArgs),
    /// Compare simulated Brownian exit pairs with the closed-form model.
    Oracle(OracleArgs),
    /// Goodness of fit of an angle dataset against a model.
    Gof(GofArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleModel {
    Bs,
    #[value(name = "bc+")]
    #[serde(rename = "bc+")]
    BcPlus,
    #[value(name = "bc-")]
    #[serde(rename = "bc-")]
    BcMinus,
    Shifted,
    MobiusMarginal,
    VmCopula,
    Plane,
    Cylinder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleModel {
    #[value(name = "bc+")]
    #[serde(rename = "bc+")]
    BcPlus,
    #[value(name = "bc-")]
    #[serde(rename = "bc-")]
    BcMinus,
    MobiusMarginal,
    VmCopula,
    Sengupta,
    ShiehJohnson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitModel {
    VmCopula,
    Sengupta,
    ShiehJohnson,
}

/// Model parameters. Which ones are needed depends on the model; unused
/// ones are ignored.
#[derive(Debug, Clone, Default, Args, Serialize)]
#[command(next_help_heading = "Model parameters")]
pub struct ModelArgs {
    /// Dimension of the sphere's ambient space (`bs`, `shifted`).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Orthogonal matrix, row-major and comma separated (default identity).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    /// Start point of the shifted model, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_abs: Option<f64>,
    /// Argument of psi in radians.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_arg: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1_abs: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1_arg: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha2_abs: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha2_arg: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu3: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa1: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa2: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa3: Option<f64>,
    /// The eight free entries m12,m13,m21,m22,m23,m31,m32,m33 of the
    /// SenGupta matrix.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub model: SampleModel,
    #[arg(short, long)]
    pub n: usize,
    /// Output CSV; the sidecar is written next to it with `.json` appended.
    #[arg(short, long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub params: ModelArgs,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV with header `theta_u,theta_v`.
    #[arg(long)]
    pub data: PathBuf,
    /// Angles in the file are in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "vm-copula,sengupta,shieh-johnson")]
    pub models: Vec<FitModel>,
    /// JSON report path (default: standard output).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimstudyArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,50,100")]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5,0.7,0.9")]
    pub psis: Vec<f64>,
    #[arg(long, default_value_t = 2000)]
    pub replicates: usize,
    /// Decimal places in the table.
    #[arg(long, default_value_t = 3)]
    pub digits: usize,
    /// CSV table path (default: standard output); a JSON sidecar with the
    /// per-cell mean squared errors is written next to it.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PivotalArgs {
    /// Pairs to test: header `u1..ud,v1..vd` or `theta_u,theta_v`. When
    /// absent, a sample is simulated (see `--simulate-rho`).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Tested dependence parameter.
    #[arg(long)]
    pub rho: f64,
    /// Tested orthogonal matrix, row-major (default identity).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Option<Vec<f64>>,
    /// Dimension for simulated data.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Simulate from this rho (default: the tested one).
    #[arg(long)]
    pub simulate_rho: Option<f64>,
    /// Size of the simulated sample.
    #[arg(short, long, default_value_t = 5000)]
    pub n: usize,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Option<Vec<f64>>,
    /// Start point (default: the origin).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub start: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-5)]
    pub dt: f64,
    /// Number of paths.
    #[arg(short, long, default_value_t = 20000)]
    pub n: usize,
    /// Paths for the dt against dt/4 bias check (0 skips it).
    #[arg(long, default_value_t = 2000)]
    pub bias_paths: usize,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GofArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum)]
    pub model: AngleModel,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub params: ModelArgs,
}
