use exitpair::oracle::{oracle_compare_with, OracleOptions};
use exitpair::{PathConfig, RngStream};
use nalgebra::DVector;

use crate::args::{Cli, OracleArgs};
use crate::error::{CliError, CliResult};
use crate::model::orthogonal;
use crate::report::Reporter;

pub fn run(cli: &Cli, a: &OracleArgs) -> CliResult<()> {
    let reporter = Reporter::new(cli, "oracle");
    let start = match &a.start {
        Some(s) if s.len() != a.d => {
            return Err(CliError::usage(format!("--start needs {} coordinates, got {}", a.d, s.len())));
        }
        Some(s) => DVector::from_column_slice(s),
        None => DVector::zeros(a.d),
    };
    let cfg = PathConfig::new(a.rho, orthogonal(a.q.as_deref(), a.d)?, start, a.dt)?;
    let opts = OracleOptions { bias_paths: a.bias_paths, ..OracleOptions::default() };
    let report = oracle_compare_with(&cfg, a.n, &mut RngStream::new(cli.seed, 0), &opts)?;
    reporter.emit(&report, a.out.as_deref())
}
