use exitpair::bs::{bs_sample, pivotal_report, PivotalReport};
use exitpair::dataset::ingest_pairs_csv;
use exitpair::{BSParams, RngStream};
use serde::Serialize;

use crate::args::{Cli, PivotalArgs};
use crate::error::{CliError, CliResult};
use crate::model::orthogonal;
use crate::report::Reporter;

#[derive(Serialize)]
struct Pivotal {
    source: String,
    d: usize,
    n: usize,
    rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    simulate_rho: Option<f64>,
    #[serde(flatten)]
    report: PivotalReport,
}

pub fn run(cli: &Cli, a: &PivotalArgs) -> CliResult<()> {
    let reporter = Reporter::new(cli, "pivotal");
    let (sample, source, simulate_rho) = match &a.data {
        Some(path) => (ingest_pairs_csv(path)?, path.display().to_string(), None),
        None => {
            let rho = a.simulate_rho.unwrap_or(a.rho);
            let p = BSParams::new(rho, orthogonal(a.q.as_deref(), a.d)?)?;
            (bs_sample(&p, a.n, &mut RngStream::new(cli.seed, 0)), "simulated".to_string(), Some(rho))
        }
    };
    if sample.len() < 10 {
        return Err(CliError::usage(format!("the pivotal test needs at least 10 pairs, got {}", sample.len())));
    }
    let d = sample.dim();
    let tested = BSParams::new(a.rho, orthogonal(a.q.as_deref(), d)?)?;
    let report = pivotal_report(&sample, &tested)?;
    let body = Pivotal { source, d, n: sample.len(), rho: a.rho, simulate_rho, report };
    reporter.emit(&body, a.out.as_deref())
}
