use exitpair::dataset::{ingest_csv, AngleUnit};
use exitpair::extended::{angle_pair_gof, GofReport};
use serde::Serialize;

use crate::args::{Cli, GofArgs, ModelArgs};
use crate::error::CliResult;
use crate::report::Reporter;

#[derive(Serialize)]
struct Gof<'a> {
    source: String,
    params: &'a ModelArgs,
    #[serde(flatten)]
    report: GofReport,
}

pub fn run(cli: &Cli, a: &GofArgs) -> CliResult<()> {
    let reporter = Reporter::new(cli, "gof");
    let model = a.params.angle_model(a.model)?;
    let unit = if a.data.degrees { AngleUnit::Degrees } else { AngleUnit::Radians };
    let ds = ingest_csv(&a.data.data, unit)?;
    let report = angle_pair_gof(&model, &ds.rows)?;
    let body = Gof { source: a.data.data.display().to_string(), params: &a.params, report };
    reporter.emit(&body, a.out.as_deref())
}
