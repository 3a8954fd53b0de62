use exitpair::study::{run_study, StudyCell, StudyGrid};
use serde::Serialize;

use crate::args::{Cli, SimstudyArgs};
use crate::error::CliResult;
use crate::report::{sidecar_path, write_file, Reporter};

#[derive(Serialize)]
struct StudyReport<'a> {
    grid: &'a StudyGrid,
    cells: &'a [StudyCell],
    analytic: &'a [f64],
}

pub fn run(cli: &Cli, a: &SimstudyArgs) -> CliResult<()> {
    let reporter = Reporter::new(cli, "simstudy");
    let grid = StudyGrid::new(a.sizes.clone(), a.psis.clone(), a.replicates, cli.seed)?;
    let table = run_study(&grid)?;
    let csv = table.to_csv(a.digits);
    match &a.out {
        Some(path) => {
            write_file(path, &csv)?;
            let report = StudyReport { grid: &table.grid, cells: &table.cells, analytic: &table.analytic };
            reporter.emit(&report, Some(&sidecar_path(path)))
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
