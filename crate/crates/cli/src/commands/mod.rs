mod fit;
mod gof;
mod oracle;
mod pivotal;
mod sample;
mod simstudy;

use crate::args::{Cli, Command};
use crate::error::CliResult;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Sample(a) => sample::run(cli, a),
        Command::Fit(a) => fit::run(cli, a),
        Command::Simstudy(a) => simstudy::run(cli, a),
        Command::Pivotal(a) => pivotal::run(cli, a),
        Command::Oracle(a) => oracle::run(cli, a),
        Command::Gof(a) => gof::run(cli, a),
    }
}
