//! JSON report envelope and output helpers.

use serde::Serialize;
use std::path::Path;
use std::time::Instant;

use crate::args::Cli;
use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'static str,
    command: &'a str,
    /// Arguments after the program name.
    argv: Vec<String>,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_seconds: Option<f64>,
    #[serde(flatten)]
    body: &'a T,
}

pub struct Reporter<'a> {
    cli: &'a Cli,
    command: &'static str,
    started: Instant,
}

impl<'a> Reporter<'a> {
    pub fn new(cli: &'a Cli, command: &'static str) -> Self {
        Self { cli, command, started: Instant::now() }
    }

    pub fn to_json<T: Serialize>(&self, body: &T) -> CliResult<String> {
        let env = Envelope {
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            argv: std::env::args().skip(1).collect(),
            seed: self.cli.seed,
            elapsed_seconds: (!self.cli.omit_timing).then(|| self.started.elapsed().as_secs_f64()),
            body,
        };
        let mut s = serde_json::to_string_pretty(&env)?;
        s.push('\n');
        Ok(s)
    }

    /// Write the report to `path`, or to standard output.
    pub fn emit<T: Serialize>(&self, body: &T, path: Option<&Path>) -> CliResult<()> {
        let text = self.to_json(body)?;
        match path {
            Some(p) => write_file(p, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.display().to_string(), source })
}

/// `path` with `.json` appended to the full file name.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    s.into()
}
