use exitpair::dataset::{ingest_csv, AngleUnit};
use exitpair::extended::{model_select, sengupta_fit, shieh_johnson_fit, vm_copula_fit, FitResult, RankedFit};
use serde::Serialize;
use std::collections::BTreeMap;

use crate::args::{Cli, FitArgs, FitModel};
use crate::error::{CliError, CliResult};
use crate::report::Reporter;

#[derive(Serialize)]
struct DatasetInfo {
    source: String,
    n: usize,
    unit: AngleUnit,
}

#[derive(Serialize)]
struct FitEntry {
    model: FitModel,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    loglik: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    aic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl FitEntry {
    fn from_result(model: FitModel, r: &FitResult) -> Self {
        Self {
            model,
            params: Some(r.params.iter().cloned().collect()),
            loglik: Some(r.loglik),
            aic: Some(r.aic),
            bic: Some(r.bic),
            k: Some(r.k),
            converged: Some(r.converged),
            error: None,
        }
    }

    fn failed(model: FitModel, e: &exitpair::Error) -> Self {
        Self {
            model,
            params: None,
            loglik: None,
            aic: None,
            bic: None,
            k: None,
            converged: None,
            error: Some(e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct FitReport {
    dataset: DatasetInfo,
    fits: Vec<FitEntry>,
    ranking: Vec<RankedFit>,
}

pub fn run(cli: &Cli, a: &FitArgs) -> CliResult<()> {
    let reporter = Reporter::new(cli, "fit");
    if a.models.is_empty() {
        return Err(CliError::usage("no models to fit"));
    }
    let unit = if a.data.degrees { AngleUnit::Degrees } else { AngleUnit::Radians };
    let ds = ingest_csv(&a.data.data, unit)?;
    if ds.len() < 10 {
        return Err(CliError::usage(format!("fitting needs at least 10 observations, the file has {}", ds.len())));
    }
    let mut fits = Vec::new();
    let mut results = Vec::new();
    for &m in &a.models {
        let r = match m {
            FitModel::VmCopula => vm_copula_fit(&ds.rows, None).map(|f| f.result),
            FitModel::Sengupta => sengupta_fit(&ds.rows, None).map(|f| f.result),
            FitModel::ShiehJohnson => shieh_johnson_fit(&ds.rows, None).map(|f| f.result),
        };
        match r {
            Ok(r) => {
                fits.push(FitEntry::from_result(m, &r));
                results.push(r);
            }
            Err(e) => fits.push(FitEntry::failed(m, &e)),
        }
    }
    let ranking = if results.is_empty() { Vec::new() } else { model_select(&results)? };
    let report = FitReport {
        dataset: DatasetInfo { source: a.data.data.display().to_string(), n: ds.len(), unit },
        fits,
        ranking,
    };
    reporter.emit(&report, a.out.as_deref())
}
