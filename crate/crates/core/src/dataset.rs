//! Ingestion of paired angle observations from CSV.

use serde::Serialize;
use std::f64::consts::TAU;
use std::io::Read;
use std::path::{Path, PathBuf};

use crate::bs::PairSample;
use crate::error::{Error, Result};
use crate::math::wrap_angle;
use crate::univariate::sphere::UnitVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    Radians,
    Degrees,
}

/// Angle pairs in radians, wrapped into `[0, 2pi)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleDataset {
    pub rows: Vec<(f64, f64)>,
    pub source: Option<PathBuf>,
    /// Unit of the raw file; rows are always stored in radians.
    pub unit: AngleUnit,
}

impl AngleDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub const HEADER: [&str; 2] = ["theta_u", "theta_v"];

pub fn ingest_csv(path: impl AsRef<Path>, unit: AngleUnit) -> Result<AngleDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let mut ds = read_angles(file, unit)?;
    ds.source = Some(path.to_path_buf());
    Ok(ds)
}

/// Parse from any reader. The first record must be the header
/// `theta_u,theta_v`; every later record must hold two finite numbers.
pub fn read_angles(reader: impl Read, unit: AngleUnit) -> Result<AngleDataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| Error::Format(format!("unreadable header: {e}")))?,
        None => return Err(Error::Format("empty file: expected header theta_u,theta_v".into())),
    };
    let fields: Vec<&str> = header.iter().map(|s| s.trim_start_matches('\u{feff}')).collect();
    if fields != HEADER {
        return Err(Error::Format(format!("expected header theta_u,theta_v, found {}", fields.join(","))));
    }
    let scale = match unit {
        AngleUnit::Radians => 1.0,
        AngleUnit::Degrees => TAU / 360.0,
    };
    let mut rows = Vec::new();
    for rec in records {
        let rec =
            rec.map_err(|e| Error::Data { line: e.position().map_or(0, |p| p.line()), message: e.to_string() })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 2 {
            return Err(Error::Data { line, message: format!("expected 2 fields, found {}", rec.len()) });
        }
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Data { line, message: format!("not a number: {s:?}") })?;
            if !v.is_finite() {
                return Err(Error::Data { line, message: format!("non-finite value {s:?}") });
            }
            Ok(wrap_angle(v * scale))
        };
        rows.push((parse(&rec[0])?, parse(&rec[1])?));
    }
    Ok(AngleDataset { rows, source: None, unit })
}

/// Read unit-vector pairs from a file with header `u1,...,ud,v1,...,vd`, or
/// angle pairs with header `theta_u,theta_v` (read as points of the circle).
/// Rows are renormalized to unit length after a tolerance check of 1e-6.
pub fn ingest_pairs_csv(path: impl AsRef<Path>) -> Result<PairSample> {
    read_pairs(std::fs::File::open(path.as_ref())?)
}

pub fn read_pairs(reader: impl Read) -> Result<PairSample> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| Error::Format(format!("unreadable header: {e}")))?,
        None => return Err(Error::Format("empty file".into())),
    };
    let fields: Vec<String> = header.iter().map(|s| s.trim_start_matches('\u{feff}').to_string()).collect();
    if fields == HEADER {
        let mut rest = Vec::new();
        for rec in records {
            let rec =
                rec.map_err(|e| Error::Data { line: e.position().map_or(0, |p| p.line()), message: e.to_string() })?;
            rest.push(rec);
        }
        let pairs = rest
            .iter()
            .map(|rec| {
                let line = rec.position().map_or(0, |p| p.line());
                let v = parse_row(rec, 2, line)?;
                Ok((UnitVector::from_angle(v[0]), UnitVector::from_angle(v[1])))
            })
            .collect::<Result<Vec<_>>>()?;
        return non_empty(pairs);
    }
    let d = fields.len() / 2;
    let expected: Vec<String> = (1..=d).map(|i| format!("u{i}")).chain((1..=d).map(|i| format!("v{i}"))).collect();
    if d < 2 || fields != expected {
        return Err(Error::Format(format!(
            "expected header theta_u,theta_v or u1..ud,v1..vd, found {}",
            fields.join(",")
        )));
    }
    let mut pairs = Vec::new();
    for rec in records {
        let rec =
            rec.map_err(|e| Error::Data { line: e.position().map_or(0, |p| p.line()), message: e.to_string() })?;
        let line = rec.position().map_or(0, |p| p.line());
        let v = parse_row(&rec, 2 * d, line)?;
        let unit = |xs: &[f64]| -> Result<UnitVector> {
            let norm = xs.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-6 {
                return Err(Error::Data { line, message: format!("vector has norm {norm}, expected 1") });
            }
            UnitVector::from_slice(&xs.iter().map(|x| x / norm).collect::<Vec<_>>())
        };
        pairs.push((unit(&v[..d])?, unit(&v[d..])?));
    }
    non_empty(pairs)
}

fn non_empty(pairs: Vec<(UnitVector, UnitVector)>) -> Result<PairSample> {
    if pairs.is_empty() {
        return Err(Error::Format("file has a header but no rows".into()));
    }
    PairSample::new(pairs)
}

fn parse_row(rec: &csv::StringRecord, width: usize, line: u64) -> Result<Vec<f64>> {
    if rec.len() != width {
        return Err(Error::Data { line, message: format!("expected {width} fields, found {}", rec.len()) });
    }
    rec.iter()
        .map(|s| match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Data { line, message: format!("not a finite number: {s:?}") }),
        })
        .collect()
}
