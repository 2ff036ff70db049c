//! Forecast files.
//!
//! CSV: a header `id,p_1,...,p_n,outcome` declares the dimension; each row
//! holds a record id, the forecast masses and the zero-based index of the
//! outcome that occurred. Several forecasters can share a file by prefixing
//! their columns, as in `id,a:p_1,a:p_2,b:p_1,b:p_2,outcome`; each row then
//! yields one record per forecaster.
//!
//! JSON mirrors the CSV layout:
//!
//! ```json
//! {"n": 3, "records": [{"id": "r1", "forecast": [0.2, 0.5, 0.3], "outcome": 1}]}
//! ```
//!
//! with an optional `"forecaster"` on each record.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{read_to_string, IoError};
use crate::scoring::ForecastRecord;
use crate::simplex::ProbabilityVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForecastFormat {
    Csv,
    Json,
}

impl ForecastFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => ForecastFormat::Json,
            _ => ForecastFormat::Csv,
        }
    }
}

impl FromStr for ForecastFormat {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, IoError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ForecastFormat::Csv),
            "json" => Ok(ForecastFormat::Json),
            other => Err(IoError::Format(format!(
                "unknown forecast format `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastFile {
    pub format: ForecastFormat,
    pub records: Vec<ForecastRecord>,
    /// Non-fatal conditions, such as an empty file.
    pub warnings: Vec<String>,
}

impl ForecastFile {
    /// Forecaster names in order of first appearance; `None` stands for
    /// unnamed records.
    pub fn forecasters(&self) -> Vec<Option<String>> {
        let mut names: Vec<Option<String>> = Vec::new();
        for r in &self.records {
            if !names.contains(&r.forecaster) {
                names.push(r.forecaster.clone());
            }
        }
        names
    }

    /// Records issued by one forecaster, in file order.
    pub fn records_of(&self, forecaster: &Option<String>) -> Vec<ForecastRecord> {
        self.records
            .iter()
            .filter(|r| &r.forecaster == forecaster)
            .cloned()
            .collect()
    }
}

pub fn parse_forecasts(path: &Path, format: ForecastFormat) -> Result<ForecastFile, IoError> {
    parse_forecasts_str(&read_to_string(path)?, format)
}

pub fn parse_forecasts_str(text: &str, format: ForecastFormat) -> Result<ForecastFile, IoError> {
    let records = if text.trim().is_empty() {
        Vec::new()
    } else {
        match format {
            ForecastFormat::Csv => parse_csv(text)?,
            ForecastFormat::Json => parse_json(text)?,
        }
    };
    let mut warnings = Vec::new();
    if records.is_empty() {
        warnings.push("forecast file contains no records".to_string());
    }
    Ok(ForecastFile {
        format,
        records,
        warnings,
    })
}

struct Layout {
    n: usize,
    forecasters: Vec<Option<String>>,
}

fn parse_header(fields: &[&str]) -> Result<Layout, IoError> {
    let bad = |msg: &str| IoError::row(1, format!("header: {msg}"));
    if fields.len() < 3 {
        return Err(bad("expected `id,p_1,...,p_n,outcome`"));
    }
    if !fields[0].eq_ignore_ascii_case("id") {
        return Err(bad("first column must be `id`"));
    }
    let last = fields[fields.len() - 1];
    if !(last.eq_ignore_ascii_case("outcome") || last.eq_ignore_ascii_case("outcome_index")) {
        return Err(bad("last column must be `outcome`"));
    }
    let mut forecasters: Vec<Option<String>> = Vec::new();
    let mut columns: Vec<(Option<String>, usize)> = Vec::new();
    for &col in &fields[1..fields.len() - 1] {
        let (owner, name) = match col.rsplit_once(':') {
            Some((o, n)) => (Some(o.to_string()), n),
            None => (None, col),
        };
        let index: usize = name
            .strip_prefix("p_")
            .and_then(|i| i.parse().ok())
            .ok_or_else(|| bad(&format!("column `{col}` is not of the form p_<i>")))?;
        if !forecasters.contains(&owner) {
            forecasters.push(owner.clone());
        }
        columns.push((owner, index));
    }
    let n = columns.len() / forecasters.len();
    let expected: Vec<(Option<String>, usize)> = forecasters
        .iter()
        .flat_map(|f| (1..=n).map(move |i| (f.clone(), i)))
        .collect();
    if columns != expected {
        return Err(bad("every forecaster needs columns p_1..p_n in order"));
    }
    if forecasters.len() > 1 && forecasters.contains(&None) {
        return Err(bad(
            "prefix every forecaster's columns when comparing several",
        ));
    }
    Ok(Layout { n, forecasters })
}

fn parse_csv(text: &str) -> Result<Vec<ForecastRecord>, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = reader.records();
    let header = match rows.next() {
        None => return Ok(Vec::new()),
        Some(h) => h.map_err(|e| IoError::row(1, e))?,
    };
    let header_fields: Vec<&str> = header.iter().collect();
    let layout = parse_header(&header_fields)?;
    let width = 2 + layout.n * layout.forecasters.len();

    let mut records = Vec::new();
    for row in rows {
        let row = row.map_err(|e| IoError::Format(e.to_string()))?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        if row.len() != width {
            return Err(IoError::row(
                line,
                format!("expected {width} fields, found {}", row.len()),
            ));
        }
        let id = row[0].to_string();
        let outcome: usize = row[width - 1].parse().map_err(|_| {
            IoError::row(
                line,
                format!("outcome `{}` is not an index", &row[width - 1]),
            )
        })?;
        for (k, owner) in layout.forecasters.iter().enumerate() {
            let start = 1 + k * layout.n;
            let masses = (start..start + layout.n)
                .map(|c| {
                    row[c]
                        .parse::<f64>()
                        .map_err(|_| IoError::row(line, format!("`{}` is not a number", &row[c])))
                })
                .collect::<Result<Vec<_>, _>>()?;
            records.push(build_record(
                line,
                id.clone(),
                owner.clone(),
                masses,
                outcome,
            )?);
        }
    }
    Ok(records)
}

fn build_record(
    row: usize,
    id: String,
    forecaster: Option<String>,
    masses: Vec<f64>,
    outcome: usize,
) -> Result<ForecastRecord, IoError> {
    let forecast = ProbabilityVector::new(masses).map_err(|e| IoError::row(row, e))?;
    let mut record =
        ForecastRecord::new(id, forecast, outcome).map_err(|e| IoError::row(row, e))?;
    record.forecaster = forecaster;
    Ok(record)
}

#[derive(Serialize, Deserialize)]
struct JsonFile {
    n: usize,
    records: Vec<JsonRecord>,
}

#[derive(Serialize, Deserialize)]
struct JsonRecord {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    forecaster: Option<String>,
    forecast: Vec<f64>,
    outcome: usize,
}

fn parse_json(text: &str) -> Result<Vec<ForecastRecord>, IoError> {
    let file: JsonFile = serde_json::from_str(text)
        .map_err(|e| IoError::Format(format!("invalid forecast JSON: {e}")))?;
    file.records
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let row = i + 1;
            if r.forecast.len() != file.n {
                return Err(IoError::row(
                    row,
                    format!(
                        "forecast has {} masses, header declares {}",
                        r.forecast.len(),
                        file.n
                    ),
                ));
            }
            build_record(row, r.id, r.forecaster, r.forecast, r.outcome)
        })
        .collect()
}

/// Serializes records so that [`parse_forecasts_str`] reads them back
/// unchanged. Masses are written in shortest round-trip form.
pub fn write_forecasts(
    records: &[ForecastRecord],
    format: ForecastFormat,
) -> Result<String, IoError> {
    let n = records.first().map(|r| r.forecast.len()).unwrap_or(0);
    if let Some(r) = records.iter().find(|r| r.forecast.len() != n) {
        return Err(IoError::Format(format!(
            "record `{}` has dimension {}, expected {n}",
            r.id,
            r.forecast.len()
        )));
    }
    match format {
        ForecastFormat::Json => {
            let file = JsonFile {
                n,
                records: records
                    .iter()
                    .map(|r| JsonRecord {
                        id: r.id.clone(),
                        forecaster: r.forecaster.clone(),
                        forecast: r.forecast.masses().to_vec(),
                        outcome: r.outcome,
                    })
                    .collect(),
            };
            let mut out = serde_json::to_string_pretty(&file).expect("plain data serializes");
            out.push('\n');
            Ok(out)
        }
        ForecastFormat::Csv => write_csv(records, n),
    }
}

fn write_csv(records: &[ForecastRecord], n: usize) -> Result<String, IoError> {
    let mut forecasters: Vec<Option<String>> = Vec::new();
    for r in records {
        if !forecasters.contains(&r.forecaster) {
            forecasters.push(r.forecaster.clone());
        }
    }
    if forecasters.len() > 1 && forecasters.contains(&None) {
        return Err(IoError::Format(
            "mix of named and unnamed forecasters".into(),
        ));
    }
    let mut out = String::from("id");
    for f in &forecasters {
        for i in 1..=n {
            match f {
                Some(name) => write!(out, ",{name}:p_{i}").unwrap(),
                None => write!(out, ",p_{i}").unwrap(),
            }
        }
    }
    out.push_str(",outcome\n");

    let k = forecasters.len().max(1);
    if !records.len().is_multiple_of(k) {
        return Err(IoError::Format("records do not form complete rows".into()));
    }
    for chunk in records.chunks(k) {
        let head = &chunk[0];
        for (r, f) in chunk.iter().zip(&forecasters) {
            if r.id != head.id || r.outcome != head.outcome || &r.forecaster != f {
                return Err(IoError::Format(format!(
                    "record `{}` does not line up with its row",
                    r.id
                )));
            }
        }
        out.push_str(&csv_field(&head.id));
        for r in chunk {
            for p in r.forecast.iter() {
                write!(out, ",{p}").unwrap();
            }
        }
        writeln!(out, ",{}", head.outcome).unwrap();
    }
    Ok(out)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) || s.starts_with('#') || s.trim() != s {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
