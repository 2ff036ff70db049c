//! Density grid files: two-column text `x f(x)` (whitespace or comma
//! separated, `#` comments, optional header line) or JSON
//! `{"lower": a, "upper": b, "values": [...]}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::{read_to_string, IoError};
use crate::continuum::{DensityGrid, NORMALIZATION_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityFormat {
    Text,
    Json,
}

impl DensityFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => DensityFormat::Json,
            _ => DensityFormat::Text,
        }
    }
}

pub fn read_density(path: &Path) -> Result<DensityGrid, IoError> {
    read_density_with_tolerance(path, NORMALIZATION_TOLERANCE)
}

/// Like [`read_density`], accepting `|∫ f - 1| <= tolerance`.
pub fn read_density_with_tolerance(path: &Path, tolerance: f64) -> Result<DensityGrid, IoError> {
    parse_density_with_tolerance(
        &read_to_string(path)?,
        DensityFormat::from_path(path),
        tolerance,
    )
}

#[derive(Deserialize)]
struct JsonGrid {
    lower: f64,
    upper: f64,
    values: Vec<f64>,
}

pub fn parse_density(text: &str, format: DensityFormat) -> Result<DensityGrid, IoError> {
    parse_density_with_tolerance(text, format, NORMALIZATION_TOLERANCE)
}

pub fn parse_density_with_tolerance(
    text: &str,
    format: DensityFormat,
    tolerance: f64,
) -> Result<DensityGrid, IoError> {
    match format {
        DensityFormat::Json => {
            let g: JsonGrid = serde_json::from_str(text)
                .map_err(|e| IoError::Format(format!("invalid density JSON: {e}")))?;
            Ok(DensityGrid::with_tolerance(
                g.lower, g.upper, g.values, tolerance,
            )?)
        }
        DensityFormat::Text => parse_text(text, tolerance),
    }
}

fn parse_text(text: &str, tolerance: f64) -> Result<DensityGrid, IoError> {
    let mut xs = Vec::new();
    let mut fs = Vec::new();
    let mut seen_content = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let parsed: Option<Vec<f64>> = cols.iter().map(|c| c.parse().ok()).collect();
        match parsed {
            Some(v) if v.len() == 2 => {
                xs.push(v[0]);
                fs.push(v[1]);
            }
            // a single non-numeric first line is a column header
            None if !seen_content => {}
            _ => {
                return Err(IoError::row(
                    line_no,
                    "expected two numeric columns `x f(x)`",
                ))
            }
        }
        seen_content = true;
    }
    if xs.len() < 2 {
        return Err(IoError::Format(format!(
            "density needs at least 2 nodes, got {}",
            xs.len()
        )));
    }
    let (lower, upper) = (xs[0], xs[xs.len() - 1]);
    let step = (upper - lower) / (xs.len() - 1) as f64;
    for (i, &x) in xs.iter().enumerate() {
        let expected = lower + step * i as f64;
        if (x - expected).abs() > 1e-6 * step.abs() {
            return Err(IoError::Format(format!(
                "nodes are not uniformly spaced: x[{i}] = {x}, expected {expected}"
            )));
        }
    }
    Ok(DensityGrid::with_tolerance(lower, upper, fs, tolerance)?)
}

pub fn write_density(grid: &DensityGrid, format: DensityFormat) -> String {
    match format {
        DensityFormat::Json => {
            let mut s = serde_json::to_string_pretty(grid).expect("plain data serializes");
            s.push('\n');
            s
        }
        DensityFormat::Text => {
            let mut s = String::from("# x f(x)\n");
            for (i, v) in grid.values().iter().enumerate() {
                writeln!(s, "{} {}", grid.node(i), v).unwrap();
            }
            s
        }
    }
}
