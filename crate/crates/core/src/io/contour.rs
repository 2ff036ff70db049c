//! Entropy and extropy over the barycentric lattice of the 2-simplex, as raw
//! data for external contour plotting.

use std::fmt::Write as _;

use serde::Serialize;

use super::number::{format_number, Num};
use crate::error::{Error, Result};
use crate::simplex::{entropy, extropy, ProbabilityVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourRow {
    pub p: [f64; 3],
    pub entropy: f64,
    pub extropy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourGrid {
    pub resolution: usize,
    pub rows: Vec<ContourRow>,
}

/// Every point `(i, j, M - i - j) / M` of the lattice, `i` outermost.
pub fn contour_grid(resolution: usize) -> Result<ContourGrid> {
    if resolution < 2 {
        return Err(Error::Resolution {
            got: resolution,
            min: 2,
        });
    }
    let m = resolution as f64;
    let mut rows = Vec::with_capacity((resolution + 1) * (resolution + 2) / 2);
    for i in 0..=resolution {
        for j in 0..=resolution - i {
            let k = resolution - i - j;
            let p = [i as f64 / m, j as f64 / m, k as f64 / m];
            let pv = ProbabilityVector::new(p.to_vec())?;
            rows.push(ContourRow {
                p,
                entropy: entropy(&pv),
                extropy: extropy(&pv),
            });
        }
    }
    Ok(ContourGrid { resolution, rows })
}

#[derive(Serialize)]
struct JsonGrid {
    resolution: usize,
    columns: [&'static str; 5],
    rows: Vec<[Num; 5]>,
}

impl ContourGrid {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("p1\tp2\tp3\tH\tJ\n");
        for r in &self.rows {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                format_number(r.p[0]),
                format_number(r.p[1]),
                format_number(r.p[2]),
                format_number(r.entropy),
                format_number(r.extropy)
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let grid = JsonGrid {
            resolution: self.resolution,
            columns: ["p1", "p2", "p3", "H", "J"],
            rows: self
                .rows
                .iter()
                .map(|r| {
                    [
                        Num(r.p[0]),
                        Num(r.p[1]),
                        Num(r.p[2]),
                        Num(r.entropy),
                        Num(r.extropy),
                    ]
                })
                .collect(),
        };
        let mut s = serde_json::to_string(&grid).expect("plain data serializes");
        s.push('\n');
        s
    }
}
