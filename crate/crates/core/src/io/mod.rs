//! File formats and command reports behind the `extropy` binary.
//!
//! Every report renders deterministically: fields appear in a fixed order and
//! numbers use the 10-significant-digit rendering in [`number`].

pub mod contour;
pub mod density;
pub mod forecast;
pub mod number;
pub mod report;

use thiserror::Error;

pub use contour::{contour_grid, ContourGrid, ContourRow};
pub use density::{
    parse_density, parse_density_with_tolerance, read_density, read_density_with_tolerance,
    write_density, DensityFormat,
};
pub use forecast::{
    parse_forecasts, parse_forecasts_str, write_forecasts, ForecastFile, ForecastFormat,
};
pub use number::format_number;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Invalid(#[from] crate::Error),
}

impl IoError {
    pub(crate) fn row(row: usize, message: impl ToString) -> Self {
        IoError::Row {
            row,
            message: message.to_string(),
        }
    }

    /// Process exit code: 3 for I/O failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            IoError::Io { .. } => 3,
            _ => 2,
        }
    }
}

pub(crate) fn read_to_string(path: &std::path::Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}
