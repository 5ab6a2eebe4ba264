//! Pajek networks, CSV tables and frame series.

mod frames;
mod pajek;
mod tables;

use std::path::{Path, PathBuf};

pub use frames::{write_frame_series, FrameEntry, FrameManifest};
pub use pajek::{
    normalized_positions, parse_pajek, read_pajek, render_pajek, render_pajek_in_box, write_pajek,
    PajekReport, GLYPH_FLOOR, MARGIN,
};
pub use tables::{
    collision_csv, distribution_csv, environment_csv, factor_csv, matrix_csv, read_label_counts,
    read_matrix_csv, year_table_csv,
};

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("node {0} has no layout position")]
    MissingPosition(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<(), ExportError> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String, ExportError> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    })
}
