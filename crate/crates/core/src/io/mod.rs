//! Configuration files, price tables, and serialized series and reports.

mod config;
mod prices;
mod report;
mod series;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{parse_config, render_config, ConfigError, ParsedConfig, RunnerSettings};
pub use prices::{ingest_prices, PriceTable};
pub use report::{
    analyze_prices, read_analysis, read_report, write_acf_table, write_analysis, write_path_table,
    write_report, write_tail_table, AnalysisReport, SCHEMA_LINE,
};
pub use series::{format_number, write_series};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("column `{name}` not found (available: {})", available.join(", "))]
    MissingColumn { name: String, available: Vec<String> },
    #[error("row {row}: non-numeric price `{cell}`")]
    NonNumeric { row: u64, cell: String },
    #[error("need at least 2 price rows, got {0}")]
    TooFewRows(usize),
    #[error("malformed delimited text: {0}")]
    Csv(String),
    #[error("unsupported or missing schema line (expected `{SCHEMA_LINE}`)")]
    Schema,
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

impl IoError {
    pub fn at(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> IoError {
        let path = path.into();
        move |source| IoError::File { path, source }
    }
}
