//! Reproducible experiment runner over `pbc-core`.
//!
//! Every experiment writes its tables as CSV into the output directory,
//! followed by `manifest.json` echoing the resolved configuration, the
//! package version and the wall time. The CSVs depend only on the
//! configuration, never on thread count or timing.

pub mod config;
mod experiments;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

pub use config::{ConfigLayer, Experiment, ExperimentConfig, Family, Fraction, IntRange};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("resource cap: {0}")]
    Cap(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io(_) => 1,
            RunError::Config(_) => 2,
            RunError::Cap(_) => 3,
            RunError::Invariant(_) => 4,
        }
    }
}

impl From<pbc_core::Error> for RunError {
    fn from(e: pbc_core::Error) -> Self {
        use pbc_core::Error as E;
        match e {
            E::CapExceeded { .. } | E::Overflow(_) => RunError::Cap(e.to_string()),
            E::InvalidGraph(_)
            | E::Disconnected
            | E::Leaf { .. }
            | E::RankMismatch { .. }
            | E::JacobiMismatch(_)
            | E::InvalidArgument(_)
            | E::Parse { .. } => RunError::Config(e.to_string()),
            _ => RunError::Invariant(e.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

impl From<csv::Error> for RunError {
    fn from(e: csv::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

/// A finished table, written by the collector in row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub file: &'static str,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: &'static str, header: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table {
            file,
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, dir: &Path) -> Result<PathBuf, RunError> {
        let path = dir.join(self.file);
        let mut w = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Necessary)
            .from_path(&path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(path)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'static str,
    config: &'a ExperimentConfig,
    package: &'static str,
    version: &'static str,
    files: Vec<&'static str>,
    rows: Vec<usize>,
    started_unix: u64,
    wall_time_seconds: f64,
}

/// Outcome of a successful run.
#[derive(Debug)]
pub struct RunSummary {
    pub tables: Vec<Table>,
    pub manifest: PathBuf,
}

/// Runs the experiment and writes its CSVs and manifest into `config.out`.
pub fn run(config: &ExperimentConfig) -> Result<RunSummary, RunError> {
    let started = Instant::now();
    let started_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| RunError::Config(format!("thread pool: {e}")))?;
    let tables = pool.install(|| experiments::compute(config))?;

    std::fs::create_dir_all(&config.out)?;
    for t in &tables {
        t.write(&config.out)?;
    }
    let manifest = Manifest {
        experiment: config.experiment.name(),
        config,
        package: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        files: tables.iter().map(|t| t.file).collect(),
        rows: tables.iter().map(|t| t.rows.len()).collect(),
        started_unix,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };
    let path = config.out.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| RunError::Io(e.to_string()))?;
    std::fs::write(&path, json + "\n")?;
    Ok(RunSummary {
        tables,
        manifest: path,
    })
}
