//! Scenario configs and runners behind the `ptmetric` binary.
//!
//! A run writes `<scenario>.csv` (or `.json`) and `manifest.json` into an
//! output directory.

mod config;
mod expr;
mod run;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{
    parse_config, GridSpec, OutputFormat, OverlapSource, RawConfig, ScenarioConfig, ScenarioKind,
    SpMode,
};
pub use expr::evaluate;
pub use run::{compute, format_num, run_lengths, Cell, Payload, ScenarioOutput, Table, SCHEMA_VERSION};

use crate::error::Error;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(Error),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("numerical error at {context}: {source}")]
    Numerical { context: String, source: Error },
}

impl RunError {
    /// 1 for config and I/O problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io { .. } => 1,
            RunError::Numerical { .. } => 2,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Config(e)
    }
}

/// Files written by [`run`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub data: PathBuf,
    pub manifest: PathBuf,
}

fn write(path: &Path, contents: &str) -> Result<(), RunError> {
    fs::write(path, contents).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Computes the scenario on a pool of `cfg.threads` workers (rayon's
/// default when unset) and writes the data file and manifest to `out_dir`.
pub fn run(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunReport, RunError> {
    let output = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::Config(Error::Validation(format!("thread pool: {e}"))))?
            .install(|| compute(cfg))?,
        None => compute(cfg)?,
    };
    fs::create_dir_all(out_dir).map_err(|source| RunError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let data = out_dir.join(output.file_name(cfg.format));
    write(&data, &output.render(cfg.format))?;
    let manifest = out_dir.join("manifest.json");
    write(&manifest, &output.manifest(cfg))?;
    Ok(RunReport { data, manifest })
}
