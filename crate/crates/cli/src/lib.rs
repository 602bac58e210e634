//! Configuration, experiment drivers and CSV/JSON export for the
//! `onsager-scars` binary.

pub mod config;
pub mod error;
pub mod experiments;
pub mod record;
pub mod verify;

use std::path::PathBuf;
use std::time::Instant;

pub use config::{ExperimentConfig, ExperimentKind, Overrides};
pub use error::{CliError, ErrorReport, Result};
pub use experiments::run;
pub use record::{emit_plot_data, ExperimentRecord, Table};

/// Runs `config`, writes its files into the configured output directory and
/// returns the written paths. A failing `verify` run still writes its table.
pub fn execute(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let start = Instant::now();
    let record = run(config)?;
    let paths = record::write_record(&record, &config.output_dir(), start.elapsed().as_secs_f64())?;
    if config.experiment == ExperimentKind::Verify {
        let failed = record.summary["failed"].as_u64().unwrap_or(0) as usize;
        if failed > 0 {
            let total = record.summary["checks"].as_u64().unwrap_or(0) as usize;
            return Err(CliError::VerifyFailed { failed, total });
        }
    }
    Ok(paths)
}
