//! In-memory experiment results and their on-disk form: one CSV per table
//! plus a JSON provenance file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

/// One CSV cell. Numbers print with 17 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Real(x) => write!(out, "{x:.16e}"),
            Cell::Int(i) => write!(out, "{i}"),
            Cell::Text(s) => write!(out, "{s}"),
        }
        .expect("writing to a String cannot fail");
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    /// File stem.
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Comma-separated text; `header` lines are written first, prefixed with `# `.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

/// Everything an experiment produced.
#[derive(Clone, Debug)]
pub struct ExperimentRecord {
    pub config: ExperimentConfig,
    pub tables: Vec<Table>,
    /// Scalar results (mean r, revival fidelities, check outcomes, ...).
    pub summary: serde_json::Value,
}

#[derive(Debug, Serialize)]
pub struct Provenance<'a> {
    pub config: &'a ExperimentConfig,
    pub seed: u64,
    pub library_version: &'static str,
    pub wall_time_seconds: f64,
    pub files: Vec<String>,
    pub summary: &'a serde_json::Value,
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn config_header(config: &ExperimentConfig) -> Result<Vec<String>> {
    let json = serde_json::to_string(config).map_err(|e| CliError::Serialize(e.to_string()))?;
    Ok(vec![format!("config {json}")])
}

/// Writes each table of `record` as `<dir>/<name>.csv` with the resolved
/// config as a comment header; returns the written paths.
pub fn emit_plot_data(record: &ExperimentRecord, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let header = config_header(&record.config)?;
    record
        .tables
        .iter()
        .map(|t| {
            let path = dir.join(format!("{}.csv", t.name));
            write_file(&path, &t.to_csv(&header))?;
            Ok(path)
        })
        .collect()
}

/// Writes the CSV tables and `provenance.json`.
pub fn write_record(
    record: &ExperimentRecord,
    dir: &Path,
    wall_time_seconds: f64,
) -> Result<Vec<PathBuf>> {
    let mut paths = emit_plot_data(record, dir)?;
    let provenance = Provenance {
        config: &record.config,
        seed: record.config.seed,
        library_version: env!("CARGO_PKG_VERSION"),
        wall_time_seconds,
        files: paths
            .iter()
            .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
            .collect(),
        summary: &record.summary,
    };
    let json = serde_json::to_string_pretty(&provenance)
        .map_err(|e| CliError::Serialize(e.to_string()))?;
    let path = dir.join("provenance.json");
    write_file(&path, &json)?;
    paths.push(path);
    Ok(paths)
}
