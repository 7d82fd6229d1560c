//! Output files and run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::experiment::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Provenance record written next to every output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub method: String,
    pub config_digest: String,
    pub seed: u64,
    pub start: String,
    pub end: String,
    pub outputs: Vec<String>,
    pub toolkit_version: String,
}

/// SHA-256 of the canonical config JSON, hex encoded.
pub fn config_digest(cfg: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(cfg.canonical_json().as_bytes()))
}

pub fn render(table: &Table, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(&table.to_json()).expect("table serializes");
            bytes.push(b'\n');
            bytes
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Writes `<stem>.<ext>` and `<stem>.manifest.json` into `dir`; returns both paths.
pub fn write_outputs(
    dir: &Path,
    stem: &str,
    table: &Table,
    format: Format,
    manifest: &mut RunManifest,
) -> Result<(PathBuf, PathBuf), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let data_name = format!("{stem}.{}", format.extension());
    let data_path = dir.join(&data_name);
    fs::write(&data_path, render(table, format)).map_err(|e| io_err(&data_path, e))?;
    manifest.outputs = vec![data_name];
    let manifest_path = dir.join(format!("{stem}.manifest.json"));
    let mut bytes = serde_json::to_vec_pretty(manifest).expect("manifest serializes");
    bytes.push(b'\n');
    fs::write(&manifest_path, bytes).map_err(|e| io_err(&manifest_path, e))?;
    Ok((data_path, manifest_path))
}
