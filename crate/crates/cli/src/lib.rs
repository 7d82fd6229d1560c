//! Batch front end: JSON experiment configs in, CSV tables and run manifests out.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;

pub use config::{ExperimentConfig, Method, Sweep};
pub use error::CliError;
pub use experiment::{point_seed, run_experiment, Cell, RunContext, Table};
pub use output::{config_digest, Format, RunManifest};

#[derive(Debug, Parser)]
#[command(
    name = "manybody",
    version,
    about = "Run a many-body experiment from a JSON config"
)]
pub struct Args {
    /// Experiment configuration (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Seed; overrides the one in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Circuit in the line-oriented text format, for the circuit method.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn same_file(a: &Path, b: &Path) -> bool {
    matches!((fs::canonicalize(a), fs::canonicalize(b)), (Ok(x), Ok(y)) if x == y)
}

/// Runs a parsed command line; returns the manifest on success.
pub fn run(args: &Args, command: String) -> Result<RunManifest, CliError> {
    let start = chrono::Utc::now();
    let cfg = ExperimentConfig::from_json(&read(&args.config)?)?;
    let ctx = RunContext {
        circuit_text: args.circuit.as_ref().map(read).transpose()?,
    };
    if ctx.circuit_text.is_some() && cfg.method != Method::Circuit {
        return Err(CliError::config(
            Some("circuit"),
            "--circuit only applies to the circuit method",
        ));
    }
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let stem = args
        .config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| cfg.method.name().to_owned());
    let target = args.out.join(format!("{stem}.{}", args.format.extension()));
    if same_file(&target, &args.config) {
        return Err(CliError::config(
            Some("out"),
            format!("output {} would overwrite the config", target.display()),
        ));
    }
    let table = run_experiment(&cfg, seed, &ctx)?;
    let mut manifest = RunManifest {
        command,
        method: cfg.method.name().to_owned(),
        config_digest: config_digest(&cfg),
        seed,
        start: start.to_rfc3339(),
        end: String::new(),
        outputs: Vec::new(),
        toolkit_version: env!("CARGO_PKG_VERSION").to_owned(),
    };
    manifest.end = chrono::Utc::now().to_rfc3339();
    output::write_outputs(&args.out, &stem, &table, args.format, &mut manifest)?;
    Ok(manifest)
}
