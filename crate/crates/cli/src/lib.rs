//! Scenario runner: reads a TOML scenario file or a built-in preset, runs the
//! teleportation scenarios and purification sweeps it describes, and writes
//! CSV tables plus a JSON manifest.

// `!(x > 0.0)` is the NaN-rejecting check used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod presets;

use std::fs;
use std::path::{Path, PathBuf};

use hybrid_teleport::protocol::{purification_sweep, run_teleportation};

use config::{parse_config, parse_dispersion, resolve, DispersionFile, Resolved, RunConfig};
use output::{results_csv, sweeps_csv, RunManifest};

pub const RESULTS_FILE: &str = "results.csv";
pub const SWEEPS_FILE: &str = "sweeps.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Numerical(#[from] hybrid_teleport::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Preset name or path to a scenario file.
    pub target: String,
    pub out_dir: PathBuf,
    pub grid_points: Option<usize>,
    pub dispersion: Option<PathBuf>,
}

/// Loads a preset by name, otherwise reads the target as a file.
pub fn load_target(target: &str) -> Result<(RunConfig, String), CliError> {
    if let Some(p) = presets::find(target) {
        return Ok((presets::load(p), format!("preset:{}", p.name)));
    }
    let text = fs::read_to_string(target).map_err(|e| CliError::Parse {
        origin: target.to_string(),
        message: format!("not a preset ({}) and not readable: {e}", preset_list()),
    })?;
    Ok((parse_config(&text, target)?, target.to_string()))
}

fn preset_list() -> String {
    presets::PRESETS.map(|p| p.name).join(", ")
}

/// Result tables as CSV text; `None` when the config has no such blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Tables {
    pub results: Option<String>,
    pub sweeps: Option<String>,
}

pub fn compute(resolved: &Resolved) -> Result<Tables, CliError> {
    let mut rows = Vec::with_capacity(resolved.scenarios.len());
    for (cfg, label) in resolved.scenarios.iter().zip(&resolved.input_labels) {
        log::info!("teleportation {} input {label}", cfg.name);
        rows.push((label.clone(), run_teleportation(cfg)?));
    }
    let mut sweeps = Vec::with_capacity(resolved.sweeps.len());
    for spec in &resolved.sweeps {
        log::info!("sweep {} over {} points", spec.name, spec.values.len());
        let points = purification_sweep(&spec.base, &spec.values, spec.side, spec.variable)?;
        sweeps.push((spec.clone(), points));
    }
    Ok(Tables {
        results: (!rows.is_empty()).then(|| results_csv(&rows)),
        sweeps: (!sweeps.is_empty()).then(|| sweeps_csv(&sweeps)),
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

pub fn run(opts: &RunOptions) -> Result<RunManifest, CliError> {
    let (mut cfg, source) = load_target(&opts.target)?;
    if let Some(n) = opts.grid_points {
        cfg.grid.points = n;
    }
    let dispersion: Option<DispersionFile> = match &opts.dispersion {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Parse {
                origin: path.display().to_string(),
                message: format!("cannot read dispersion file: {e}"),
            })?;
            Some(parse_dispersion(&text, &path.display().to_string())?)
        }
        None => None,
    };
    let resolved = resolve(&cfg, dispersion.as_ref())?;
    let tables = compute(&resolved)?;

    fs::create_dir_all(&opts.out_dir)
        .map_err(|e| CliError::io(format!("creating {}", opts.out_dir.display()), e))?;
    let mut outputs = Vec::new();
    for (name, table) in [(RESULTS_FILE, &tables.results), (SWEEPS_FILE, &tables.sweeps)] {
        if let Some(text) = table {
            let path = opts.out_dir.join(name);
            write(&path, text)?;
            outputs.push(path.display().to_string());
        }
    }
    let manifest_path = opts.out_dir.join(MANIFEST_FILE);
    outputs.push(manifest_path.display().to_string());
    let manifest = RunManifest {
        scenario: cfg.name.clone(),
        source,
        grid: cfg.grid,
        config: cfg,
        dispersion,
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        outputs,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    write(&manifest_path, &manifest.to_json())?;
    Ok(manifest)
}

pub fn list_presets() -> String {
    presets::PRESETS.iter().map(presets::describe).collect::<Vec<_>>().join("\n")
}
