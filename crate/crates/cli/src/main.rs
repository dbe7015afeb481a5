use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hybrid_teleport_cli::{list_presets, run, RunOptions};

#[derive(Parser)]
#[command(name = "hybrid-teleport", version, about = "Teleportation through local dephasing channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a scenario file and write CSV tables plus a manifest.
    Run {
        /// Preset name (see list-presets) or path to a TOML scenario file.
        target: String,
        #[arg(long, env = "HYBRID_TELEPORT_OUT", default_value = "out")]
        out: PathBuf,
        /// Overrides the grid resolution of every spectrum.
        #[arg(long)]
        grid_points: Option<usize>,
        /// TOML file of index polynomials keyed by element preset name.
        #[arg(long)]
        dispersion: Option<PathBuf>,
    },
    /// List the built-in presets and their parameters.
    ListPresets,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::ListPresets => {
            print!("{}", list_presets());
            ExitCode::SUCCESS
        }
        Command::Run {
            target,
            out,
            grid_points,
            dispersion,
        } => {
            let opts = RunOptions {
                target,
                out_dir: out,
                grid_points,
                dispersion,
            };
            match run(&opts) {
                Ok(manifest) => {
                    for path in &manifest.outputs {
                        println!("{path}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
