//! `ris-ntn-sim` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ris_ntn_sim::channel::fspl_db;
use ris_ntn_sim::experiment::{emit_csv, parse_config, run_sweep, run_sweep_with_threads, SimConfig};
use ris_ntn_sim::ris::Architecture;

#[derive(Parser)]
#[command(name = "ris-ntn-sim", version, about = "RIS-assisted LEO/HAPS downlink simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the energy-efficiency sweep and write CSV plus a metadata sidecar.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated architectures, e.g. `sc,fc,gc:4`.
        #[arg(long)]
        arch: Option<String>,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse a config and report constraint problems without running.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the free-space path loss of one hop in dB.
    Budget {
        #[arg(long = "distance-m")]
        distance_m: f64,
        #[arg(long = "freq-hz")]
        freq_hz: f64,
    },
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl Failure {
    fn report(&self) -> ExitCode {
        let (kind, code, msg) = match self {
            Failure::Config(m) => ("config", 2, m),
            Failure::Runtime(m) => ("runtime", 3, m),
        };
        eprintln!("error kind={kind} message={msg:?}");
        ExitCode::from(code)
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<SimConfig, Failure> {
    let Some(path) = path else {
        return Ok(SimConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| Failure::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep {
            config,
            out,
            trials,
            seed,
            arch,
            threads,
        } => {
            let mut cfg = load_config(config.as_ref())?;
            if let Some(trials) = trials {
                cfg.trials = trials;
            }
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(arch) = arch {
                cfg.architectures = arch
                    .split(',')
                    .map(|s| s.parse::<Architecture>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| Failure::Config(e.to_string()))?;
            }
            cfg.check().map_err(|e| Failure::Config(e.to_string()))?;
            let records = match threads {
                Some(n) => run_sweep_with_threads(&cfg, n),
                None => run_sweep(&cfg),
            }
            .map_err(|e| Failure::Runtime(e.to_string()))?;
            emit_csv(&records, &cfg, &out).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))?;
            println!("wrote {} records to {}", records.len(), out.display());
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = load_config(Some(&config))?;
            cfg.geometry().map_err(|e| Failure::Config(e.to_string()))?;
            for (arch, m) in cfg.incompatible_cells() {
                println!("warning: {arch} does not divide M = {m}; cell will be skipped");
            }
            print!("{}", cfg.to_config_text());
            Ok(())
        }
        Command::Budget { distance_m, freq_hz } => {
            let loss = fspl_db(distance_m, freq_hz).map_err(|e| Failure::Config(e.to_string()))?;
            println!("{loss:.4}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
