//! Experiment harness: configuration, the Monte-Carlo sweep over element
//! counts and architectures, and CSV output.

pub mod config;
pub mod output;
pub mod sweep;

pub use config::{parse_config, ConfigError, SimConfig};
pub use output::{emit_csv, metadata_path, write_csv, CSV_HEADER};
pub use sweep::{child_seed, run_sweep, run_sweep_with_threads, SweepError, SweepRecord, TrialTag};
