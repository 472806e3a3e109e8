//! Monte-Carlo sweep over architectures and element counts.
//!
//! Every trial index owns one channel realization, shared by all
//! architectures and element counts of the sweep: the realization for `M`
//! elements is the first `M` elements of the one for any larger count.
//! Comparisons between architectures and between element counts are
//! therefore paired, trial by trial.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::ChannelError;
use crate::metrics::{link_report, LinkReport, MetricsError};
use crate::optimizer::{optimize, OptimizeError};
use crate::ris::{effective_channel, Architecture, RisError};

use super::config::{ConfigError, SimConfig};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function; a bijection on `u64`.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Realization seed for `trial` under the run seed `base`.
///
/// Injective in `trial` for a fixed `base`: `trial ↦ base + (trial+1)·γ` is
/// a bijection modulo 2⁶⁴ for odd `γ`, and so is the mixer.
pub fn child_seed(base: u64, trial: u64) -> u64 {
    mix64(base.wrapping_add(trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Trial column of a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TrialTag {
    Index(u64),
    Mean,
    StdErr,
}

impl fmt::Display for TrialTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrialTag::Index(i) => write!(f, "{i}"),
            TrialTag::Mean => f.write_str("mean"),
            TrialTag::StdErr => f.write_str("stderr"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub arch: Architecture,
    pub elements: usize,
    pub trial: TrialTag,
    pub h_eff_mag: f64,
    pub snr_db: f64,
    pub rate_bps: f64,
    pub ee_bits_per_joule: f64,
    /// Realization seed for trial rows, run seed for aggregate rows.
    pub seed: u64,
}

impl SweepRecord {
    fn from_report(arch: Architecture, elements: usize, trial: TrialTag, seed: u64, r: LinkReport) -> Self {
        Self {
            arch,
            elements,
            trial,
            h_eff_mag: r.h_eff_mag,
            snr_db: r.snr_db,
            rate_bps: r.rate_bps,
            ee_bits_per_joule: r.ee_bits_per_joule,
            seed,
        }
    }

    pub fn is_aggregate(&self) -> bool {
        !matches!(self.trial, TrialTag::Index(_))
    }

    fn values(&self) -> [f64; 4] {
        [self.h_eff_mag, self.snr_db, self.rate_bps, self.ee_bits_per_joule]
    }
}

#[derive(Debug, Error)]
pub enum CellError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Ris(#[from] RisError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("arch {arch}, M = {elements}, trial {trial}: {source}")]
    Cell {
        arch: Architecture,
        elements: usize,
        trial: u64,
        #[source]
        source: CellError,
    },
    #[error("could not build worker pool: {0}")]
    ThreadPool(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// One trial: every compatible (architecture, element count) cell,
/// in canonical cell order.
fn run_trial(
    cfg: &SimConfig,
    cells: &[(Architecture, usize)],
    model: &crate::channel::ChannelModel,
    trial: u64,
) -> Result<Vec<SweepRecord>, SweepError> {
    let seed = child_seed(cfg.seed, trial);
    let rf = cfg.rf();
    let mut out = Vec::with_capacity(cells.len());
    let mut cached: Option<(usize, crate::ris::ChannelSet)> = None;
    for &(arch, elements) in cells {
        let ctx = |source: CellError| SweepError::Cell {
            arch,
            elements,
            trial,
            source,
        };
        let ch = match &cached {
            Some((m, ch)) if *m == elements => ch.clone(),
            _ => {
                let ch = model
                    .generate(elements, seed)
                    .map_err(|e| ctx(e.into()))?;
                cached = Some((elements, ch.clone()));
                ch
            }
        };
        let design = optimize(&ch, arch).map_err(|e| ctx(e.into()))?;
        let h_eff = effective_channel(&design.phi, &ch).map_err(|e| ctx(e.into()))?;
        let report = link_report(h_eff, &rf).map_err(|e| ctx(e.into()))?;
        out.push(SweepRecord::from_report(arch, elements, TrialTag::Index(trial), seed, report));
    }
    Ok(out)
}

/// Cells in output order: architectures in config order, then element
/// counts in sweep order. Incompatible group counts are skipped with a
/// warning.
pub fn sweep_cells(cfg: &SimConfig) -> Vec<(Architecture, usize)> {
    let mut cells = Vec::new();
    for &arch in &cfg.architectures {
        for &m in &cfg.elements_sweep {
            match arch.check_elements(m) {
                Ok(()) => cells.push((arch, m)),
                Err(e) => log::warn!("skipping {arch} at M = {m}: {e}"),
            }
        }
    }
    cells
}

/// Runs the sweep on the current rayon pool.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<SweepRecord>, SweepError> {
    cfg.check()?;
    let model = cfg.channel_model()?;
    let cells = sweep_cells(cfg);
    // Cells sharing an element count are adjacent in this order, so each
    // trial draws each realization once.
    let mut by_elements: Vec<usize> = (0..cells.len()).collect();
    by_elements.sort_by_key(|&i| (cells[i].1, i));
    let ordered: Vec<(Architecture, usize)> = by_elements.iter().map(|&i| cells[i]).collect();

    let per_trial: Vec<Vec<SweepRecord>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| run_trial(cfg, &ordered, &model, trial))
        .collect::<Result<_, _>>()?;

    let trials = per_trial.len();
    let mut records = Vec::with_capacity(cells.len() * (trials + 2));
    for (cell, &(arch, elements)) in cells.iter().enumerate() {
        let slot = by_elements.iter().position(|&i| i == cell).expect("cell present");
        let start = records.len();
        records.extend(per_trial.iter().map(|rows| rows[slot]));
        let (mean, stderr) = aggregate(&records[start..]);
        let agg = |trial, v: [f64; 4]| SweepRecord {
            arch,
            elements,
            trial,
            h_eff_mag: v[0],
            snr_db: v[1],
            rate_bps: v[2],
            ee_bits_per_joule: v[3],
            seed: cfg.seed,
        };
        records.push(agg(TrialTag::Mean, mean));
        records.push(agg(TrialTag::StdErr, stderr));
    }
    Ok(records)
}

/// Runs the sweep on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(cfg: &SimConfig, threads: usize) -> Result<Vec<SweepRecord>, SweepError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SweepError::ThreadPool(e.to_string()))?;
    pool.install(|| run_sweep(cfg))
}

/// Column-wise [`mean_and_stderr`].
fn aggregate(rows: &[SweepRecord]) -> ([f64; 4], [f64; 4]) {
    let mut mean = [0.0; 4];
    let mut stderr = [0.0; 4];
    for k in 0..4 {
        let column: Vec<f64> = rows.iter().map(|r| r.values()[k]).collect();
        (mean[k], stderr[k]) = mean_and_stderr(&column);
    }
    (mean, stderr)
}

/// Mean and standard error of the mean (sample standard deviation over
/// √n; NaN for a single value).
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mu = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (n - 1.0);
    (mu, if values.len() > 1 { (var / n).sqrt() } else { f64::NAN })
}
