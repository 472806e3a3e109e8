//! CSV and metadata sidecar emission.
//!
//! The CSV header is fixed:
//!
//! ```text
//! arch,elements,trial,h_eff_mag,snr_db,rate_bps,ee_bits_per_joule,seed
//! ```
//!
//! Floats use 17 significant digits in scientific notation so they parse
//! back to the same `f64`. The sidecar (`<name>.meta.txt` next to the CSV)
//! holds the resolved config and run notes; everything above its
//! `[volatile]` section is reproducible byte for byte.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use super::config::SimConfig;
use super::sweep::SweepRecord;

pub const CSV_HEADER: &str = "arch,elements,trial,h_eff_mag,snr_db,rate_bps,ee_bits_per_joule,seed";

/// Marks the start of the non-reproducible part of the sidecar.
pub const VOLATILE_MARKER: &str = "[volatile]";

pub const NOISE_PSD_NOTE: &str = "noise_psd_dbm_hz is read as a power spectral density in dBm/Hz; \
in-band noise power = noise_psd_dbm_hz + 10*log10(bandwidth_hz) dBm";

pub const RNG_NOTE: &str = "ChaCha8 (rand_chacha), one stream per (hop, element); \
trial seed = splitmix64_mix(seed + (trial + 1) * 0x9E3779B97F4A7C15)";

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(records: &[SweepRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.arch,
            r.elements,
            r.trial,
            format_float(r.h_eff_mag),
            format_float(r.snr_db),
            format_float(r.rate_bps),
            format_float(r.ee_bits_per_joule),
            r.seed
        )?;
    }
    out.flush()
}

/// Sidecar path for a CSV path: `runs/fig5.csv` → `runs/fig5.meta.txt`.
pub fn metadata_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.txt")
}

/// Sidecar text. `generated_unix_s` goes under [`VOLATILE_MARKER`].
pub fn metadata_text(cfg: &SimConfig, record_count: usize, generated_unix_s: Option<u64>) -> String {
    let mut text = String::new();
    text.push_str("# ris-ntn-sim run metadata\n");
    text.push_str(&format!(
        "software = {} {}\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    ));
    text.push_str(&format!("noise_psd_interpretation = {NOISE_PSD_NOTE}\n"));
    text.push_str(&format!("rng = {RNG_NOTE}\n"));
    text.push_str(&format!("records = {record_count}\n"));
    let skipped = cfg.incompatible_cells();
    if !skipped.is_empty() {
        let list: Vec<String> = skipped.iter().map(|(a, m)| format!("{a}@{m}")).collect();
        text.push_str(&format!("skipped_cells = {}\n", list.join(", ")));
    }
    text.push_str("[config]\n");
    text.push_str(&cfg.to_config_text());
    text.push_str(VOLATILE_MARKER);
    text.push('\n');
    if let Some(ts) = generated_unix_s {
        text.push_str(&format!("generated_unix_s = {ts}\n"));
    }
    text
}

/// Writes `records` as CSV to `path` and the metadata sidecar next to it.
pub fn emit_csv(records: &[SweepRecord], cfg: &SimConfig, path: &Path) -> io::Result<()> {
    write_csv(records, BufWriter::new(fs::File::create(path)?))?;
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .ok();
    fs::write(metadata_path(path), metadata_text(cfg, records.len(), now))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::sweep::TrialTag;
    use crate::ris::Architecture;

    fn record() -> SweepRecord {
        SweepRecord {
            arch: Architecture::GroupConnected { group_count: 4 },
            elements: 32,
            trial: TrialTag::Index(3),
            h_eff_mag: 1.0 / 3.0,
            snr_db: f64::NEG_INFINITY,
            rate_bps: 0.0,
            ee_bits_per_joule: 123.456,
            seed: 99,
        }
    }

    fn csv(records: &[SweepRecord]) -> String {
        let mut buf = Vec::new();
        write_csv(records, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_records_give_header_only() {
        assert_eq!(csv(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn one_record_gives_two_lines() {
        let text = csv(&[record()]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("gc:4,32,3,"));
        assert!(lines[1].ends_with(",99"));
        assert!(lines[1].contains("-inf"));
    }

    #[test]
    fn floats_round_trip() {
        for x in [1.0 / 3.0, 2e-308, 6.02214076e23, -0.0, 123.456] {
            assert_eq!(format_float(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn metadata_records_interpretation() {
        let text = metadata_text(&SimConfig::default(), 10, Some(5));
        assert!(text.contains("dBm/Hz"));
        assert!(text.contains("trials = 1000"));
        let (stable, volatile) = text.split_once(VOLATILE_MARKER).unwrap();
        assert!(!stable.contains("generated_unix_s"));
        assert!(volatile.contains("generated_unix_s = 5"));
    }

    #[test]
    fn sidecar_path() {
        assert_eq!(metadata_path(Path::new("out/run.csv")), PathBuf::from("out/run.meta.txt"));
    }
}
