//! Plain-text `key = value` experiment configuration.
//!
//! ```text
//! # Ka-band downlink, RIS on a 15 km HAPS
//! carrier_hz = 18.7e9
//! elements_sweep = 8, 16, 32
//! architectures = sc, fc, gc:4
//! fading = rician
//! k_factor_db = 10
//! ```
//!
//! Unknown keys are errors, missing keys take their defaults and a key may
//! appear at most once.

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

use crate::channel::{build_geometry, AntennaGains, ChannelModel, FadingModel, FadingSpec, LinkGeometry, PhaseMode};
use crate::metrics::RfConfig;
use crate::ris::Architecture;

/// Largest element count a sweep may request.
pub const MAX_ELEMENTS: usize = 1 << 16;
/// Largest trial count per cell.
pub const MAX_TRIALS: usize = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("key {key:?}: expected {expected}")]
    TypeError { key: String, expected: &'static str },
    #[error("key {key:?}: {reason}")]
    ConstraintError { key: String, reason: String },
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
}

fn constraint(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::ConstraintError {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub carrier_hz: f64,
    pub tx_power_dbm: f64,
    pub bandwidth_hz: f64,
    pub noise_psd_dbm_hz: f64,
    pub static_power_w: f64,
    pub leo_altitude_m: f64,
    pub haps_altitude_m: f64,
    pub elements_sweep: Vec<usize>,
    pub architectures: Vec<Architecture>,
    pub fading: FadingSpec,
    pub trials: usize,
    pub seed: u64,
    pub gains: AntennaGains,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 18.7e9,
            tx_power_dbm: 50.0,
            bandwidth_hz: 20e6,
            noise_psd_dbm_hz: -170.0,
            static_power_w: 0.0,
            leo_altitude_m: 600e3,
            haps_altitude_m: 15e3,
            elements_sweep: vec![8, 16, 24, 32, 40, 48, 56, 64],
            architectures: vec![Architecture::SingleConnected, Architecture::FullyConnected],
            fading: FadingSpec::default(),
            trials: 1000,
            seed: 42,
            gains: AntennaGains::default(),
        }
    }
}

const KEYS: &[&str] = &[
    "carrier_hz",
    "tx_power_dbm",
    "bandwidth_hz",
    "noise_psd_dbm_hz",
    "static_power_w",
    "leo_altitude_m",
    "haps_altitude_m",
    "elements_sweep",
    "architectures",
    "fading",
    "k_factor_db",
    "phase_mode",
    "trials",
    "seed",
    "tx_gain_dbi",
    "ris_element_gain_dbi",
    "rx_gain_dbi",
];

fn number(key: &str, value: &str) -> Result<f64, ConfigError> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ConfigError::TypeError {
            key: key.to_string(),
            expected: "a finite number",
        }),
    }
}

fn integer<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse::<T>().map_err(|_| ConfigError::TypeError {
        key: key.to_string(),
        expected: "a non-negative integer",
    })
}

fn list<T, F>(key: &str, value: &str, item: F) -> Result<Vec<T>, ConfigError>
where
    F: Fn(&str) -> Result<T, ConfigError>,
{
    let items = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err(constraint(key, "list must not be empty"));
    }
    Ok(items)
}

/// Parses a configuration document.
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: index + 1,
            text: raw.to_string(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        if entries.insert(key, value).is_some() {
            return Err(constraint(key, "key given more than once"));
        }
    }

    let mut cfg = SimConfig::default();
    let mut k_factor_db = None;
    let mut fading_model = None;
    for (&key, &value) in &entries {
        match key {
            "carrier_hz" => cfg.carrier_hz = number(key, value)?,
            "tx_power_dbm" => cfg.tx_power_dbm = number(key, value)?,
            "bandwidth_hz" => cfg.bandwidth_hz = number(key, value)?,
            "noise_psd_dbm_hz" => cfg.noise_psd_dbm_hz = number(key, value)?,
            "static_power_w" => cfg.static_power_w = number(key, value)?,
            "leo_altitude_m" => cfg.leo_altitude_m = number(key, value)?,
            "haps_altitude_m" => cfg.haps_altitude_m = number(key, value)?,
            "elements_sweep" => cfg.elements_sweep = list(key, value, |s| integer(key, s))?,
            "architectures" => {
                cfg.architectures = list(key, value, |s| {
                    s.parse::<Architecture>().map_err(|_| ConfigError::TypeError {
                        key: key.to_string(),
                        expected: "architecture labels sc, fc or gc:U",
                    })
                })?
            }
            "fading" => {
                fading_model = Some(match value.to_ascii_lowercase().as_str() {
                    "rician" => "rician",
                    "pure_los" => "pure_los",
                    _ => {
                        return Err(ConfigError::TypeError {
                            key: key.to_string(),
                            expected: "rician or pure_los",
                        })
                    }
                })
            }
            "k_factor_db" => k_factor_db = Some(number(key, value)?),
            "phase_mode" => {
                cfg.fading.phase_mode = match value.to_ascii_lowercase().as_str() {
                    "iid_uniform" => PhaseMode::IidUniform,
                    "common_los" => PhaseMode::CommonLos,
                    _ => {
                        return Err(ConfigError::TypeError {
                            key: key.to_string(),
                            expected: "iid_uniform or common_los",
                        })
                    }
                }
            }
            "trials" => cfg.trials = integer(key, value)?,
            "seed" => cfg.seed = integer(key, value)?,
            "tx_gain_dbi" => cfg.gains.tx_gain_dbi = number(key, value)?,
            "ris_element_gain_dbi" => cfg.gains.ris_element_gain_dbi = number(key, value)?,
            "rx_gain_dbi" => cfg.gains.rx_gain_dbi = number(key, value)?,
            _ => unreachable!("key list checked above"),
        }
    }

    cfg.fading.model = match (fading_model, k_factor_db) {
        (Some("pure_los"), Some(_)) => {
            return Err(constraint("k_factor_db", "only applies to rician fading"))
        }
        (Some("pure_los"), None) => FadingModel::PureLos,
        (_, Some(k_factor_db)) => FadingModel::Rician { k_factor_db },
        (_, None) => cfg.fading.model,
    };

    cfg.check()?;
    Ok(cfg)
}

impl FromStr for SimConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_config(s)
    }
}

impl SimConfig {
    /// Checks every constraint that does not depend on (architecture,
    /// element count) pairing.
    pub fn check(&self) -> Result<(), ConfigError> {
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(constraint(key, format!("must be positive, got {v}")))
            }
        };
        positive("carrier_hz", self.carrier_hz)?;
        positive("bandwidth_hz", self.bandwidth_hz)?;
        positive("haps_altitude_m", self.haps_altitude_m)?;
        if !(self.leo_altitude_m > self.haps_altitude_m && self.leo_altitude_m.is_finite()) {
            return Err(constraint(
                "leo_altitude_m",
                format!(
                    "must exceed haps_altitude_m ({} m), got {} m",
                    self.haps_altitude_m, self.leo_altitude_m
                ),
            ));
        }
        if !(self.static_power_w >= 0.0 && self.static_power_w.is_finite()) {
            return Err(constraint("static_power_w", "must be non-negative"));
        }
        for key_value in [
            ("tx_power_dbm", self.tx_power_dbm),
            ("noise_psd_dbm_hz", self.noise_psd_dbm_hz),
            ("tx_gain_dbi", self.gains.tx_gain_dbi),
            ("ris_element_gain_dbi", self.gains.ris_element_gain_dbi),
            ("rx_gain_dbi", self.gains.rx_gain_dbi),
        ] {
            if !key_value.1.is_finite() {
                return Err(constraint(key_value.0, "must be finite"));
            }
        }
        if let FadingModel::Rician { k_factor_db } = self.fading.model {
            if !k_factor_db.is_finite() {
                return Err(constraint("k_factor_db", "must be finite"));
            }
        }
        if self.trials == 0 || self.trials > MAX_TRIALS {
            return Err(constraint("trials", format!("must be in 1..={MAX_TRIALS}")));
        }
        if self.elements_sweep.is_empty() {
            return Err(constraint("elements_sweep", "list must not be empty"));
        }
        if let Some(&bad) = self.elements_sweep.iter().find(|&&m| m == 0 || m > MAX_ELEMENTS) {
            return Err(constraint(
                "elements_sweep",
                format!("element counts must be in 1..={MAX_ELEMENTS}, got {bad}"),
            ));
        }
        if has_duplicates(&self.elements_sweep) {
            return Err(constraint("elements_sweep", "duplicate element count"));
        }
        if self.architectures.is_empty() {
            return Err(constraint("architectures", "list must not be empty"));
        }
        if has_duplicates(&self.architectures) {
            return Err(constraint("architectures", "duplicate architecture"));
        }
        Ok(())
    }

    /// (architecture, element count) cells the sweep will skip because the
    /// group count does not divide the element count.
    pub fn incompatible_cells(&self) -> Vec<(Architecture, usize)> {
        self.architectures
            .iter()
            .flat_map(|arch| {
                self.elements_sweep
                    .iter()
                    .filter(|&&m| arch.check_elements(m).is_err())
                    .map(|&m| (*arch, m))
            })
            .collect()
    }

    pub fn rf(&self) -> RfConfig {
        RfConfig {
            tx_power_dbm: self.tx_power_dbm,
            bandwidth_hz: self.bandwidth_hz,
            noise_psd_dbm_hz: self.noise_psd_dbm_hz,
            static_power_w: self.static_power_w,
        }
    }

    pub fn geometry(&self) -> Result<LinkGeometry, crate::channel::ChannelError> {
        build_geometry(self.leo_altitude_m, self.haps_altitude_m, self.carrier_hz)
    }

    pub fn channel_model(&self) -> Result<ChannelModel, crate::channel::ChannelError> {
        Ok(ChannelModel {
            geometry: self.geometry()?,
            fading: self.fading,
            gains: self.gains,
        })
    }

    /// Canonical `key = value` rendering; [`parse_config`] reads it back to
    /// an identical config.
    pub fn to_config_text(&self) -> String {
        let join = |items: Vec<String>| items.join(", ");
        let mut lines = vec![
            format!("carrier_hz = {}", self.carrier_hz),
            format!("tx_power_dbm = {}", self.tx_power_dbm),
            format!("bandwidth_hz = {}", self.bandwidth_hz),
            format!("noise_psd_dbm_hz = {}", self.noise_psd_dbm_hz),
            format!("static_power_w = {}", self.static_power_w),
            format!("leo_altitude_m = {}", self.leo_altitude_m),
            format!("haps_altitude_m = {}", self.haps_altitude_m),
            format!(
                "elements_sweep = {}",
                join(self.elements_sweep.iter().map(ToString::to_string).collect())
            ),
            format!(
                "architectures = {}",
                join(self.architectures.iter().map(ToString::to_string).collect())
            ),
        ];
        match self.fading.model {
            FadingModel::PureLos => lines.push("fading = pure_los".into()),
            FadingModel::Rician { k_factor_db } => {
                lines.push("fading = rician".into());
                lines.push(format!("k_factor_db = {k_factor_db}"));
            }
        }
        lines.push(format!(
            "phase_mode = {}",
            match self.fading.phase_mode {
                PhaseMode::CommonLos => "common_los",
                PhaseMode::IidUniform => "iid_uniform",
            }
        ));
        lines.push(format!("trials = {}", self.trials));
        lines.push(format!("seed = {}", self.seed));
        lines.push(format!("tx_gain_dbi = {}", self.gains.tx_gain_dbi));
        lines.push(format!("ris_element_gain_dbi = {}", self.gains.ris_element_gain_dbi));
        lines.push(format!("rx_gain_dbi = {}", self.gains.rx_gain_dbi));
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }
}

fn has_duplicates<T: PartialEq>(items: &[T]) -> bool {
    items
        .iter()
        .enumerate()
        .any(|(i, a)| items[..i].contains(a))
}
