//! Received SNR, Shannon rate and energy efficiency for a scalar channel.

use thiserror::Error;

use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("transmit power must be positive, got {0} W")]
    NonPositivePower(f64),
    #[error("invalid RF configuration: {0}")]
    InvalidRf(String),
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Transmit and receiver-side RF parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfConfig {
    pub tx_power_dbm: f64,
    pub bandwidth_hz: f64,
    /// Noise power spectral density in dBm/Hz.
    pub noise_psd_dbm_hz: f64,
    /// Additive static power in the energy-efficiency denominator, W.
    pub static_power_w: f64,
}

impl Default for RfConfig {
    fn default() -> Self {
        Self {
            tx_power_dbm: 50.0,
            bandwidth_hz: 20e6,
            noise_psd_dbm_hz: -170.0,
            static_power_w: 0.0,
        }
    }
}

impl RfConfig {
    pub fn validate(&self) -> Result<(), MetricsError> {
        if !(self.bandwidth_hz > 0.0 && self.bandwidth_hz.is_finite()) {
            return Err(MetricsError::InvalidRf(format!(
                "bandwidth must be positive, got {} Hz",
                self.bandwidth_hz
            )));
        }
        if !self.tx_power_dbm.is_finite() || !self.noise_psd_dbm_hz.is_finite() {
            return Err(MetricsError::InvalidRf("powers must be finite".into()));
        }
        if !(self.static_power_w >= 0.0 && self.static_power_w.is_finite()) {
            return Err(MetricsError::InvalidRf(format!(
                "static power must be non-negative, got {} W",
                self.static_power_w
            )));
        }
        Ok(())
    }

    pub fn tx_power_watts(&self) -> f64 {
        dbm_to_watts(self.tx_power_dbm)
    }

    /// In-band noise power `N0 · B` in dBm.
    pub fn noise_power_dbm(&self) -> f64 {
        self.noise_psd_dbm_hz + linear_to_db(self.bandwidth_hz)
    }

    pub fn noise_power_watts(&self) -> f64 {
        dbm_to_watts(self.noise_psd_dbm_hz) * self.bandwidth_hz
    }
}

/// `P_tx |h_eff|² / (N0 B)`.
pub fn snr_linear(h_eff: C64, rf: &RfConfig) -> f64 {
    rf.tx_power_watts() * h_eff.norm_sqr() / rf.noise_power_watts()
}

/// SNR in dB; a zero channel gives `-inf`.
pub fn snr_db(h_eff: C64, rf: &RfConfig) -> f64 {
    linear_to_db(snr_linear(h_eff, rf))
}

/// Shannon rate `B log2(1 + SNR)` in bits/s.
pub fn rate(h_eff: C64, rf: &RfConfig) -> f64 {
    rate_from_snr(snr_linear(h_eff, rf), rf.bandwidth_hz)
}

pub fn rate_from_snr(snr_linear: f64, bandwidth_hz: f64) -> f64 {
    bandwidth_hz * snr_linear.ln_1p() / std::f64::consts::LN_2
}

/// Bits per joule: rate over transmit power (plus any static power).
pub fn energy_efficiency(rate_bps: f64, rf: &RfConfig) -> Result<f64, MetricsError> {
    let tx = rf.tx_power_watts();
    if !(tx > 0.0) {
        return Err(MetricsError::NonPositivePower(tx));
    }
    Ok(rate_bps / (tx + rf.static_power_w))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkReport {
    pub h_eff_mag: f64,
    pub snr_db: f64,
    pub rate_bps: f64,
    pub ee_bits_per_joule: f64,
}

pub fn link_report(h_eff: C64, rf: &RfConfig) -> Result<LinkReport, MetricsError> {
    rf.validate()?;
    let snr = snr_linear(h_eff, rf);
    let rate_bps = rate_from_snr(snr, rf.bandwidth_hz);
    Ok(LinkReport {
        h_eff_mag: h_eff.norm(),
        snr_db: linear_to_db(snr),
        rate_bps,
        ee_bits_per_joule: energy_efficiency(rate_bps, rf)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(tx: f64, bw: f64, n0: f64) -> RfConfig {
        RfConfig {
            tx_power_dbm: tx,
            bandwidth_hz: bw,
            noise_psd_dbm_hz: n0,
            static_power_w: 0.0,
        }
    }

    #[test]
    fn snr_db_identity() {
        let s = snr_db(C64::new(1.0, 0.0), &rf(0.0, 1.0, -174.0));
        assert!((s - 174.0).abs() < 1e-9);
    }

    #[test]
    fn zero_channel() {
        let cfg = RfConfig::default();
        let zero = C64::new(0.0, 0.0);
        assert_eq!(snr_db(zero, &cfg), f64::NEG_INFINITY);
        assert_eq!(rate(zero, &cfg), 0.0);
        assert_eq!(energy_efficiency(0.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn unit_snr_gives_one_bit_per_hertz() {
        assert_eq!(rate_from_snr(1.0, 2e7), 2e7);
    }

    #[test]
    fn ee_divides_by_hundred_watts() {
        let cfg = RfConfig::default();
        assert_eq!(cfg.tx_power_watts(), 100.0);
        assert_eq!(energy_efficiency(2e7, &cfg).unwrap(), 2e5);
    }

    #[test]
    fn static_power_adds_to_denominator() {
        let cfg = RfConfig {
            static_power_w: 100.0,
            ..RfConfig::default()
        };
        assert_eq!(energy_efficiency(2e7, &cfg).unwrap(), 1e5);
    }

    #[test]
    fn noise_power_default() {
        assert!((RfConfig::default().noise_power_dbm() - (-96.9897)).abs() < 1e-4);
    }

    #[test]
    fn invalid_rf_rejected() {
        let report = link_report(C64::new(1.0, 0.0), &rf(50.0, 0.0, -170.0));
        assert!(matches!(report, Err(MetricsError::InvalidRf(_))));
        assert!(link_report(C64::new(1.0, 0.0), &rf(f64::NAN, 1.0, -170.0)).is_err());
    }

    #[test]
    fn report_is_consistent() {
        let cfg = RfConfig::default();
        let r = link_report(C64::new(3e-9, -4e-9), &cfg).unwrap();
        assert!((r.h_eff_mag - 5e-9).abs() < 1e-22);
        assert_eq!(r.ee_bits_per_joule, r.rate_bps / cfg.tx_power_watts());
    }
}
