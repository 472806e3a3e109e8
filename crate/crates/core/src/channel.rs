//! Link geometry, free-space path loss and seeded channel realizations.
//!
//! Random draws come from ChaCha8 (`rand_chacha::ChaCha8Rng`). Every
//! (link, element) pair owns a fixed ChaCha stream under the realization
//! seed, so a realization with `M + 1` elements extends the one with `M`
//! elements without disturbing it, and the output never depends on the
//! order in which elements are generated.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::ris::ChannelSet;
use crate::{CVector, C64};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Ka-band downlink edges, Hz.
pub const KA_BAND_HZ: (f64, f64) = (17.7e9, 19.7e9);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },
    #[error("invalid altitudes: need leo ({leo_m} m) > haps ({haps_m} m) > 0")]
    InvalidAltitudes { leo_m: f64, haps_m: f64 },
    #[error("a surface needs at least one element")]
    NoElements,
    #[error("Rician K-factor must be finite, got {0} dB")]
    InvalidKFactor(f64),
}

fn positive(name: &'static str, value: f64) -> Result<f64, ChannelError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ChannelError::NonPositiveInput { name, value })
    }
}

/// Free-space amplitude gain `λ / (4π d)`.
pub fn fspl_amplitude(distance_m: f64, freq_hz: f64) -> Result<f64, ChannelError> {
    let d = positive("distance", distance_m)?;
    let f = positive("frequency", freq_hz)?;
    Ok(SPEED_OF_LIGHT / (4.0 * PI * d * f))
}

/// Free-space path loss `20 log10(4π d f / c)` in dB.
pub fn fspl_db(distance_m: f64, freq_hz: f64) -> Result<f64, ChannelError> {
    Ok(-20.0 * fspl_amplitude(distance_m, freq_hz)?.log10())
}

/// Nadir geometry: satellite, HAPS and terminal on one vertical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub leo_altitude_m: f64,
    pub haps_altitude_m: f64,
    pub carrier_hz: f64,
    pub d_direct_m: f64,
    pub d_leo_ris_m: f64,
    pub d_ris_ut_m: f64,
}

impl LinkGeometry {
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    pub fn in_ka_band(&self) -> bool {
        self.carrier_hz > KA_BAND_HZ.0 && self.carrier_hz < KA_BAND_HZ.1
    }
}

/// Builds the nadir geometry: `d_direct = leo`, `d_leo_ris = leo − haps`,
/// `d_ris_ut = haps`.
pub fn build_geometry(
    leo_altitude_m: f64,
    haps_altitude_m: f64,
    carrier_hz: f64,
) -> Result<LinkGeometry, ChannelError> {
    let ordered = haps_altitude_m > 0.0 && leo_altitude_m > haps_altitude_m;
    if !(ordered && leo_altitude_m.is_finite()) {
        return Err(ChannelError::InvalidAltitudes {
            leo_m: leo_altitude_m,
            haps_m: haps_altitude_m,
        });
    }
    positive("carrier frequency", carrier_hz)?;
    let geom = LinkGeometry {
        leo_altitude_m,
        haps_altitude_m,
        carrier_hz,
        d_direct_m: leo_altitude_m,
        d_leo_ris_m: leo_altitude_m - haps_altitude_m,
        d_ris_ut_m: haps_altitude_m,
    };
    if !geom.in_ka_band() {
        log::warn!(
            "carrier {:.4} GHz lies outside the Ka-band downlink (17.7-19.7 GHz)",
            carrier_hz / 1e9
        );
    }
    Ok(geom)
}

/// Small-scale fading law applied to every hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingModel {
    /// Deterministic line of sight, `|fade| = 1`.
    PureLos,
    /// `√(κ/(κ+1))·e^{jθ} + √(1/(κ+1))·z`, `z ~ CN(0, 1)`.
    Rician { k_factor_db: f64 },
}

/// How the line-of-sight phase `θ` is chosen per element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    /// `θ = 0` for every element.
    CommonLos,
    /// `θ ~ U[0, 2π)` independently per element.
    IidUniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSpec {
    pub model: FadingModel,
    pub phase_mode: PhaseMode,
}

impl Default for FadingSpec {
    fn default() -> Self {
        Self {
            model: FadingModel::Rician { k_factor_db: 10.0 },
            phase_mode: PhaseMode::IidUniform,
        }
    }
}

impl FadingSpec {
    pub const PURE_LOS: FadingSpec = FadingSpec {
        model: FadingModel::PureLos,
        phase_mode: PhaseMode::CommonLos,
    };

    pub fn rician(k_factor_db: f64, phase_mode: PhaseMode) -> Self {
        Self {
            model: FadingModel::Rician { k_factor_db },
            phase_mode,
        }
    }

    fn check(&self) -> Result<(), ChannelError> {
        match self.model {
            FadingModel::Rician { k_factor_db } if !k_factor_db.is_finite() => {
                Err(ChannelError::InvalidKFactor(k_factor_db))
            }
            _ => Ok(()),
        }
    }

    /// Draws one fading coefficient from `rng`.
    ///
    /// The LOS phase is drawn first, so Rician draws with a huge K-factor
    /// converge to the pure-LOS draws of the same stream.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> C64 {
        let theta = match self.phase_mode {
            PhaseMode::CommonLos => 0.0,
            PhaseMode::IidUniform => rng.random::<f64>() * TAU,
        };
        let los = C64::from_polar(1.0, theta);
        match self.model {
            FadingModel::PureLos => los,
            FadingModel::Rician { k_factor_db } => {
                let kappa = 10f64.powf(k_factor_db / 10.0);
                let diffuse = complex_gaussian(rng);
                los * (kappa / (kappa + 1.0)).sqrt() + diffuse * (1.0 / (kappa + 1.0)).sqrt()
            }
        }
    }
}

/// Circularly-symmetric standard complex Gaussian, `E|z|² = 1`.
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Antenna and element gains in dBi, folded into the hop amplitudes:
/// `h` carries tx·element, `g` carries element·rx, `h_d` carries tx·rx.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AntennaGains {
    pub tx_gain_dbi: f64,
    pub ris_element_gain_dbi: f64,
    pub rx_gain_dbi: f64,
}

fn db_to_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// Which hop a random stream belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Hop {
    LeoToRis = 0,
    RisToUt = 1,
    Direct = 2,
}

/// ChaCha8 stream for one hop and element. Streams never collide for
/// element indices below 2⁵⁶.
pub fn stream_id(hop: Hop, element: usize) -> u64 {
    ((hop as u64) << 56) | (element as u64 & ((1 << 56) - 1))
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Deterministic propagation phase `e^{−j2πd/λ}`, evaluated from the
/// fractional number of wavelengths to keep precision at long range.
fn propagation_phase(distance_m: f64, geom: &LinkGeometry) -> C64 {
    let cycles = (distance_m / geom.wavelength_m()).rem_euclid(1.0);
    C64::from_polar(1.0, -TAU * cycles)
}

/// Geometry, fading and gains needed to draw channel realizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub geometry: LinkGeometry,
    pub fading: FadingSpec,
    pub gains: AntennaGains,
}

impl ChannelModel {
    /// Draws the realization for `elements` elements under `seed`.
    pub fn generate(&self, elements: usize, seed: u64) -> Result<ChannelSet, ChannelError> {
        if elements == 0 {
            return Err(ChannelError::NoElements);
        }
        self.fading.check()?;
        let geom = &self.geometry;
        let tx = db_to_amplitude(self.gains.tx_gain_dbi);
        let el = db_to_amplitude(self.gains.ris_element_gain_dbi);
        let rx = db_to_amplitude(self.gains.rx_gain_dbi);

        let hop_base = |d: f64, gain: f64| -> Result<C64, ChannelError> {
            Ok(propagation_phase(d, geom) * (fspl_amplitude(d, geom.carrier_hz)? * gain))
        };
        let h_base = hop_base(geom.d_leo_ris_m, tx * el)?;
        let g_base = hop_base(geom.d_ris_ut_m, el * rx)?;
        let d_base = hop_base(geom.d_direct_m, tx * rx)?;

        let draw = |hop: Hop, element: usize| {
            let mut rng = stream_rng(seed, stream_id(hop, element));
            self.fading.sample(&mut rng)
        };
        let h = CVector::from_fn(elements, |m, _| h_base * draw(Hop::LeoToRis, m));
        let g = CVector::from_fn(elements, |m, _| g_base * draw(Hop::RisToUt, m));
        let direct = d_base * draw(Hop::Direct, 0);
        Ok(ChannelSet::new(h, g, direct).expect("generated channels are finite and consistent"))
    }
}

/// Draws a realization with unit antenna gains.
pub fn generate_channels(
    geom: &LinkGeometry,
    fading: &FadingSpec,
    elements: usize,
    seed: u64,
) -> Result<ChannelSet, ChannelError> {
    ChannelModel {
        geometry: *geom,
        fading: *fading,
        gains: AntennaGains::default(),
    }
    .generate(elements, seed)
}

/// Unit-scale synthetic realization with i.i.d. `CN(0, 1)` entries for `h`,
/// `g` and `h_d`; handy for optimizer tests where physical path loss would
/// only shrink every number by ten orders of magnitude.
pub fn gaussian_channels(elements: usize, seed: u64) -> ChannelSet {
    let draw = |hop: Hop, element: usize| complex_gaussian(&mut stream_rng(seed, stream_id(hop, element)));
    let h = CVector::from_fn(elements, |m, _| draw(Hop::LeoToRis, m));
    let g = CVector::from_fn(elements, |m, _| draw(Hop::RisToUt, m));
    ChannelSet::new(h, g, draw(Hop::Direct, 0)).expect("gaussian draws are finite")
}
