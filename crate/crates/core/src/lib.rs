//! Simulation and phase-shift optimization for a RIS-assisted
//! non-terrestrial downlink.
//!
//! A single-antenna LEO satellite serves a single-antenna ground terminal
//! (UT) over a direct link and over a reflecting surface (RIS) carried by a
//! high-altitude platform (HAPS). The surface is described by a K×K
//! phase-shift matrix whose structure depends on its circuit architecture:
//!
//! | architecture        | groups | non-zero entries | constraint                 |
//! |---------------------|--------|------------------|----------------------------|
//! | single-connected    | M      | M                | `|φ_m|² = 1`               |
//! | fully-connected     | 1      | M²               | `Φᴴ Φ = I_M`               |
//! | group-connected (U) | U      | U·(M/U)²         | `Φ_uᴴ Φ_u = I_{M/U}`, ∀u   |
//!
//! The crate is organised bottom-up:
//!
//! - [`ris`]: phase-shift matrix types, feasibility checks, the effective
//!   end-to-end channel `gᵀ Φ h + h_d` and unitary projection.
//! - [`channel`]: free-space link geometry and seeded Rician channel draws.
//! - [`optimizer`]: closed-form optimal designs per architecture plus
//!   brute-force oracles for small instances.
//! - [`metrics`]: SNR, Shannon rate and energy efficiency.
//! - [`experiment`]: `key = value` configuration, the Monte-Carlo sweep over
//!   element counts, and CSV emission.
//!
//! ```
//! use ris_ntn_sim::channel::gaussian_channels;
//! use ris_ntn_sim::optimizer::{optimize_fc, optimize_sc};
//!
//! let ch = gaussian_channels(16, 7);
//! let sc = optimize_sc(&ch);
//! let fc = optimize_fc(&ch);
//! assert!(fc.objective >= sc.objective - 1e-9);
//! ```

pub mod channel;
pub mod experiment;
pub mod metrics;
pub mod optimizer;
pub mod ris;

pub use nalgebra::Complex;

/// Double-precision complex scalar used throughout the crate.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
