//! Seeded Rician channel draws for the HAPS-RIS link.
//!
//! cargo run -p ris-ntn-sim --example channel_realizations

use ris_ntn_sim::channel::{build_geometry, fspl_amplitude, generate_channels, FadingSpec, PhaseMode};

fn main() {
    let geom = build_geometry(600e3, 15e3, 18.7e9).unwrap();
    let fading = FadingSpec::rician(10.0, PhaseMode::IidUniform);

    let small = generate_channels(&geom, &fading, 4, 42).unwrap();
    let large = generate_channels(&geom, &fading, 8, 42).unwrap();
    println!("h (M=4): {:.3e}", small.h().transpose());
    // element streams are independent, so a larger surface extends a smaller one
    println!("same first four elements at M=8: {}", large.h().rows(0, 4) == *small.h());
    println!("direct path h_d = {:.3e}", small.direct());

    let n = 20_000;
    let scale = fspl_amplitude(geom.d_leo_ris_m, geom.carrier_hz).unwrap();
    for k_db in [-10.0, 0.0, 10.0, 20.0] {
        let ch = generate_channels(&geom, &FadingSpec::rician(k_db, PhaseMode::CommonLos), n, 7).unwrap();
        let power = ch.h().iter().map(|z| (z / scale).norm_sqr()).sum::<f64>() / n as f64;
        println!("K = {k_db:>5} dB: mean normalized element power {power:.4}");
    }
}
