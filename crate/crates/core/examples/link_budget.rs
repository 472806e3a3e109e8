//! Free-space link budget of the LEO → HAPS-RIS → ground geometry.
//!
//! cargo run -p ris-ntn-sim --example link_budget

use ris_ntn_sim::channel::{build_geometry, fspl_amplitude, fspl_db};
use ris_ntn_sim::metrics::{linear_to_db, snr_db, RfConfig};
use ris_ntn_sim::C64;

fn main() {
    let geom = build_geometry(600e3, 15e3, 18.7e9).unwrap();
    let rf = RfConfig::default();
    let f = geom.carrier_hz;

    println!("carrier {:.2} GHz, wavelength {:.2} mm", f / 1e9, geom.wavelength_m() * 1e3);
    for (name, d) in [
        ("LEO -> UT (direct)", geom.d_direct_m),
        ("LEO -> RIS", geom.d_leo_ris_m),
        ("RIS -> UT", geom.d_ris_ut_m),
    ] {
        println!("{name:<20} {:>8.1} km  {:>8.2} dB", d / 1e3, fspl_db(d, f).unwrap());
    }

    let direct = fspl_amplitude(geom.d_direct_m, f).unwrap();
    let per_element = fspl_amplitude(geom.d_leo_ris_m, f).unwrap() * fspl_amplitude(geom.d_ris_ut_m, f).unwrap();
    // amplitudes, so 20·log10
    let gap_db = 2.0 * linear_to_db(direct / per_element);
    println!(
        "\ncascaded loss per element {:.2} dB, {gap_db:.1} dB below the direct link",
        -2.0 * linear_to_db(per_element)
    );

    println!("\ntx power {} dBm = {} W", rf.tx_power_dbm, rf.tx_power_watts());
    println!("noise {} dBm/Hz over {} MHz = {:.2} dBm", rf.noise_psd_dbm_hz, rf.bandwidth_hz / 1e6, rf.noise_power_dbm());
    println!("direct-link SNR {:.2} dB", snr_db(C64::new(direct, 0.0), &rf));
}
