//! Closed-form phase designs for SC, GC and FC surfaces, checked against
//! grid searches.
//!
//! cargo run -p ris-ntn-sim --example phase_design

use ris_ntn_sim::channel::gaussian_channels;
use ris_ntn_sim::optimizer::{brute_force_fc2, brute_force_sc, optimize_fc, optimize_gc, optimize_sc};
use ris_ntn_sim::ris::effective_channel;

fn main() {
    let ch = gaussian_channels(16, 3);
    println!("M = 16, |h_d| = {:.4}", ch.direct().norm());
    println!("{:<6} {:>10}", "arch", "|h_eff|");
    let sc = optimize_sc(&ch);
    println!("{:<6} {:>10.4}", sc.architecture.to_string(), sc.objective);
    for u in [8, 4, 2] {
        let gc = optimize_gc(&ch, u).unwrap();
        println!("{:<6} {:>10.4}", gc.architecture.to_string(), gc.objective);
    }
    let fc = optimize_fc(&ch);
    println!("{:<6} {:>10.4}", fc.architecture.to_string(), fc.objective);
    println!("fc recomputed: {:.4}", effective_channel(&fc.phi, &ch).unwrap().norm());

    let small = gaussian_channels(3, 11);
    let grid = brute_force_sc(&small, 128).unwrap();
    println!("\nM = 3 sc: closed form {:.6}, 128-step grid {:.6}", optimize_sc(&small).objective, grid.objective);

    let pair = gaussian_channels(2, 5);
    let grid = brute_force_fc2(&pair, 32).unwrap();
    println!("M = 2 fc: closed form {:.6}, U(2) grid {:.6}", optimize_fc(&pair).objective, grid.objective);
}
