//! Pull a drifted fully-connected network back onto the unitary group.
//!
//! cargo run -p ris-ntn-sim --example unitary_projection

use ris_ntn_sim::channel::gaussian_channels;
use ris_ntn_sim::optimizer::optimize_fc;
use ris_ntn_sim::ris::{constraint_residual, project_to_unitary, validate, Architecture, PhaseShiftMatrix};
use ris_ntn_sim::{CMatrix, C64};

fn main() {
    let ch = gaussian_channels(6, 9);
    let design = optimize_fc(&ch);

    // component tolerance: scale every entry by a slightly wrong gain
    let drifted: CMatrix = design.phi.matrix().map(|z| z * C64::new(1.01, 0.002));
    let arch = Architecture::FullyConnected;
    println!("drifted residual {:.3e}", constraint_residual(&drifted, &arch).unwrap());
    println!("validate: {}", validate(&drifted, &arch).unwrap_err());

    let repaired = project_to_unitary(&drifted).unwrap();
    println!("repaired residual {:.3e}", constraint_residual(&repaired, &arch).unwrap());
    let phi = PhaseShiftMatrix::new(repaired, arch).unwrap();
    let h_eff = ris_ntn_sim::ris::effective_channel(&phi, &ch).unwrap().norm();
    println!("|h_eff| designed {:.6}, after repair {:.6}", design.objective, h_eff);

    let singular = CMatrix::from_element(3, 3, C64::new(1.0, 0.0));
    println!("rank-one input: {}", project_to_unitary(&singular).unwrap_err());
}
