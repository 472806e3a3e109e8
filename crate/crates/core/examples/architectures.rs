//! Build phase-shift matrices for each RIS architecture and check them.
//!
//! cargo run -p ris-ntn-sim --example architectures

use ris_ntn_sim::optimizer::unitary2;
use ris_ntn_sim::ris::{validate, Architecture, PhaseShiftMatrix};
use ris_ntn_sim::{CMatrix, CVector, C64};

fn main() {
    let m = 8;
    println!("{:<6} {:>7} {:>10} {:>10}", "arch", "groups", "group size", "non-zero");
    for arch in [
        Architecture::SingleConnected,
        Architecture::GroupConnected { group_count: 4 },
        Architecture::GroupConnected { group_count: 2 },
        Architecture::FullyConnected,
    ] {
        println!(
            "{:<6} {:>7} {:>10} {:>10}",
            arch.to_string(),
            arch.group_count(m),
            arch.group_size(m).unwrap(),
            arch.nonzero_elements(m).unwrap()
        );
    }

    let sc = PhaseShiftMatrix::from_phases(&[0.0, 0.5, 1.0, 1.5]).unwrap();
    println!("\nsingle-connected diagonal: {:.3}", sc.matrix().diagonal().transpose());

    let blocks = vec![unitary2(0.1, 0.2, 0.3, 0.4), unitary2(1.0, -0.5, 1.2, 2.0)];
    let gc = PhaseShiftMatrix::from_blocks(&blocks).unwrap();
    println!("group-connected {} residual {:.2e}", gc.architecture(), gc.residual().unwrap());

    // infeasible inputs are rejected with the failing location
    let bad = CMatrix::from_diagonal(&CVector::from_vec(vec![C64::new(2.0, 0.0), C64::new(1.0, 0.0)]));
    println!("\ndiag(2, 1) as sc: {}", validate(&bad, &Architecture::SingleConnected).unwrap_err());
    let mut leaky = CMatrix::identity(4, 4);
    leaky[(0, 3)] = C64::new(0.1, 0.0);
    println!(
        "identity + (1,4) entry as gc:2: {}",
        validate(&leaky, &Architecture::GroupConnected { group_count: 2 }).unwrap_err()
    );
    println!(
        "gc:3 with 8 elements: {}",
        Architecture::GroupConnected { group_count: 3 }.check_elements(8).unwrap_err()
    );
}
