//! Energy efficiency against RIS size for several architectures, printed as a
//! table and optionally written as CSV.
//!
//! cargo run -p ris-ntn-sim --release --example ee_sweep [-- out.csv]

use ris_ntn_sim::experiment::{emit_csv, parse_config, run_sweep, TrialTag};

fn main() {
    let cfg = parse_config(
        "trials = 200\n\
         seed = 1\n\
         elements_sweep = 8, 16, 32, 64\n\
         architectures = sc, gc:4, fc\n",
    )
    .unwrap();
    let records = run_sweep(&cfg).unwrap();

    println!("{:<6} {:>4} {:>22} {:>14}", "arch", "M", "mean EE (bit/J)", "stderr");
    let mean_rows = records.iter().filter(|r| r.trial == TrialTag::Mean);
    for mean in mean_rows {
        let se = records
            .iter()
            .find(|r| r.trial == TrialTag::StdErr && r.arch == mean.arch && r.elements == mean.elements)
            .unwrap();
        println!(
            "{:<6} {:>4} {:>22.6} {:>14.3e}",
            mean.arch.to_string(),
            mean.elements,
            mean.ee_bits_per_joule,
            se.ee_bits_per_joule
        );
    }

    if let Some(path) = std::env::args().nth(1) {
        emit_csv(&records, &cfg, path.as_ref()).unwrap();
        println!("wrote {path}");
    }
}
