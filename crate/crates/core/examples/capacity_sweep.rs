//! How many random memories a 100-neuron network holds.

use neuromem::analysis::{capacity_experiment, CapacityConfig};

fn main() -> neuromem::Result<()> {
    let report = capacity_experiment(&CapacityConfig {
        n: 100,
        m_values: (1..=8).map(|k| 5 * k).collect(),
        trials: 200,
        seed: 42,
        parallel: true,
    })?;
    println!("   m   m/n   per-bit instability   all memories exact");
    for r in &report.rows {
        println!(
            "{:4}  {:.2}   {:.5} ± {:.5}       {:.3}",
            r.m, r.load, r.per_bit_instability, r.per_bit_stderr, r.all_stable_fraction
        );
    }
    println!(
        "capacity at 99% per-bit stability: {:?}",
        report.threshold_capacity_ratio
    );
    println!(
        "capacity with every memory exact in 99% of trials: {:?}",
        report.exact_capacity_ratio
    );
    Ok(())
}
