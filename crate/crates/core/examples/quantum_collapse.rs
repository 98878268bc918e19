//! Reorganization counting and Born-rule sampling over network outputs.

use neuromem::quantum::{
    collapse_as_selection, collapse_sample, enumerate_reorganizations, histogram, reorg_count,
};
use neuromem::AmplitudeVector;

fn main() -> neuromem::Result<()> {
    for n in [1, 2, 10, 1000] {
        println!("{n} levels: {} reorganizations", reorg_count(n)?);
    }
    let table = enumerate_reorganizations(3)?;
    println!(
        "3 levels: {} raw cases pair up into {} distinct",
        table.raw_count, table.distinct_count
    );

    let amps = AmplitudeVector::normalized(vec![0.6, -0.8, 0.2])?;
    let draws = 100_000;
    let counts = histogram(&collapse_sample(&amps, 1, draws)?, amps.len());
    for (i, (c, p)) in counts.iter().zip(amps.probabilities()).enumerate() {
        println!(
            "outcome {i}: {:.4} observed, {p:.4} expected",
            *c as f64 / draws as f64
        );
    }
    let s = collapse_as_selection(&amps, 2)?;
    println!("{}", s.note);
    Ok(())
}
