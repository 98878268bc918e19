//! Train the four-neuron network on two memories, list its fixed points and
//! retrieve each memory from a fragment.

use neuromem::analysis::{classify, enumerate_fixed_points};
use neuromem::generator::{retrieve_report, OrderSource};
use neuromem::hebbian::train;
use neuromem::{Bipolar, BipolarVector};

fn main() -> neuromem::Result<()> {
    let memories = vec![
        BipolarVector::from_ints(&[1, 1, 1, 1])?,
        BipolarVector::from_ints(&[1, -1, 1, -1])?,
    ];
    let t = train(&memories)?;
    println!("weights:");
    for row in t.rows() {
        println!("  {row:?}");
    }

    let fps = enumerate_fixed_points(&t, 20)?;
    let census = classify(&fps, &memories)?;
    for (x, label) in fps.iter().zip(&census.labels) {
        println!("fixed point {x}: {label:?}");
    }

    for start in [
        vec![(0, Bipolar::Pos)],
        vec![(0, Bipolar::Pos), (1, Bipolar::Neg)],
        vec![(0, Bipolar::Neg)],
    ] {
        let r = retrieve_report(&t, OrderSource::ByIndex, &start, &memories)?;
        println!(
            "start {:?} -> {} (memory {:?}, complement of {:?})",
            start, r.trace.final_state, r.matched_memory, r.complement_of
        );
    }
    Ok(())
}
