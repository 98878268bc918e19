//! Asynchronous recall never raises the energy; synchronous recall can
//! oscillate.

use neuromem::analysis::random_memories;
use neuromem::hebbian::{energy, iterate_sync, recall_async, train, Schedule};
use neuromem::BipolarVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> neuromem::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 32;
    let memories = random_memories(&mut rng, n, 3);
    let t = train(&memories)?;
    let probe = random_memories(&mut rng, n, 1).pop().unwrap();

    for schedule in [Schedule::Cyclic, Schedule::RandomPermutation { seed: 7 }] {
        let r = recall_async(&t, &probe, schedule, 10 * n)?;
        let first = r.energy_trace[0];
        let last = *r.energy_trace.last().unwrap();
        println!(
            "{schedule:?}: energy {first} -> {last} in {} passes, converged {}",
            r.iterations, r.converged
        );
        let nearest = memories
            .iter()
            .map(|m| m.hamming(&r.state).unwrap())
            .min()
            .unwrap();
        println!("  Hamming distance to the nearest memory: {nearest}");
    }

    // Two mutually inhibiting neurons flip together forever when updated at once.
    let t = neuromem::InterconnectionMatrix::from_rows(vec![vec![0, -1], vec![-1, 0]])?;
    let x = BipolarVector::from_ints(&[1, 1])?;
    println!("energy of {x}: {}", energy(&t, &x)?);
    let sync = iterate_sync(&t, &x, 10)?;
    println!("synchronous from {x}: {:?}", sync.outcome);
    let r = recall_async(&t, &x, Schedule::Cyclic, 10)?;
    println!(
        "asynchronous from {x}: {} (trace {:?})",
        r.state, r.energy_trace
    );
    Ok(())
}
