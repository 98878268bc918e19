//! Retrieval by spreading activity from a clamped fragment, with the visiting
//! order taken from a proximity matrix.

use neuromem::analysis::random_memories;
use neuromem::generator::{decompose, retrieve_report, OrderSource};
use neuromem::hebbian::train;
use neuromem::ProximityMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> neuromem::Result<()> {
    let n = 16;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let memories = random_memories(&mut rng, n, 2);
    let t = train(&memories)?;

    let b = decompose(&t);
    assert_eq!(b.reconstruct(), t.rows());
    println!("B is strictly lower triangular and B + Bᵗ = T");

    // neurons on a ring, distance = steps around it
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = i.abs_diff(j);
                    d.min(n - d) as f64
                })
                .collect()
        })
        .collect();
    let p = ProximityMatrix::new(rows)?;

    let target = &memories[0];
    for clamp in [1, 3, 6] {
        let mut start: Vec<_> = Vec::new();
        while start.len() < clamp {
            let i = rng.random_range(0..n);
            if start.iter().all(|&(j, _)| j != i) {
                start.push((i, target.get(i)));
            }
        }
        let r = retrieve_report(&t, OrderSource::Proximity(&p), &start, &memories)?;
        println!(
            "{clamp} clamped: order {:?}\n  result {} matched {:?}, nearest {:?} at {:?}, fixed point {}, flags {:?}",
            r.trace.order.permutation(),
            r.trace.final_state,
            r.matched_memory,
            r.nearest_memory,
            r.hamming_to_nearest,
            r.fixed_point,
            r.trace.consistency_flags
        );
    }
    Ok(())
}
