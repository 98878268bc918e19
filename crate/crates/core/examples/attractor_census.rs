//! Count every fixed point of small random networks and sort them into
//! stored memories, complements and spurious states.

use neuromem::analysis::{
    classify, complement_asymmetry_probe, enumerate_fixed_points, random_memories,
};
use neuromem::hebbian::train;
use neuromem::BipolarVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> neuromem::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 14;
    for m in 1..=5 {
        let memories = random_memories(&mut rng, n, m);
        let t = train(&memories)?;
        let fps = enumerate_fixed_points(&t, 20)?;
        let c = classify(&fps, &memories)?;
        println!(
            "n={n} m={m}: {} fixed points, {} stored, {} complements, {} spurious",
            fps.len(),
            c.stored_count,
            c.complement_count,
            c.spurious_count
        );
    }

    // An even-width overlap leaves a zero field, and sgn(0) = +1 breaks the
    // x / -x symmetry.
    let memories = vec![
        BipolarVector::from_ints(&[1, 1, 1])?,
        BipolarVector::from_ints(&[1, -1, -1])?,
    ];
    let t = train(&memories)?;
    let probe = complement_asymmetry_probe(&t, &memories)?;
    for f in &probe.failures {
        println!(
            "memory {} is stored but its complement is not; zero field at {:?}",
            memories[f.memory], f.zero_field_components
        );
    }
    Ok(())
}
