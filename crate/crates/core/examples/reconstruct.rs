//! Recovering a voltage assignment from one slice of its spectrum.

use std::sync::Arc;

use paley_covers::cover::VoltageAssignment;
use paley_covers::field::FiniteField;
use paley_covers::spectrum::{full_spectrum, reconstruct_voltage};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> paley_covers::Result<()> {
    let field = Arc::new(FiniteField::new(5, 2, None)?);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..5 {
        let alpha = VoltageAssignment::random(field.clone(), 3, &mut rng)?;
        let back = reconstruct_voltage(&full_spectrum(&alpha), 1)?;
        println!(
            "{:?} -> {:?}  {}",
            alpha.pair_values(),
            back.pair_values(),
            if back == alpha { "ok" } else { "MISMATCH" }
        );
    }
    Ok(())
}
