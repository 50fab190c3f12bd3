//! Graph isomorphism of covers through the rigid scan, checked by brute force.

use std::sync::Arc;

use paley_covers::cover::{build_cover, enumerate_voltages};
use paley_covers::field::FiniteField;
use paley_covers::iso::{graph_isomorphic, IsoStatus};
use paley_covers::refine::{brute_force_isomorphic, BruteForceOutcome, SearchLimits};

fn main() -> paley_covers::Result<()> {
    let field = Arc::new(FiniteField::new(13, 1, None)?);
    let all: Vec<_> = enumerate_voltages(field.clone(), 3, 1000)?.collect();
    let alpha = &all[0];
    println!("alpha = {:?}", alpha.pair_values());
    for beta in all.iter().take(6) {
        let verdict = graph_isomorphic(alpha, beta)?;
        let brute = brute_force_isomorphic(
            build_cover(alpha).graph(),
            build_cover(beta).graph(),
            SearchLimits::default(),
        )?;
        let witness = match verdict.status {
            IsoStatus::Isomorphic(w) => format!("t = {}, sigma = {}, n = {}", field.pretty(w.t), w.sigma, w.n),
            _ => String::new(),
        };
        let agrees = matches!(
            (verdict.status, &brute),
            (IsoStatus::Isomorphic(_), BruteForceOutcome::Isomorphic(_))
                | (IsoStatus::NotIsomorphic, BruteForceOutcome::NotIsomorphic)
        );
        println!(
            "  beta = {:?}: {:<14} {witness:<24} brute force agrees: {agrees}",
            beta.pair_values(),
            verdict.status.name()
        );
    }
    Ok(())
}
