//! Hunting for cospectral, non-isomorphic covers over F_25 and F_13.

use std::sync::Arc;

use paley_covers::field::FiniteField;
use paley_covers::search::{pair_census, search_counterexamples, SearchBudget, SearchMode};

fn main() -> paley_covers::Result<()> {
    let f25 = Arc::new(FiniteField::new(5, 2, None)?);
    let report = search_counterexamples(f25.clone(), 3, SearchMode::TauGuided, SearchBudget::default())?;
    println!(
        "q = 25, tau-guided: {} involutions, {} pairs, {} counterexample orbit(s)",
        report.taus,
        report.pairs.len(),
        report.counterexamples().count()
    );
    for pair in report.counterexamples() {
        println!("  alpha {:?}", pair.alpha.pair_values());
        println!("  beta  {:?}", pair.beta.pair_values());
        println!(
            "  certificate holds: {}",
            pair.certificate.as_ref().is_some_and(|c| c.checks.holds())
        );
    }

    let census = pair_census(Arc::new(FiniteField::new(13, 1, None)?), 3, 1000)?;
    println!(
        "q = 13: {} pairs, {} cospectral, {} of those isomorphic, {} counterexamples",
        census.pairs,
        census.cospectral,
        census.cospectral_isomorphic,
        census.counterexamples.len()
    );
    Ok(())
}
