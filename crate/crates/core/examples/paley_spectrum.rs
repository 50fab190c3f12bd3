//! Paley graph spectra: the closed form against a dense eigensolver.

use std::sync::Arc;

use paley_covers::field::FiniteField;
use paley_covers::paley::{build_paley, paley_spectrum_closed_form};
use paley_covers::spectrum::{numeric_graph_spectrum, DEFAULT_DENSE_CAP};

fn main() -> paley_covers::Result<()> {
    for (p, r) in [(5, 1), (13, 1), (3, 2), (5, 2), (7, 2)] {
        let field = Arc::new(FiniteField::new(p, r, None)?);
        let closed = paley_spectrum_closed_form(&field)?;
        let mut expected: Vec<f64> = closed
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect();
        expected.sort_by(f64::total_cmp);
        let numeric = numeric_graph_spectrum(&build_paley(field.clone())?.graph(), DEFAULT_DENSE_CAP)?;
        let err = expected
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let listing: Vec<String> = closed
            .iter()
            .map(|e| format!("{} x{}", e.exact, e.multiplicity))
            .collect();
        println!(
            "q = {:>2}: {}  (max deviation {err:.1e})",
            field.q(),
            listing.join(", ")
        );
    }
    Ok(())
}
