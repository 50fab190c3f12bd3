//! Exact eigenvalues of a Z/7-cover of the Paley graph on F_13.

use std::sync::Arc;

use paley_covers::cover::{build_cover, VoltageAssignment};
use paley_covers::field::FiniteField;
use paley_covers::spectrum::{full_spectrum, numeric_spectrum, DEFAULT_DENSE_CAP};

fn main() -> paley_covers::Result<()> {
    let field = Arc::new(FiniteField::new(13, 1, None)?);
    let alpha = VoltageAssignment::from_pair_values(field.clone(), 7, &[1, 3, 0])?;
    let spec = full_spectrum(&alpha);
    println!("{} eigenvalues, {} distinct", spec.len(), spec.multiset().len());
    for (_, k, theta) in spec.labeled().filter(|&(a, _, _)| a.is_zero()) {
        println!("  theta(0, {k}) = {theta}  ~ {:.6}", theta.embed_complex().re);
    }
    let one = field.one();
    let slice: Vec<String> = (0..7)
        .map(|k| format!("{:.4}", spec.get(one, k).embed_complex().re))
        .collect();
    println!("  theta(1, k) ~ {}", slice.join(", "));
    println!("trace = {}, trace of square = {}", spec.trace(), spec.trace_of_square());

    let numeric = numeric_spectrum(&build_cover(&alpha), DEFAULT_DENSE_CAP)?;
    let err = spec
        .sorted_floats()
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("dense eigensolver agrees to {err:.1e}");
    Ok(())
}
