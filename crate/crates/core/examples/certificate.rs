//! The shipped F_25 pair: cospectral, not isomorphic, and the polynomial
//! certificate behind it.

use paley_covers::cospectral::{block_decompose, build_matrix_m, derive_bijection, eigenvalue_bijection_check};
use paley_covers::example25;
use paley_covers::iso::graph_isomorphic;
use paley_covers::spectrum::{cospectral, full_spectrum};

fn main() -> paley_covers::Result<()> {
    let alpha = example25::alpha(3)?;
    let beta = example25::beta(3)?;
    let f = example25::polynomial();
    println!(
        "cospectral: {}",
        cospectral(&full_spectrum(&alpha), &full_spectrum(&beta))?
    );
    println!("graph isomorphism: {}", graph_isomorphic(&alpha, &beta)?.status.name());
    println!("f validates: {:?}", f.validate());
    println!(
        "f matches eigenvalues: {}",
        eigenvalue_bijection_check(&alpha, &beta, &f)?
    );

    let blocks = block_decompose(&build_matrix_m(&f, 3)?)?;
    for k in 1..=4 {
        let scaled: Vec<Vec<i64>> = blocks
            .scaled_integer_block(k)
            .expect("rational blocks")
            .into_iter()
            .map(|row| row.into_iter().map(|x| x / 5).collect())
            .collect();
        println!("5 M[{k}] = {scaled:?}");
    }

    if let Some(g) = derive_bijection(&alpha, &beta)? {
        let terms: Vec<String> = g
            .coeffs()
            .iter()
            .map(|(e, c)| format!("({})T^{e}", alpha.field().pretty(*c)))
            .collect();
        println!("derived polynomial: {}", terms.join(" + "));
    }

    let report = example25::verify(3)?;
    println!("all {} checks pass: {}", report.checks.len(), report.all_passed());
    Ok(())
}
