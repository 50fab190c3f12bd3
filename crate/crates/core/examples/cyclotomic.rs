//! Exact sums of roots of unity in Q(zeta_5, zeta_3).

use paley_covers::cyclotomic::CycSum;

fn main() {
    let (p, ell) = (5, 3);
    let z5 = CycSum::monomial(p, ell, 1, 0);
    let z3 = CycSum::monomial(p, ell, 0, 1);
    // the Gauss sum over the squares mod 5
    let gauss = &CycSum::monomial(p, ell, 1, 0) + &CycSum::monomial(p, ell, 4, 0);
    println!("z5 + z5^4 = {gauss} ~ {:.6}", gauss.embed_complex().re);
    println!("(z5 + z5^4)^2 + (z5 + z5^4) = {}", &(&gauss * &gauss) + &gauss);
    let mixed = &z5 * &z3;
    println!("z5 * z3 = {mixed}, |.| = {:.6}", mixed.embed_complex().norm());
    let one = CycSum::one(p, ell);
    let total = (0..ell).fold(CycSum::zero(p, ell), |acc, v| &acc + &CycSum::monomial(p, ell, 0, v));
    println!("1 + z3 + z3^2 = {total}");
    println!(
        "z5 * conj(z5) == 1: {}",
        &z5 * &z5.conjugate(paley_covers::cyclotomic::Conjugation::Both) == one
    );
}
