//! Arithmetic in F_25 = F_5(w), w^2 = 2.

use paley_covers::field::FiniteField;

fn main() -> paley_covers::Result<()> {
    let f = FiniteField::new(5, 2, None)?;
    let g = f.multiplicative_generator();
    println!("modulus (low to high): {:?}", f.modulus());
    println!("generator g = {} of order {}", f.pretty(g), f.order(g));

    let w = f.element(&[0, 1])?;
    let x = f.element(&[1, 4])?;
    println!("w^2 = {}", f.pretty(f.mul(w, w)));
    println!("({})^-1 = {}", f.pretty(x), f.pretty(f.inv(x)?));
    println!("frobenius({}) = {}", f.pretty(x), f.pretty(f.frobenius(x, 1)));

    println!("squares by even powers of g:");
    for (j, s) in f.squares().into_iter().enumerate() {
        println!("  g^{:<2} = {:<5} trace {}", 2 * j, f.pretty(s), f.trace(s));
    }
    Ok(())
}
