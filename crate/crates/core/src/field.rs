//! Finite fields `F_q = F_p[T]/(m(T))` of small order.
//!
//! Elements are stored as their index `c0 + c1 p + ... + c_{r-1} p^{r-1}` in
//! the coefficient basis `1, w, ..., w^{r-1}` where `w` is the class of `T`.
//! The index order is the canonical enumeration order used everywhere else in
//! the crate. Multiplication goes through exp/log tables built from a fixed
//! multiplicative generator, addition works digit by digit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// Field orders that ship with a built-in defining polynomial (besides prime fields).
pub const BUILTIN_ORDERS: [u32; 7] = [9, 25, 49, 81, 121, 125, 169];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of a [`FiniteField`], identified by its canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn from_index(index: usize) -> Self {
        FieldElement(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(u64),
}

/// JSON fragment describing a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub r: u32,
    pub modulus: Vec<u32>,
}

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .field("generator", &self.key(self.generator))
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

/// The defining polynomial used when none is given, low-to-high coefficients.
///
/// Prime fields use `T`. For the orders in [`BUILTIN_ORDERS`] the table takes
/// `T^r - d` for the smallest `d` making it irreducible, falling back to the
/// first irreducible monic polynomial in enumeration order. `F_25` is pinned
/// to `T^2 - 2`.
pub fn builtin_modulus(p: u32, r: u32) -> Option<Vec<u32>> {
    if r == 1 {
        return Some(vec![0, 1]);
    }
    if (p, r) == (5, 2) {
        return Some(vec![3, 0, 1]);
    }
    let q = (p as u64).checked_pow(r)?;
    if !BUILTIN_ORDERS.contains(&(q as u32)) {
        return None;
    }
    for d in 1..p {
        let mut m = vec![0; r as usize + 1];
        m[0] = p - d;
        m[r as usize] = 1;
        if is_irreducible(&m, p) {
            return Some(m);
        }
    }
    // every monic polynomial of degree r, lower coefficients in index order
    let count = (p as u64).pow(r);
    (0..count).find_map(|idx| {
        let mut m = digits(idx as u32, p, r);
        m.push(1);
        is_irreducible(&m, p).then_some(m)
    })
}

fn digits(mut idx: u32, p: u32, r: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(r as usize);
    for _ in 0..r {
        out.push(idx % p);
        idx /= p;
    }
    out
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `a` modulo `b` over `F_p`; `b` must have a nonzero leading coefficient.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let p64 = p as u64;
    let lead_inv = inv_mod(b[db], p) as u64;
    let mut a: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    if a.len() <= db {
        return a.into_iter().map(|c| c as u32).collect();
    }
    for top in (db..a.len()).rev() {
        let c = a[top] * lead_inv % p64;
        if c == 0 {
            continue;
        }
        for (i, &bi) in b.iter().enumerate() {
            let idx = top - db + i;
            a[idx] = (a[idx] + (p64 - c) * bi as u64) % p64;
        }
    }
    a.truncate(db.max(1));
    if db == 0 {
        a[0] = 0;
    }
    a.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree at most `deg/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut divisor = digits(idx as u32, p, d as u32);
            divisor.push(1);
            let rem = poly_rem(m, &divisor, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// Builds `F_{p^r}`, validating the modulus. Without a modulus the built-in
    /// table is used.
    pub fn new(p: u32, r: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if r == 0 {
            return Err(Error::BadModulus("extension degree must be positive".into()));
        }
        let q = (p as u64)
            .checked_pow(r)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge((p as u64).saturating_pow(r)))?;
        let builtin = builtin_modulus(p, r);
        let modulus = match modulus {
            Some(m) => m,
            None => builtin.clone().ok_or(Error::NoBuiltinModulus { p, r })?,
        };
        let using_builtin = builtin.as_ref() == Some(&modulus);
        if modulus.len() != r as usize + 1 {
            return Err(Error::BadModulus(format!(
                "expected {} coefficients, got {}",
                r + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus("coefficient out of range".into()));
        }
        if modulus[r as usize] != 1 {
            return Err(Error::BadModulus("modulus is not monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(modulus));
        }

        let q = q as u32;
        let mut field = FiniteField {
            p,
            r,
            q,
            modulus,
            generator: FieldElement::ONE,
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
        };
        let pinned = (using_builtin && (p, r) == (5, 2)).then(|| field.index_of(&[3, 1]));
        let generator = match pinned {
            Some(g) => g,
            None => field.search_generator(),
        };
        field.build_tables(generator);
        if pinned.is_some() {
            debug_assert_eq!(field.order(generator), (q - 1) as u64);
        }
        Ok(field)
    }

    fn index_of(&self, coeffs: &[u32]) -> FieldElement {
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        FieldElement(idx)
    }

    fn poly_mulmod(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let r = self.r as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
            }
        }
        for top in (r..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (k, &mk) in self.modulus[..r].iter().enumerate() {
                let idx = top - r + k;
                prod[idx] = (prod[idx] + (p - c) * mk as u64) % p;
            }
        }
        prod.truncate(r);
        prod.into_iter().map(|c| c as u32).collect()
    }

    fn poly_pow(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut result = vec![0u32; self.r as usize];
        result[0] = 1;
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.poly_mulmod(&result, &base);
            }
            base = self.poly_mulmod(&base, &base);
            e >>= 1;
        }
        result
    }

    fn search_generator(&self) -> FieldElement {
        let n = (self.q - 1) as u64;
        let factors = prime_factors(n);
        let one = {
            let mut v = vec![0u32; self.r as usize];
            v[0] = 1;
            v
        };
        (1..self.q)
            .find(|&idx| {
                let c = digits(idx, self.p, self.r);
                factors.iter().all(|&f| self.poly_pow(&c, n / f) != one)
            })
            .map(FieldElement)
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&mut self, generator: FieldElement) {
        let q = self.q as usize;
        let g = digits(generator.0, self.p, self.r);
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![u32::MAX; q];
        let mut cur = digits(1, self.p, self.r);
        for i in 0..q - 1 {
            let idx = self.index_of(&cur).0;
            exp.push(idx);
            log[idx as usize] = i as u32;
            cur = self.poly_mulmod(&cur, &g);
        }
        self.generator = generator;
        self.exp = exp;
        self.log = log;
        let trace = (0..self.q)
            .map(|x| {
                let x = FieldElement(x);
                let t = (0..self.r).fold(FieldElement::ZERO, |acc, i| {
                    self.add(acc, self.frobenius(x, i as usize))
                });
                debug_assert!(t.0 < self.p, "trace must land in the prime field");
                t.0
            })
            .collect();
        self.trace = trace;
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            r: self.r,
            modulus: self.modulus.clone(),
        }
    }

    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Self> {
        FiniteField::new(desc.p, desc.r, Some(desc.modulus.clone()))
    }

    pub fn multiplicative_generator(&self) -> FieldElement {
        self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    /// Element from coordinates `c0, ..., c_{r-1}`; missing trailing coordinates are zero.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.r as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!(
                "coordinates {coeffs:?} do not describe an element"
            )));
        }
        Ok(self.index_of(coeffs))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        digits(x.0, self.p, self.r)
    }

    /// Canonical encoding `"c0,c1,...,c_{r-1}"`.
    pub fn key(&self, x: FieldElement) -> String {
        self.coeffs(x)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_key(&self, key: &str) -> Result<FieldElement> {
        let coeffs = key
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("element key {key:?}: {e}")))?;
        if coeffs.len() != self.r as usize {
            return Err(Error::Parse(format!(
                "element key {key:?} needs {} coordinates",
                self.r
            )));
        }
        self.element(&coeffs)
    }

    /// Polynomial notation in the generator `w` of the extension, e.g. `4w+1`.
    pub fn pretty(&self, x: FieldElement) -> String {
        let coeffs = self.coeffs(x);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}w"),
                _ => format!("{coef}w^{i}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.r {
            out += (x % self.p + y % self.p) % self.p * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut x = a.0;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.r {
            out += (self.p - x % self.p) % self.p * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.q as u64 - 1;
        let e = (self.log[a.index()] as u64 + self.log[b.index()] as u64) % n;
        FieldElement(self.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(FieldElement(self.exp[((n - self.log[a.index()]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.q as u64 - 1;
        let l = self.log[a.index()] as u64 * (e % n) % n;
        FieldElement(self.exp[l as usize])
    }

    /// `g^e` for the fixed generator `g`.
    pub fn exp(&self, e: u64) -> FieldElement {
        FieldElement(self.exp[(e % (self.q as u64 - 1)) as usize])
    }

    /// Discrete logarithm to the base of the fixed generator.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.index()])
    }

    /// Dispatches a field operation; unary operations ignore `b`.
    pub fn arith(&self, a: FieldElement, b: FieldElement, op: FieldOp) -> Result<FieldElement> {
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Sub => Ok(self.sub(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Div => self.div(a, b),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
            FieldOp::Pow(e) => Ok(self.pow(a, e)),
        }
    }

    /// Absolute trace to the prime field, as a residue in `[0, p)`.
    pub fn trace(&self, x: FieldElement) -> u32 {
        self.trace[x.index()]
    }

    /// `x^{p^i}`.
    pub fn frobenius(&self, x: FieldElement, i: usize) -> FieldElement {
        self.pow(x, (self.p as u64).pow(i as u32 % self.r))
    }

    /// Euler's criterion: `x^{(q-1)/2} = 1`.
    pub fn is_square(&self, x: FieldElement) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.pow(x, (self.q as u64 - 1) / 2) == FieldElement::ONE)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: FieldElement) -> u64 {
        let n = self.q as u64 - 1;
        let mut order = n;
        for f in prime_factors(n) {
            while order.is_multiple_of(f) && self.pow(x, order / f) == FieldElement::ONE {
                order /= f;
            }
        }
        order
    }

    /// Nonzero squares ordered by even powers of the generator: `g^0, g^2, ...`.
    pub fn squares(&self) -> Vec<FieldElement> {
        (0..(self.q as usize - 1) / 2)
            .map(|j| FieldElement(self.exp[2 * j]))
            .collect()
    }

    /// Position `j` of a square `s = g^{2j}` in [`Self::squares`].
    pub fn square_index(&self, s: FieldElement) -> Option<usize> {
        let l = self.log(s)?;
        (l % 2 == 0).then_some(l as usize / 2)
    }

    pub fn ensure_one_mod_four(&self) -> Result<()> {
        if self.q % 4 == 1 {
            Ok(())
        } else {
            Err(Error::NotOneModFour(self.q))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f25() -> FiniteField {
        FiniteField::new(5, 2, None).unwrap()
    }

    fn w(f: &FiniteField, c1: u32, c0: u32) -> FieldElement {
        f.element(&[c0, c1]).unwrap()
    }

    #[test]
    fn builtin_moduli() {
        assert_eq!(f25().modulus(), &[3, 0, 1]);
        let f5 = FiniteField::new(5, 1, None).unwrap();
        assert_eq!(f5.modulus(), &[0, 1]);
        assert_eq!(f5.q(), 5);
        for q in BUILTIN_ORDERS {
            let (p, r) = match q {
                9 => (3, 2),
                25 => (5, 2),
                49 => (7, 2),
                81 => (3, 4),
                121 => (11, 2),
                125 => (5, 3),
                169 => (13, 2),
                _ => unreachable!(),
            };
            let f = FiniteField::new(p, r, None).unwrap();
            assert_eq!(f.q(), q);
        }
        assert!(matches!(
            FiniteField::new(7, 3, None),
            Err(Error::NoBuiltinModulus { p: 7, r: 3 })
        ));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(FiniteField::new(6, 1, None), Err(Error::NotPrime(6))));
        // T^2 + 1 = (T + 2)(T + 3) over F_5
        assert!(matches!(
            FiniteField::new(5, 2, Some(vec![1, 0, 1])),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            FiniteField::new(5, 2, Some(vec![3, 0, 2])),
            Err(Error::BadModulus(_))
        ));
        assert!(matches!(FiniteField::new(2, 21, None), Err(Error::FieldTooLarge(_))));
    }

    #[test]
    fn reducibility_oracle() {
        // brute-force root search for T^2 + 1 over F_5
        let roots: Vec<u32> = (0..5).filter(|t| (t * t + 1) % 5 == 0).collect();
        assert_eq!(roots, vec![2, 3]);
    }

    #[test]
    fn arithmetic_examples() {
        let f = f25();
        let w1 = w(&f, 1, 1);
        assert_eq!(f.mul(w1, w1), w(&f, 2, 3));
        assert_eq!(f.pow(w(&f, 1, 0), 5), w(&f, 4, 0));
        let f13 = FiniteField::new(13, 1, None).unwrap();
        assert_eq!(f13.inv(f13.from_int(2)).unwrap(), f13.from_int(7));
        assert!(matches!(f13.inv(FieldElement::ZERO), Err(Error::DivisionByZero)));
        assert!(matches!(
            f13.arith(FieldElement::ONE, FieldElement::ZERO, FieldOp::Div),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn trace_examples() {
        let f = f25();
        assert_eq!(f.trace(w(&f, 1, 0)), 0);
        assert_eq!(f.trace(FieldElement::ONE), 2);
        let f13 = FiniteField::new(13, 1, None).unwrap();
        for a in f13.elements() {
            assert_eq!(f13.trace(a), a.index() as u32);
        }
    }

    #[test]
    fn squares_and_frobenius() {
        let f = f25();
        assert!(f.is_square(w(&f, 1, 1)).unwrap());
        assert!(f.is_square(f.from_int(2)).unwrap());
        assert!(matches!(f.is_square(FieldElement::ZERO), Err(Error::ZeroInput)));
        let f13 = FiniteField::new(13, 1, None).unwrap();
        let squares: Vec<u32> = (1..13u32).map(|x| x * x % 13).collect();
        assert_eq!(f13.is_square(f13.from_int(2)).unwrap(), squares.contains(&2));
        assert!(!f13.is_square(f13.from_int(2)).unwrap());

        assert_eq!(f.frobenius(w(&f, 1, 0), 1), w(&f, 4, 0));
        assert_eq!(f.frobenius(w(&f, 1, 1), 1), w(&f, 4, 1));
        for x in f.elements() {
            assert_eq!(f.frobenius(x, 0), x);
        }
    }

    #[test]
    fn shipped_modulus_table() {
        let doc: serde_json::Value = serde_json::from_str(include_str!("../data/builtin_moduli.json")).unwrap();
        let rows = doc["moduli"].as_array().unwrap();
        assert_eq!(rows.len(), BUILTIN_ORDERS.len());
        for row in rows {
            let p = row["p"].as_u64().unwrap() as u32;
            let r = row["r"].as_u64().unwrap() as u32;
            let m: Vec<u32> = serde_json::from_value(row["modulus"].clone()).unwrap();
            assert!(BUILTIN_ORDERS.contains(&p.pow(r)));
            assert_eq!(builtin_modulus(p, r), Some(m.clone()));
            assert!(is_irreducible(&m, p));
        }
    }

    #[test]
    fn generators() {
        assert_eq!(f25().multiplicative_generator(), w(&f25(), 1, 3));
        // brute-force order computation
        let brute_first_generator = |p: u64| {
            (1..p)
                .find(|&g| {
                    let mut x = g;
                    let mut ord = 1;
                    while x != 1 {
                        x = x * g % p;
                        ord += 1;
                    }
                    ord == p - 1
                })
                .unwrap()
        };
        for p in [5u32, 13] {
            let f = FiniteField::new(p, 1, None).unwrap();
            assert_eq!(
                f.multiplicative_generator().index() as u64,
                brute_first_generator(p as u64)
            );
        }
        assert_eq!(
            FiniteField::new(5, 1, None).unwrap().multiplicative_generator().index(),
            2
        );
        assert_eq!(
            FiniteField::new(13, 1, None)
                .unwrap()
                .multiplicative_generator()
                .index(),
            2
        );
    }

    #[test]
    fn field_invariants_by_enumeration() {
        for (p, r) in [(5, 1), (13, 1), (3, 2), (5, 2), (7, 2), (3, 4), (13, 2)] {
            let f = FiniteField::new(p, r, None).unwrap();
            let g = f.multiplicative_generator();
            assert_eq!(f.order(g), f.q() as u64 - 1);
            let mut trace_counts = vec![0u32; p as usize];
            for x in f.elements() {
                trace_counts[f.trace(x) as usize] += 1;
                for y in [g, f.from_int(2), f.exp(3)] {
                    assert_eq!(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % p);
                }
                let mut y = x;
                for _ in 0..r {
                    y = f.frobenius(y, 1);
                }
                assert_eq!(y, x);
                if !x.is_zero() {
                    assert_ne!(f.is_square(x).unwrap(), f.is_square(f.mul(g, x)).unwrap());
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElement::ONE);
                }
            }
            assert!(trace_counts.iter().all(|&c| c == f.q() / p));
            if f.q() % 4 == 1 {
                assert!(f.is_square(f.neg(FieldElement::ONE)).unwrap());
            }
        }
    }

    #[test]
    fn keys_roundtrip() {
        let f = f25();
        let x = w(&f, 4, 1);
        assert_eq!(f.key(x), "1,4");
        assert_eq!(f.parse_key("1,4").unwrap(), x);
        assert_eq!(f.pretty(x), "4w+1");
        assert!(f.parse_key("1").is_err());
        assert!(f.parse_key("5,0").is_err());
    }

    #[test]
    fn squares_ordered_by_even_powers() {
        let f = f25();
        let sq = f.squares();
        assert_eq!(sq.len(), 12);
        assert_eq!(sq[0], FieldElement::ONE);
        assert_eq!(sq[1], w(&f, 1, 1));
        assert_eq!(sq[2], w(&f, 2, 3));
        assert_eq!(sq[3], f.from_int(2));
        for (j, &s) in sq.iter().enumerate() {
            assert_eq!(f.square_index(s), Some(j));
        }
    }
}
