//! Exact arithmetic in `Z[ζ_p, ζ_ℓ]` for distinct primes `p`, `ℓ`, with an
//! optional positive integer denominator.
//!
//! Elements are stored in the integral basis `ζ_p^u ζ_ℓ^v`, `0 <= u <= p-2`,
//! `0 <= v <= ℓ-2`. Reduction to that basis uses `ζ_p^{p-1} = -(1 + ... + ζ_p^{p-2})`
//! and the analogous relation for `ζ_ℓ`, so every element has exactly one
//! representation and equality is structural.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Number, Value};

use crate::error::{Error, Result};

/// Raw term counts: `counts[u][v]` is the number of terms `ζ_p^u ζ_ℓ^v` in a sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentCounts {
    p: u32,
    ell: u32,
    counts: Vec<i64>,
}

impl ExponentCounts {
    pub fn new(p: u32, ell: u32) -> Self {
        ExponentCounts {
            p,
            ell,
            counts: vec![0; (p * ell) as usize],
        }
    }

    /// Adds `n` terms `ζ_p^u ζ_ℓ^v`; exponents are reduced mod `p` and `ℓ`.
    pub fn add(&mut self, u: u32, v: u32, n: i64) {
        let idx = (u % self.p) * self.ell + v % self.ell;
        self.counts[idx as usize] += n;
    }

    pub fn get(&self, u: u32, v: u32) -> i64 {
        self.counts[(u * self.ell + v) as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conjugation {
    /// `ζ_p -> ζ_p^{-1}`
    P,
    /// `ζ_ℓ -> ζ_ℓ^{-1}`
    Ell,
    /// complex conjugation
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
}

/// An element of `Z[ζ_p, ζ_ℓ]`, divided by `denom`, in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycSum {
    p: u32,
    ell: u32,
    denom: BigInt,
    /// row-major `(p-1) x (ℓ-1)`
    coeffs: Vec<BigInt>,
}

impl PartialOrd for CycSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycSum {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.ell)
            .cmp(&(other.p, other.ell))
            .then_with(|| self.denom.cmp(&other.denom))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

fn check_primes(p: u32, ell: u32) {
    assert!(
        p >= 2 && ell >= 2 && p != ell,
        "need distinct primes, got p = {p}, ell = {ell}"
    );
}

impl CycSum {
    pub fn zero(p: u32, ell: u32) -> Self {
        check_primes(p, ell);
        CycSum {
            p,
            ell,
            denom: BigInt::one(),
            coeffs: vec![BigInt::zero(); ((p - 1) * (ell - 1)) as usize],
        }
    }

    pub fn from_int(p: u32, ell: u32, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(p, ell);
        out.coeffs[0] = c.into();
        out
    }

    pub fn one(p: u32, ell: u32) -> Self {
        Self::from_int(p, ell, 1)
    }

    /// `ζ_p^u ζ_ℓ^v`.
    pub fn monomial(p: u32, ell: u32, u: u32, v: u32) -> Self {
        let mut counts = ExponentCounts::new(p, ell);
        counts.add(u, v, 1);
        Self::from_exponent_counts(&counts)
    }

    pub fn from_exponent_counts(counts: &ExponentCounts) -> Self {
        let (p, ell) = (counts.p, counts.ell);
        check_primes(p, ell);
        let (pu, lu) = (p as usize, ell as usize);
        let mut raw: Vec<i128> = counts.counts.iter().map(|&c| c as i128).collect();
        for v in 0..lu {
            let t = raw[(pu - 1) * lu + v];
            for u in 0..pu - 1 {
                raw[u * lu + v] -= t;
            }
        }
        let mut coeffs = Vec::with_capacity((pu - 1) * (lu - 1));
        for u in 0..pu - 1 {
            let t = raw[u * lu + lu - 1];
            for v in 0..lu - 1 {
                coeffs.push(BigInt::from(raw[u * lu + v] - t));
            }
        }
        CycSum {
            p,
            ell,
            denom: BigInt::one(),
            coeffs,
        }
    }

    /// Reduces a raw `p x ℓ` coefficient array to the canonical basis.
    fn from_raw(p: u32, ell: u32, mut raw: Vec<BigInt>, denom: BigInt) -> Self {
        let (pu, lu) = (p as usize, ell as usize);
        for v in 0..lu {
            let t = std::mem::take(&mut raw[(pu - 1) * lu + v]);
            if t.is_zero() {
                continue;
            }
            for u in 0..pu - 1 {
                raw[u * lu + v] -= &t;
            }
        }
        let mut coeffs = Vec::with_capacity((pu - 1) * (lu - 1));
        for u in 0..pu - 1 {
            let t = std::mem::take(&mut raw[u * lu + lu - 1]);
            for v in 0..lu - 1 {
                let c = std::mem::take(&mut raw[u * lu + v]);
                coeffs.push(if t.is_zero() { c } else { c - &t });
            }
        }
        let mut out = CycSum { p, ell, denom, coeffs };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.denom.is_negative() {
            self.denom = -&self.denom;
            for c in &mut self.coeffs {
                *c = -&*c;
            }
        }
        if self.coeffs.iter().all(Zero::is_zero) {
            self.denom = BigInt::one();
            return;
        }
        if self.denom.is_one() {
            return;
        }
        let g = self.coeffs.iter().fold(self.denom.clone(), |acc, c| acc.gcd(c));
        if !g.is_one() {
            self.denom /= &g;
            for c in &mut self.coeffs {
                *c /= &g;
            }
        }
    }

    /// Applies `ζ_p^u ζ_ℓ^v -> ζ_p^{a u + du} ζ_ℓ^{k v + dv}` to every basis term.
    fn remap(&self, a: u32, du: u32, k: u32, dv: u32) -> Self {
        let (p, ell) = (self.p, self.ell);
        let lu = ell as usize;
        let mut raw = vec![BigInt::zero(); (p * ell) as usize];
        for u in 0..p - 1 {
            for v in 0..ell - 1 {
                let c = &self.coeffs[(u * (ell - 1) + v) as usize];
                if c.is_zero() {
                    continue;
                }
                let nu = ((a as u64 * u as u64 + du as u64) % p as u64) as usize;
                let nv = ((k as u64 * v as u64 + dv as u64) % ell as u64) as usize;
                raw[nu * lu + nv] += c;
            }
        }
        Self::from_raw(p, ell, raw, self.denom.clone())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// Coefficient of the basis element `ζ_p^u ζ_ℓ^v` (numerator).
    pub fn coeff(&self, u: u32, v: u32) -> &BigInt {
        &self.coeffs[(u * (self.ell - 1) + v) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.denom.is_one() && self.coeffs[1..].iter().all(Zero::is_zero)).then(|| self.coeffs[0].clone())
    }

    /// True when no power of `ζ_ℓ` occurs, i.e. the element lies in `Q(ζ_p)`.
    pub fn is_ell_free(&self) -> bool {
        let lw = (self.ell - 1) as usize;
        self.coeffs.iter().enumerate().all(|(i, c)| i % lw == 0 || c.is_zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if (self.p, self.ell) != (other.p, other.ell) {
            return Err(Error::ParameterMismatch(format!(
                "cyclotomic parameters (p, ell) = ({}, {}) vs ({}, {})",
                self.p, self.ell, other.p, other.ell
            )));
        }
        Ok(())
    }

    pub fn arith(&self, other: &Self, op: CycOp) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(match op {
            CycOp::Add => self.add_unchecked(other, false),
            CycOp::Sub => self.add_unchecked(other, true),
            CycOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Self, subtract: bool) -> Self {
        let mut out = if self.denom == other.denom {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| if subtract { a - b } else { a + b })
                .collect();
            CycSum {
                p: self.p,
                ell: self.ell,
                denom: self.denom.clone(),
                coeffs,
            }
        } else {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| {
                    let (x, y) = (a * &other.denom, b * &self.denom);
                    if subtract {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect();
            CycSum {
                p: self.p,
                ell: self.ell,
                denom: &self.denom * &other.denom,
                coeffs,
            }
        };
        out.normalize();
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let (p, ell) = (self.p as usize, self.ell as usize);
        let lw = ell - 1;
        let mut raw = vec![BigInt::zero(); p * ell];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (u1, v1) = (i / lw, i % lw);
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (u2, v2) = (j / lw, j % lw);
                raw[((u1 + u2) % p) * ell + (v1 + v2) % ell] += a * b;
            }
        }
        Self::from_raw(self.p, self.ell, raw, &self.denom * &other.denom)
    }

    /// `Σ xs[i] * ys[i]`, reduced once at the end.
    pub fn dot<'a>(p: u32, ell: u32, terms: impl IntoIterator<Item = (&'a CycSum, &'a CycSum)>) -> Self {
        let (pu, lu) = (p as usize, ell as usize);
        let lw = lu - 1;
        let mut raw = vec![BigInt::zero(); pu * lu];
        let mut denom: Option<BigInt> = None;
        let mut rest = Self::zero(p, ell);
        for (x, y) in terms {
            debug_assert!(x.p == p && y.p == p && x.ell == ell && y.ell == ell);
            let d = &x.denom * &y.denom;
            if denom.get_or_insert_with(|| d.clone()) != &d {
                rest = &rest + &(x * y);
                continue;
            }
            for (i, a) in x.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (u1, v1) = (i / lw, i % lw);
                for (j, b) in y.coeffs.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    let (u2, v2) = (j / lw, j % lw);
                    raw[((u1 + u2) % pu) * lu + (v1 + v2) % lu] += a * b;
                }
            }
        }
        let main = Self::from_raw(p, ell, raw, denom.unwrap_or_else(BigInt::one));
        &main + &rest
    }

    /// Multiplies by the integer `c`.
    pub fn scale(&self, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut out = CycSum {
            p: self.p,
            ell: self.ell,
            denom: self.denom.clone(),
            coeffs: self.coeffs.iter().map(|x| x * &c).collect(),
        };
        out.normalize();
        out
    }

    /// Divides by the nonzero integer `d`.
    pub fn div_int(&self, d: impl Into<BigInt>) -> Self {
        let d = d.into();
        assert!(!d.is_zero(), "division of a cyclotomic sum by zero");
        let mut out = CycSum {
            p: self.p,
            ell: self.ell,
            denom: &self.denom * d,
            coeffs: self.coeffs.clone(),
        };
        out.normalize();
        out
    }

    /// Multiplies by `ζ_p^u ζ_ℓ^v`.
    pub fn mul_monomial(&self, u: u32, v: u32) -> Self {
        self.remap(1, u % self.p, 1, v % self.ell)
    }

    pub fn conjugate(&self, mode: Conjugation) -> Self {
        let (a, k) = match mode {
            Conjugation::P => (self.p - 1, 1),
            Conjugation::Ell => (1, self.ell - 1),
            Conjugation::Both => (self.p - 1, self.ell - 1),
        };
        self.remap(a, 0, k, 0)
    }

    /// The automorphism `ζ_ℓ -> ζ_ℓ^k` for a unit `k` mod `ℓ`.
    pub fn galois_twist(&self, k: i64) -> Result<Self> {
        let k = k.rem_euclid(self.ell as i64) as u32;
        if k == 0 {
            return Err(Error::NotUnit(k as i64, self.ell));
        }
        Ok(self.remap(1, 0, k, 0))
    }

    /// The automorphism `ζ_p -> ζ_p^a` for a unit `a` mod `p`.
    pub fn galois_twist_p(&self, a: i64) -> Result<Self> {
        let a = a.rem_euclid(self.p as i64) as u32;
        if a == 0 {
            return Err(Error::NotUnit(a as i64, self.p));
        }
        Ok(self.remap(a, 0, 1, 0))
    }

    /// Value at `ζ_p = e^{2πi/p}`, `ζ_ℓ = e^{2πi/ℓ}`.
    pub fn embed_complex(&self) -> Complex64 {
        let lw = (self.ell - 1) as usize;
        let mut z = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (u, v) = ((i / lw) as f64, (i % lw) as f64);
            let angle = 2.0 * PI * (u / self.p as f64 + v / self.ell as f64);
            z += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle);
        }
        z / self.denom.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_json(&self) -> Value {
        let lw = (self.ell - 1) as usize;
        let rows: Vec<Value> = self
            .coeffs
            .chunks(lw)
            .map(|row| Value::Array(row.iter().map(big_to_json).collect()))
            .collect();
        json!({
            "p": self.p,
            "ell": self.ell,
            "denom": big_to_json(&self.denom),
            "coeffs": rows,
        })
    }

    /// Parses the JSON form, re-canonicalizing the content.
    pub fn from_json(value: &Value) -> Result<Self> {
        let field = |name: &str| {
            value
                .get(name)
                .ok_or_else(|| Error::Parse(format!("cyclotomic sum is missing {name:?}")))
        };
        let small = |name: &str| -> Result<u32> {
            field(name)?
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| Error::Parse(format!("{name:?} must be a small integer")))
        };
        let (p, ell) = (small("p")?, small("ell")?);
        if !crate::field::is_prime(p as u64) || !crate::field::is_prime(ell as u64) || p == ell {
            return Err(Error::Parse(format!("(p, ell) = ({p}, {ell}) are not distinct primes")));
        }
        let denom = json_to_big(field("denom")?)?;
        if !denom.is_positive() {
            return Err(Error::Parse("denominator must be positive".into()));
        }
        let rows = field("coeffs")?
            .as_array()
            .ok_or_else(|| Error::Parse("coeffs must be an array".into()))?;
        if rows.len() != (p - 1) as usize {
            return Err(Error::Parse(format!("expected {} coefficient rows", p - 1)));
        }
        let mut coeffs = Vec::new();
        for row in rows {
            let row = row
                .as_array()
                .filter(|r| r.len() == (ell - 1) as usize)
                .ok_or_else(|| Error::Parse(format!("each row needs {} entries", ell - 1)))?;
            for c in row {
                coeffs.push(json_to_big(c)?);
            }
        }
        let mut out = CycSum { p, ell, denom, coeffs };
        out.normalize();
        Ok(out)
    }
}

fn big_to_json(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integers are valid JSON numbers"))
}

fn json_to_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            BigInt::from_str(&n.to_string()).map_err(|_| Error::Parse(format!("{n} is not an integer")))
        }
        other => Err(Error::Parse(format!("{other} is not an integer"))),
    }
}

impl Serialize for CycSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycSum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        CycSum::from_json(&value).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for CycSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lw = (self.ell - 1) as usize;
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (u, v) = (i / lw, i % lw);
            let mut mono = String::new();
            if u > 0 {
                mono.push_str(&format!("z{}^{}", self.p, u));
            }
            if v > 0 {
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&format!("z{}^{}", self.ell, v));
            }
            terms.push(if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if *c == -BigInt::one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            });
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        };
        if self.denom.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.denom)
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl std::ops::$trait<&CycSum> for &CycSum {
            type Output = CycSum;

            /// Panics if the operands live in different rings; see [`CycSum::arith`].
            fn $method(self, rhs: &CycSum) -> CycSum {
                self.arith(rhs, $op)
                    .expect("cyclotomic operands must share (p, ell)")
            }
        }

        impl std::ops::$trait<CycSum> for CycSum {
            type Output = CycSum;

            fn $method(self, rhs: CycSum) -> CycSum {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, CycOp::Add);
binop!(Sub, sub, CycOp::Sub);
binop!(Mul, mul, CycOp::Mul);

impl std::ops::Neg for &CycSum {
    type Output = CycSum;

    fn neg(self) -> CycSum {
        self.scale(-1)
    }
}
