//! Voltage assignments on the squares of `F_q` and the cyclic covers they define.
//!
//! A voltage is stored by square index: `values[j]` is the voltage of `g^{2j}`.
//! With `h = (q-1)/4`, the negative of `g^{2j}` is `g^{2(j+h)}`, so the first `h`
//! indices are one representative per `±` pair.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldElement, FiniteField};
use crate::graph::Graph;

#[derive(Clone)]
pub struct VoltageAssignment {
    field: Arc<FiniteField>,
    ell: u32,
    values: Vec<u32>,
}

impl PartialEq for VoltageAssignment {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && *self.field == *other.field && self.values == other.values
    }
}

impl Eq for VoltageAssignment {}

impl fmt::Debug for VoltageAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Voltage(q={}, ell={}, {:?})", self.field.q(), self.ell, self.values)
    }
}

/// Checks that `ell` is a prime different from the characteristic.
pub fn check_ell(field: &FiniteField, ell: u32) -> Result<()> {
    if !is_prime(ell as u64) {
        return Err(Error::InvalidEll(format!("{ell} is not prime")));
    }
    if ell == field.p() {
        return Err(Error::InvalidEll(format!("{ell} equals the characteristic")));
    }
    Ok(())
}

/// Number of `±` pairs of nonzero squares, `(q-1)/4`.
pub fn pair_count(field: &FiniteField) -> usize {
    (field.q() as usize - 1) / 4
}

fn unit_mod(n: i64, ell: u32) -> Result<u32> {
    let m = n.rem_euclid(ell as i64) as u32;
    if m == 0 {
        return Err(Error::NotUnit(n, ell));
    }
    Ok(m)
}

/// Builds a voltage from values on some squares; each `±` pair needs at least
/// one member, and the rest is completed by `α(-s) = -α(s)`.
pub fn make_voltage(
    field: Arc<FiniteField>,
    ell: u32,
    partial: &BTreeMap<FieldElement, i64>,
) -> Result<VoltageAssignment> {
    field.ensure_one_mod_four()?;
    check_ell(&field, ell)?;
    let half = (field.q() as usize - 1) / 2;
    let h = half / 2;
    let mut values: Vec<Option<u32>> = vec![None; half];
    for (&s, &v) in partial {
        let j = field
            .square_index(s)
            .ok_or_else(|| Error::InvalidVoltage(format!("{} is not a nonzero square", field.pretty(s))))?;
        let v = v.rem_euclid(ell as i64) as u32;
        let (own, partner) = (j, (j + h) % half);
        let neg = (ell - v) % ell;
        for (idx, val) in [(own, v), (partner, neg)] {
            match values[idx] {
                Some(old) if old != val => {
                    return Err(Error::InvalidVoltage(format!(
                        "values at {} and its negative are not opposite",
                        field.pretty(s)
                    )))
                }
                _ => values[idx] = Some(val),
            }
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            v.ok_or_else(|| {
                Error::InvalidVoltage(format!(
                    "no value for the pair of {}",
                    field.pretty(field.exp(2 * j as u64))
                ))
            })
        })
        .collect::<Result<Vec<u32>>>()?;
    VoltageAssignment::from_values(field, ell, values)
}

impl VoltageAssignment {
    /// Values by square index; must be odd and not identically zero.
    pub fn from_values(field: Arc<FiniteField>, ell: u32, values: Vec<u32>) -> Result<Self> {
        field.ensure_one_mod_four()?;
        check_ell(&field, ell)?;
        let half = (field.q() as usize - 1) / 2;
        if values.len() != half {
            return Err(Error::InvalidVoltage(format!(
                "expected {half} values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|&v| v >= ell) {
            return Err(Error::InvalidVoltage(format!("values must lie in 0..{ell}")));
        }
        let h = half / 2;
        if (0..h).any(|j| !(values[j] + values[j + h]).is_multiple_of(ell)) {
            return Err(Error::InvalidVoltage("assignment is not odd".into()));
        }
        if values.iter().all(|&v| v == 0) {
            return Err(Error::InvalidVoltage("assignment is identically zero".into()));
        }
        Ok(VoltageAssignment { field, ell, values })
    }

    /// Values on the pair representatives `g^0, g^2, ..., g^{2(h-1)}`.
    pub fn from_pair_values(field: Arc<FiniteField>, ell: u32, reps: &[u32]) -> Result<Self> {
        let h = pair_count(&field);
        if reps.len() != h {
            return Err(Error::InvalidVoltage(format!(
                "expected {h} pair values, got {}",
                reps.len()
            )));
        }
        let mut values: Vec<u32> = reps.iter().map(|&v| v % ell.max(1)).collect();
        values.extend(reps.iter().map(|&v| (ell - v % ell) % ell));
        Self::from_values(field, ell, values)
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Values indexed by square index.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn pair_values(&self) -> &[u32] {
        &self.values[..self.values.len() / 2]
    }

    /// `α(s)`, or `None` when `s` is not a nonzero square.
    pub fn get(&self, s: FieldElement) -> Option<u32> {
        self.field.square_index(s).map(|j| self.values[j])
    }

    /// Pairs `(s, α(s))` over all nonzero squares, in generator order.
    pub fn iter(&self) -> impl Iterator<Item = (FieldElement, u32)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(j, &v)| (self.field.exp(2 * j as u64), v))
    }

    pub fn same_parameters(&self, other: &Self) -> bool {
        self.ell == other.ell && *self.field == *other.field
    }

    pub fn ensure_same_parameters(&self, other: &Self) -> Result<()> {
        if self.same_parameters(other) {
            Ok(())
        } else {
            Err(Error::ParameterMismatch(format!(
                "q = {}, ell = {} versus q = {}, ell = {}",
                self.field.q(),
                self.ell,
                other.field.q(),
                other.ell
            )))
        }
    }

    /// `s -> n * α(t^{-1} s^{p^i})`.
    pub fn transform(&self, t: FieldElement, i: usize, n: i64) -> Result<Self> {
        let f = &self.field;
        if t.is_zero() || f.square_index(t).is_none() {
            return Err(Error::NotASquare(f.pretty(t)));
        }
        let n = unit_mod(n, self.ell)?;
        let t_inv = f.inv(t)?;
        let values = (0..self.values.len())
            .map(|j| {
                let s = f.exp(2 * j as u64);
                let src = f.mul(t_inv, f.frobenius(s, i % f.r() as usize));
                let v = self.values[f.square_index(src).expect("square maps to square")];
                (v * n) % self.ell
            })
            .collect();
        Ok(VoltageAssignment {
            field: f.clone(),
            ell: self.ell,
            values,
        })
    }

    /// `n * α`.
    pub fn scaled(&self, n: i64) -> Result<Self> {
        self.transform(FieldElement::ONE, 0, n)
    }

    /// The voltage `β` with `β(tau(s)) = α(s)`, where `tau` is given by square
    /// index and must be a trace-preserving involution commuting with negation.
    pub fn from_tau(&self, tau: &[usize]) -> Result<Self> {
        check_tau(&self.field, tau)?;
        let mut values = vec![0; self.values.len()];
        for (j, &img) in tau.iter().enumerate() {
            values[img] = self.values[j];
        }
        Self::from_values(self.field.clone(), self.ell, values)
    }

    /// Uniform over the nonzero choices of pair values.
    pub fn random<R: Rng + ?Sized>(field: Arc<FiniteField>, ell: u32, rng: &mut R) -> Result<Self> {
        field.ensure_one_mod_four()?;
        check_ell(&field, ell)?;
        let h = pair_count(&field);
        loop {
            let reps: Vec<u32> = (0..h).map(|_| rng.gen_range(0..ell)).collect();
            if reps.iter().any(|&v| v != 0) {
                return Self::from_pair_values(field, ell, &reps);
            }
        }
    }

    /// Position in [`enumerate_voltages`] order, starting from 1.
    pub fn code(&self) -> u64 {
        self.pair_values()
            .iter()
            .fold(0u64, |acc, &v| acc * self.ell as u64 + v as u64)
    }

    /// Smallest pair-value vector over the orbit under `(t, σ, n)`. Two voltages
    /// have the same representative iff their covers are isomorphic via a
    /// map of the form `(x, i) -> (t x^{p^σ}, n i)`.
    pub fn orbit_representative(&self) -> VoltageAssignment {
        let f = &self.field;
        let mut best: Option<Vec<u32>> = None;
        for t in f.squares() {
            for sigma in 0..f.r() as usize {
                for n in 1..self.ell as i64 {
                    let v = self.transform(t, sigma, n).expect("valid transform parameters");
                    let cand = v.pair_values();
                    if best.as_deref().is_none_or(|b| cand < b) {
                        best = Some(cand.to_vec());
                    }
                }
            }
        }
        Self::from_pair_values(f.clone(), self.ell, &best.expect("nonempty group")).expect("orbit members are valid")
    }

    /// Values keyed by the member of each `±` pair with the smaller index.
    pub fn representative_values(&self) -> BTreeMap<FieldElement, u32> {
        self.iter().filter(|&(s, _)| s < self.field.neg(s)).collect()
    }
}

/// Validates a permutation of square indices as a trace-preserving involution
/// commuting with negation.
pub fn check_tau(field: &FiniteField, tau: &[usize]) -> Result<()> {
    let squares = field.squares();
    let half = squares.len();
    if tau.len() != half {
        return Err(Error::InvalidPermutation(format!(
            "expected {half} entries, got {}",
            tau.len()
        )));
    }
    let h = half / 2;
    for (j, &img) in tau.iter().enumerate() {
        if img >= half {
            return Err(Error::InvalidPermutation(format!("entry {img} out of range")));
        }
        if tau[img] != j {
            return Err(Error::InvalidPermutation("not an involution".into()));
        }
        if tau[(j + h) % half] != (img + h) % half {
            return Err(Error::InvalidPermutation("does not commute with negation".into()));
        }
        if field.trace(squares[j]) != field.trace(squares[img]) {
            return Err(Error::InvalidPermutation("does not preserve the trace".into()));
        }
    }
    Ok(())
}

/// A permutation of square indices from a map on elements.
pub fn tau_from_map(field: &FiniteField, map: impl Fn(FieldElement) -> FieldElement) -> Result<Vec<usize>> {
    field
        .squares()
        .into_iter()
        .map(|s| {
            let img = map(s);
            field
                .square_index(img)
                .ok_or_else(|| Error::InvalidPermutation(format!("{} is not a square", field.pretty(img))))
        })
        .collect()
}

/// All `ℓ^h - 1` voltages, ordered by their pair-value vectors with the pair
/// of `g^0` most significant. Fails if the count exceeds `cap`.
pub fn enumerate_voltages(
    field: Arc<FiniteField>,
    ell: u32,
    cap: u64,
) -> Result<impl Iterator<Item = VoltageAssignment>> {
    field.ensure_one_mod_four()?;
    check_ell(&field, ell)?;
    let total = voltage_count(&field, ell).filter(|&n| n <= cap).ok_or_else(|| {
        Error::BudgetExceeded(format!(
            "{}^{} voltages exceed the enumeration cap {cap}",
            ell,
            pair_count(&field)
        ))
    })?;
    Ok((1..=total).map(move |code| voltage_from_code(field.clone(), ell, code).expect("code in range")))
}

/// `ℓ^h - 1`, or `None` on overflow.
pub fn voltage_count(field: &FiniteField, ell: u32) -> Option<u64> {
    (ell as u64).checked_pow(pair_count(field) as u32).map(|n| n - 1)
}

/// Inverse of [`VoltageAssignment::code`].
pub fn voltage_from_code(field: Arc<FiniteField>, ell: u32, code: u64) -> Result<VoltageAssignment> {
    let h = pair_count(&field);
    let mut reps = vec![0u32; h];
    let mut rest = code;
    for slot in reps.iter_mut().rev() {
        *slot = (rest % ell as u64) as u32;
        rest /= ell as u64;
    }
    if rest != 0 {
        return Err(Error::InvalidVoltage(format!("code {code} out of range")));
    }
    VoltageAssignment::from_pair_values(field, ell, &reps)
}

/// The Cayley graph of `F_q x Z/ℓ` with generators `(s, α(s))`.
#[derive(Clone, Debug)]
pub struct CoverGraph {
    voltage: VoltageAssignment,
    graph: Graph,
}

/// Vertex `(x, i)` has id `x.index() * ℓ + i`.
pub fn build_cover(voltage: &VoltageAssignment) -> CoverGraph {
    let f = voltage.field();
    let ell = voltage.ell() as usize;
    let q = f.q() as usize;
    let mut adj = Vec::with_capacity(q * ell);
    for x in f.elements() {
        for i in 0..ell {
            adj.push(
                voltage
                    .iter()
                    .map(|(s, a)| f.add(x, s).index() * ell + (i + a as usize) % ell)
                    .collect(),
            );
        }
    }
    CoverGraph {
        voltage: voltage.clone(),
        graph: Graph::from_adjacency(adj),
    }
}

impl CoverGraph {
    pub fn voltage(&self) -> &VoltageAssignment {
        &self.voltage
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex(&self, x: FieldElement, i: u32) -> usize {
        x.index() * self.voltage.ell() as usize + i as usize
    }

    pub fn label(&self, v: usize) -> (FieldElement, u32) {
        let ell = self.voltage.ell() as usize;
        (FieldElement::from_index(v / ell), (v % ell) as u32)
    }

    pub fn generators(&self) -> Vec<(FieldElement, u32)> {
        self.voltage.iter().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    /// The deck transformation `(x, i) -> (x, i + 1)`.
    pub fn deck_shift(&self) -> Vec<usize> {
        let ell = self.voltage.ell() as usize;
        (0..self.graph.n()).map(|v| v - v % ell + (v % ell + 1) % ell).collect()
    }
}
