//! Exact cover spectra as cyclotomic integers, plus a dense floating-point oracle.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::SymmetricEigen;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cover::{CoverGraph, VoltageAssignment};
use crate::cyclotomic::{CycSum, ExponentCounts};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::graph::Graph;

/// Default vertex cap for the dense eigensolver.
pub const DEFAULT_DENSE_CAP: usize = 2000;

/// `θ_{a,k} = Σ_s ζ_p^{tr(as)} ζ_ℓ^{k α(s)}` over the nonzero squares `s`.
pub fn theta(voltage: &VoltageAssignment, a: FieldElement, k: u32) -> CycSum {
    let f = voltage.field();
    let ell = voltage.ell();
    let mut counts = ExponentCounts::new(f.p(), ell);
    for (s, v) in voltage.iter() {
        counts.add(f.trace(f.mul(a, s)), (k % ell) * v, 1);
    }
    CycSum::from_exponent_counts(&counts)
}

#[derive(Clone, Debug)]
pub struct CoverSpectrum {
    field: Arc<FiniteField>,
    ell: u32,
    /// `labels[a.index() * ℓ + k] = θ_{a,k}`
    labels: Vec<CycSum>,
    multiset: Vec<(CycSum, usize)>,
}

/// All `qℓ` eigenvalues of the cover `X^α`.
pub fn full_spectrum(voltage: &VoltageAssignment) -> CoverSpectrum {
    let f = voltage.field();
    let ell = voltage.ell();
    let labels: Vec<CycSum> = (0..f.q() as usize)
        .into_par_iter()
        .flat_map_iter(|a| (0..ell).map(move |k| theta(voltage, FieldElement::from_index(a), k)))
        .collect();
    CoverSpectrum::from_labels(f.clone(), ell, labels)
}

impl CoverSpectrum {
    fn from_labels(field: Arc<FiniteField>, ell: u32, labels: Vec<CycSum>) -> Self {
        let mut counts: BTreeMap<&CycSum, usize> = BTreeMap::new();
        for theta in &labels {
            *counts.entry(theta).or_default() += 1;
        }
        let multiset = counts.into_iter().map(|(c, n)| (c.clone(), n)).collect();
        CoverSpectrum {
            field,
            ell,
            labels,
            multiset,
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn get(&self, a: FieldElement, k: u32) -> &CycSum {
        &self.labels[a.index() * self.ell as usize + (k % self.ell) as usize]
    }

    /// Labeled entries in `(a, k)` order.
    pub fn labeled(&self) -> impl Iterator<Item = (FieldElement, u32, &CycSum)> + '_ {
        let ell = self.ell as usize;
        self.labels
            .iter()
            .enumerate()
            .map(move |(i, c)| (FieldElement::from_index(i / ell), (i % ell) as u32, c))
    }

    /// Distinct eigenvalues in canonical order with multiplicities.
    pub fn multiset(&self) -> &[(CycSum, usize)] {
        &self.multiset
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The same spectrum with one labeled entry replaced.
    pub fn with_entry(&self, a: FieldElement, k: u32, value: CycSum) -> Self {
        let mut labels = self.labels.clone();
        labels[a.index() * self.ell as usize + (k % self.ell) as usize] = value;
        Self::from_labels(self.field.clone(), self.ell, labels)
    }

    /// SHA-256 over the canonical multiset, hex encoded.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("q={};ell={};", self.field.q(), self.ell));
        for (c, n) in &self.multiset {
            hasher.update(format!("{}x{};", c.to_json(), n));
        }
        hex::encode(hasher.finalize())
    }

    /// Sum of all eigenvalues, the trace of the adjacency matrix.
    pub fn trace(&self) -> CycSum {
        let (p, ell) = (self.field.p(), self.ell);
        self.labels.iter().fold(CycSum::zero(p, ell), |acc, c| &acc + c)
    }

    /// Sum of squared eigenvalues.
    pub fn trace_of_square(&self) -> CycSum {
        CycSum::dot(self.field.p(), self.ell, self.labels.iter().map(|c| (c, c)))
    }

    /// Eigenvalues embedded in the complex numbers, real parts sorted ascending.
    pub fn sorted_floats(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.labels.iter().map(|c| c.embed_complex().re).collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// Laplacian eigenvalues `(q-1)/2 - θ`, in label order.
    pub fn laplacian(&self) -> Vec<CycSum> {
        let (p, ell) = (self.field.p(), self.ell);
        let valency = CycSum::from_int(p, ell, (self.field.q() as i64 - 1) / 2);
        self.labels.iter().map(|c| &valency - c).collect()
    }

    /// Entries sorted by canonical form, then label.
    pub fn to_json(&self) -> Value {
        let mut entries: Vec<(&CycSum, FieldElement, u32)> = self.labeled().map(|(a, k, c)| (c, a, k)).collect();
        entries.sort();
        Value::Array(
            entries
                .into_iter()
                .map(|(c, a, k)| {
                    json!({
                        "a": self.field.key(a),
                        "k": k,
                        "exact": c.to_json(),
                        "float": c.embed_complex().re,
                    })
                })
                .collect(),
        )
    }

    /// Rebuilds a spectrum from [`Self::to_json`] output; every label must appear once.
    pub fn from_json(field: Arc<FiniteField>, ell: u32, value: &Value) -> Result<Self> {
        let entries = value
            .as_array()
            .ok_or_else(|| Error::Parse("spectrum must be a list".into()))?;
        let n = field.q() as usize * ell as usize;
        let mut labels: Vec<Option<CycSum>> = vec![None; n];
        for e in entries {
            let a = e
                .get("a")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("spectrum entry needs \"a\"".into()))?;
            let a = field.parse_key(a)?;
            let k = e
                .get("k")
                .and_then(Value::as_u64)
                .filter(|&k| k < ell as u64)
                .ok_or_else(|| Error::Parse("spectrum entry needs \"k\" below ell".into()))?;
            let exact = CycSum::from_json(
                e.get("exact")
                    .ok_or_else(|| Error::Parse("spectrum entry needs \"exact\"".into()))?,
            )?;
            if exact.p() != field.p() || exact.ell() != ell {
                return Err(Error::ParameterMismatch(
                    "eigenvalue ring differs from the field".into(),
                ));
            }
            labels[a.index() * ell as usize + k as usize] = Some(exact);
        }
        let labels = labels
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse(format!("spectrum needs all {n} labels")))?;
        Ok(Self::from_labels(field, ell, labels))
    }
}

/// Exact multiset equality.
pub fn cospectral(a: &CoverSpectrum, b: &CoverSpectrum) -> Result<bool> {
    if a.ell != b.ell || *a.field != *b.field {
        return Err(Error::ParameterMismatch(
            "spectra of covers with different (q, ell)".into(),
        ));
    }
    Ok(a.multiset == b.multiset)
}

/// Eigenvalues of the dense adjacency matrix, ascending.
pub fn numeric_graph_spectrum(graph: &Graph, cap: usize) -> Result<Vec<f64>> {
    if graph.n() > cap {
        return Err(Error::BudgetExceeded(format!(
            "{} vertices exceed the dense eigensolver cap {cap}",
            graph.n()
        )));
    }
    let eig = SymmetricEigen::new(graph.dense_adjacency());
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn numeric_spectrum(cover: &CoverGraph, cap: usize) -> Result<Vec<f64>> {
    numeric_graph_spectrum(cover.graph(), cap)
}

/// Recovers `α` from the `k`-slice of its spectrum by inverting
/// `θ_{a,k} = Σ_x ζ_p^{tr(ax)} ψ_k(α(x))` over the additive characters.
pub fn reconstruct_voltage(spec: &CoverSpectrum, k: u32) -> Result<VoltageAssignment> {
    let f = spec.field();
    let ell = spec.ell();
    let (p, q) = (f.p(), f.q());
    if k.is_multiple_of(ell) {
        return Err(Error::NotUnit(k as i64, ell));
    }
    let mut values = Vec::with_capacity((q as usize - 1) / 2);
    let squares = f.squares();
    let candidates: Vec<CycSum> = (0..ell).map(|m| CycSum::monomial(p, ell, 0, (k * m) % ell)).collect();
    let zero = CycSum::zero(p, ell);
    let psi = |x: FieldElement| -> CycSum {
        let total = f.elements().fold(CycSum::zero(p, ell), |acc, a| {
            let u = (p - f.trace(f.mul(a, x))) % p;
            &acc + &spec.get(a, k).mul_monomial(u, 0)
        });
        total.div_int(q as i64)
    };
    for &s in &squares {
        let value = psi(s);
        let m = candidates.iter().position(|c| *c == value).ok_or_else(|| {
            Error::NotACoverSpectrum(format!("value at {} is not an l-th root of unity", f.pretty(s)))
        })?;
        values.push(m as u32);
    }
    for x in f.elements() {
        if (x.is_zero() || f.square_index(x).is_none()) && psi(x) != zero {
            return Err(Error::NotACoverSpectrum(format!(
                "nonzero value off the squares at {}",
                f.pretty(x)
            )));
        }
    }
    VoltageAssignment::from_values(f.clone(), ell, values).map_err(|e| Error::NotACoverSpectrum(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_cover, enumerate_voltages, make_voltage};
    use crate::cyclotomic::Conjugation;
    use crate::paley::build_paley;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn field(p: u32, r: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, r, None).unwrap())
    }

    fn five_cycle_cover(v: i64) -> VoltageAssignment {
        let f = field(5, 1);
        make_voltage(f.clone(), 3, &[(f.one(), v)].into_iter().collect()).unwrap()
    }

    #[test]
    fn fifteen_cycle() {
        let alpha = five_cycle_cover(1);
        let spec = full_spectrum(&alpha);
        assert_eq!(spec.len(), 15);
        let top = CycSum::from_int(5, 3, 2);
        assert_eq!(spec.multiset().iter().find(|(c, _)| *c == top).unwrap().1, 1);
        assert!(spec.trace().is_zero());
        assert_eq!(spec.trace_of_square().to_integer(), Some(BigInt::from(30)));

        let mut expected: Vec<f64> = (0..15).map(|j| 2.0 * (2.0 * PI * j as f64 / 15.0).cos()).collect();
        expected.sort_by(f64::total_cmp);
        let numeric = numeric_spectrum(&build_cover(&alpha), DEFAULT_DENSE_CAP).unwrap();
        for ((x, y), z) in numeric.iter().zip(&expected).zip(spec.sorted_floats()) {
            assert!((x - y).abs() < 1e-9);
            assert!((x - z).abs() < 1e-9);
        }
    }

    // term-by-term evaluation of the exponential sum in floating point
    fn theta_float(alpha: &VoltageAssignment, a: FieldElement, k: u32) -> f64 {
        let f = alpha.field();
        alpha
            .iter()
            .map(|(s, v)| {
                let angle =
                    2.0 * PI * (f.trace(f.mul(a, s)) as f64 / f.p() as f64 + (k * v) as f64 / alpha.ell() as f64);
                angle.cos()
            })
            .sum()
    }

    #[test]
    fn theta_basics_and_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, r, ell) in [(5, 2, 3), (13, 1, 5), (3, 2, 7), (17, 1, 2)] {
            let f = field(p, r);
            let alpha = VoltageAssignment::random(f.clone(), ell, &mut rng).unwrap();
            let spec = full_spectrum(&alpha);
            let paley = crate::paley::paley_spectrum_closed_form(&f).unwrap();
            let half = (f.q() as i64 - 1) / 2;
            assert_eq!(spec.get(f.zero(), 0).to_integer(), Some(BigInt::from(half)));
            for (a, k, th) in spec.labeled() {
                assert_eq!(spec.get(f.neg(a), (ell - k) % ell), th);
                assert_eq!(&th.conjugate(Conjugation::Both), th);
                let z = th.embed_complex();
                assert!(z.im.abs() < 1e-12);
                assert!((z.re - theta_float(&alpha, a, k)).abs() < 1e-9);
                if k == 0 && !a.is_zero() {
                    assert!(paley[1..].iter().any(|e| (e.value - z.re).abs() < 1e-9));
                }
                if k != 0 {
                    assert_eq!(&spec.get(a, 1).galois_twist(k as i64).unwrap(), th);
                }
            }
            let q = f.q() as i64;
            assert!(spec.trace().is_zero());
            assert_eq!(
                spec.trace_of_square().to_integer(),
                Some(BigInt::from(q * ell as i64 * (q - 1) / 2))
            );
        }
    }

    #[test]
    fn exact_matches_dense_eigensolver() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, r, ell) in [(13, 1, 3), (5, 2, 3), (3, 2, 5), (17, 1, 3)] {
            let f = field(p, r);
            for _ in 0..3 {
                let alpha = VoltageAssignment::random(f.clone(), ell, &mut rng).unwrap();
                let numeric = numeric_spectrum(&build_cover(&alpha), DEFAULT_DENSE_CAP).unwrap();
                let exact = full_spectrum(&alpha).sorted_floats();
                for (x, y) in numeric.iter().zip(&exact) {
                    assert!((x - y).abs() < 1e-8, "{x} vs {y}");
                }
                assert!((numeric.last().unwrap() - (f.q() as f64 - 1.0) / 2.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dense_cap_is_enforced() {
        let cover = build_cover(&five_cycle_cover(1));
        assert!(matches!(numeric_spectrum(&cover, 10), Err(Error::BudgetExceeded(_))));
        let paley = build_paley(field(5, 1)).unwrap();
        assert_eq!(numeric_graph_spectrum(&paley.graph(), 5).unwrap().len(), 5);
    }

    #[test]
    fn transforms_preserve_spectrum() {
        let f = field(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let alpha = VoltageAssignment::random(f.clone(), 7, &mut rng).unwrap();
        let spec = full_spectrum(&alpha);
        for (t, i) in [(f.exp(2), 0), (f.exp(6), 1), (f.exp(10), 1)] {
            let moved = full_spectrum(&alpha.transform(t, i, 1).unwrap());
            assert!(cospectral(&spec, &moved).unwrap());
            assert_eq!(spec.digest(), moved.digest());
        }
        for n in 1..7 {
            let scaled = full_spectrum(&alpha.scaled(n).unwrap());
            assert!(cospectral(&spec, &scaled).unwrap());
            for (a, k, th) in scaled.labeled() {
                assert_eq!(th, spec.get(a, (k * n as u32) % 7));
            }
        }
        let other = field(13, 1);
        let beta = VoltageAssignment::random(other, 7, &mut rng).unwrap();
        assert!(matches!(
            cospectral(&spec, &full_spectrum(&beta)),
            Err(Error::ParameterMismatch(_))
        ));
    }

    #[test]
    fn reconstruction_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = field(13, 1);
        for _ in 0..10 {
            let alpha = VoltageAssignment::random(f.clone(), 5, &mut rng).unwrap();
            let spec = full_spectrum(&alpha);
            for k in 1..5 {
                assert_eq!(reconstruct_voltage(&spec, k).unwrap(), alpha);
            }
            assert!(matches!(reconstruct_voltage(&spec, 0), Err(Error::NotUnit(0, 5))));
            let broken = spec.with_entry(f.one(), 1, CycSum::zero(13, 5));
            assert!(matches!(
                reconstruct_voltage(&broken, 1),
                Err(Error::NotACoverSpectrum(_))
            ));
        }
    }

    #[test]
    fn json_roundtrip() {
        let alpha = five_cycle_cover(2);
        let spec = full_spectrum(&alpha);
        let back = CoverSpectrum::from_json(alpha.field().clone(), 3, &spec.to_json()).unwrap();
        assert_eq!(back.labels, spec.labels);
        assert!(CoverSpectrum::from_json(alpha.field().clone(), 3, &json!([])).is_err());
    }

    #[test]
    fn cover_isomorphic_voltages_share_digests() {
        let f = field(13, 1);
        let all: Vec<_> = enumerate_voltages(f.clone(), 3, 100).unwrap().collect();
        for alpha in &all {
            let d = full_spectrum(alpha).digest();
            for t in f.squares() {
                assert_eq!(full_spectrum(&alpha.transform(t, 0, 1).unwrap()).digest(), d);
            }
        }
    }
}
