//! Cover and graph isomorphism decided through the rigid form
//! `(x, i) -> (t x^{p^σ} + a, n i + k)` of isomorphisms between covers.

use serde_json::{json, Value};

use crate::cover::VoltageAssignment;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};

/// The map `(x, i) -> (t x^{p^σ} + a, n i + k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub t: FieldElement,
    pub sigma: usize,
    pub a: FieldElement,
    pub k: u32,
    pub n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoStatus {
    Isomorphic(IsoWitness),
    NotIsomorphic,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoVerdict {
    pub status: IsoStatus,
    /// `r <= 4` or `ℓ > (q-1)/2`, under which every graph isomorphism has the rigid form.
    pub hypothesis_ok: bool,
}

pub fn rigidity_hypothesis(field: &FiniteField, ell: u32) -> bool {
    field.r() <= 4 || ell as u64 > (field.q() as u64 - 1) / 2
}

/// `values_of_image[σ][j][m]` is the square index of `g^{2m} * (g^{2j})^{p^σ}`.
struct ScanTables {
    frob: Vec<Vec<usize>>,
    half: usize,
}

impl ScanTables {
    fn new(field: &FiniteField) -> Self {
        let squares = field.squares();
        let frob = (0..field.r() as usize)
            .map(|sigma| {
                squares
                    .iter()
                    .map(|&s| field.square_index(field.frobenius(s, sigma)).expect("square"))
                    .collect()
            })
            .collect();
        ScanTables {
            frob,
            half: squares.len(),
        }
    }

    /// Does `n α(s) = β(t s^{p^σ})` hold for all squares, with `t = g^{2m}`?
    fn matches(&self, alpha: &[u32], beta: &[u32], ell: u32, m: usize, sigma: usize, n: u32) -> bool {
        self.frob[sigma]
            .iter()
            .enumerate()
            .all(|(j, &fj)| (alpha[j] * n) % ell == beta[(fj + m) % self.half])
    }
}

/// First `(t, σ)` with `α(s) = β(t s^{p^σ})` for all squares `s`, scanning `t`
/// by even generator powers and then `σ` ascending.
pub fn cover_isomorphic(alpha: &VoltageAssignment, beta: &VoltageAssignment) -> Result<Option<(FieldElement, usize)>> {
    alpha.ensure_same_parameters(beta)?;
    let f = alpha.field();
    let tables = ScanTables::new(f);
    for m in 0..tables.half {
        for sigma in 0..f.r() as usize {
            if tables.matches(alpha.values(), beta.values(), alpha.ell(), m, sigma, 1) {
                return Ok(Some((f.exp(2 * m as u64), sigma)));
            }
        }
    }
    Ok(None)
}

/// Scans `n` ascending, then `t`, then `σ` for `n α(s) = β(t s^{p^σ})`. Without a
/// hit the verdict is `NotIsomorphic` only under the rigidity hypothesis.
pub fn graph_isomorphic(alpha: &VoltageAssignment, beta: &VoltageAssignment) -> Result<IsoVerdict> {
    alpha.ensure_same_parameters(beta)?;
    let f = alpha.field();
    let ell = alpha.ell();
    let tables = ScanTables::new(f);
    let hypothesis_ok = rigidity_hypothesis(f, ell);
    for n in 1..ell {
        for m in 0..tables.half {
            for sigma in 0..f.r() as usize {
                if tables.matches(alpha.values(), beta.values(), ell, m, sigma, n) {
                    let witness = IsoWitness {
                        t: f.exp(2 * m as u64),
                        sigma,
                        a: FieldElement::ZERO,
                        k: 0,
                        n,
                    };
                    return Ok(IsoVerdict {
                        status: IsoStatus::Isomorphic(witness),
                        hypothesis_ok,
                    });
                }
            }
        }
    }
    let status = if hypothesis_ok {
        IsoStatus::NotIsomorphic
    } else {
        IsoStatus::Unknown
    };
    Ok(IsoVerdict { status, hypothesis_ok })
}

impl IsoWitness {
    /// Image of each cover vertex `x.index() * ℓ + i`.
    pub fn vertex_map(&self, field: &FiniteField, ell: u32) -> Vec<usize> {
        let ell = ell as usize;
        let mut map = Vec::with_capacity(field.q() as usize * ell);
        for x in field.elements() {
            let y = field.add(field.mul(self.t, field.frobenius(x, self.sigma)), self.a);
            for i in 0..ell {
                map.push(y.index() * ell + (self.n as usize * i + self.k as usize) % ell);
            }
        }
        map
    }

    pub fn to_json(&self, field: &FiniteField) -> Value {
        json!({
            "t": field.key(self.t),
            "sigma": self.sigma,
            "a": field.key(self.a),
            "k": self.k,
            "n": self.n,
        })
    }

    pub fn from_json(field: &FiniteField, value: &Value) -> Result<Self> {
        let key = |name: &str| -> Result<FieldElement> {
            let s = value
                .get(name)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("witness needs {name:?}")))?;
            field.parse_key(s)
        };
        let int = |name: &str| -> Result<u64> {
            value
                .get(name)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("witness needs {name:?}")))
        };
        Ok(IsoWitness {
            t: key("t")?,
            sigma: int("sigma")? as usize,
            a: key("a")?,
            k: int("k")? as u32,
            n: int("n")? as u32,
        })
    }
}

impl IsoStatus {
    pub fn name(&self) -> &'static str {
        match self {
            IsoStatus::Isomorphic(_) => "Isomorphic",
            IsoStatus::NotIsomorphic => "NotIsomorphic",
            IsoStatus::Unknown => "Unknown",
        }
    }
}

impl IsoVerdict {
    pub fn to_json(&self, field: &FiniteField) -> Value {
        let mut out = json!({ "status": self.status.name() });
        if let IsoStatus::Isomorphic(w) = &self.status {
            out["witness"] = w.to_json(field);
        }
        out["hypothesis_ok"] = json!(self.hypothesis_ok);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_cover, enumerate_voltages, tau_from_map};
    use crate::spectrum::{cospectral, full_spectrum};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn field(p: u32, r: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, r, None).unwrap())
    }

    #[test]
    fn identity_and_constructed_witnesses() {
        let f = field(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let alpha = VoltageAssignment::random(f.clone(), 3, &mut rng).unwrap();
            assert_eq!(cover_isomorphic(&alpha, &alpha).unwrap(), Some((f.one(), 0)));
            let t = f.exp(2 * rng.gen_range(0..12));
            let i = rng.gen_range(0..2);
            // alpha = beta^t ∘ σ means beta = transform of alpha by the inverse map
            let beta = alpha.transform(t, i, 1).unwrap();
            let (t2, s2) = cover_isomorphic(&beta, &alpha).unwrap().unwrap();
            for (s, v) in beta.iter() {
                assert_eq!(alpha.get(f.mul(t2, f.frobenius(s, s2))), Some(v));
            }
        }
    }

    #[test]
    fn scalar_multiples_are_graph_isomorphic() {
        let f = field(13, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let alpha = VoltageAssignment::random(f.clone(), 7, &mut rng).unwrap();
        for n in 1..7 {
            let beta = alpha.scaled(n).unwrap();
            let verdict = graph_isomorphic(&alpha, &beta).unwrap();
            let IsoStatus::Isomorphic(w) = verdict.status else {
                panic!("expected a witness for n = {n}");
            };
            let map = w.vertex_map(&f, 7);
            assert!(build_cover(&alpha)
                .graph()
                .is_isomorphism(build_cover(&beta).graph(), &map));
        }
    }

    #[test]
    fn frobenius_twist_needs_nontrivial_sigma() {
        let f = field(3, 2);
        let found = enumerate_voltages(f.clone(), 5, 100).unwrap().any(|alpha| {
            let tau = tau_from_map(&f, |s| f.frobenius(s, 1)).unwrap();
            let beta = alpha.from_tau(&tau).unwrap();
            let verdict = graph_isomorphic(&alpha, &beta).unwrap();
            let IsoStatus::Isomorphic(w) = verdict.status else {
                panic!("Galois twists are isomorphic");
            };
            let map = w.vertex_map(&f, 5);
            assert!(build_cover(&alpha)
                .graph()
                .is_isomorphism(build_cover(&beta).graph(), &map));
            w.sigma == 1
        });
        assert!(found);
    }

    #[test]
    fn hypothesis_gates_negative_verdicts() {
        let f = field(3, 2);
        assert!(rigidity_hypothesis(&f, 2));
        let big = FiniteField::new(3, 6, None);
        if let Ok(big) = big {
            assert!(!rigidity_hypothesis(&big, 5));
            assert!(rigidity_hypothesis(&big, 367));
        }
    }

    #[test]
    fn witnesses_preserve_adjacency_and_spectra() {
        let f = field(13, 1);
        let all: Vec<_> = enumerate_voltages(f.clone(), 3, 100).unwrap().collect();
        let spectra: Vec<_> = all.iter().map(full_spectrum).collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                if cover_isomorphic(a, b).unwrap().is_some() {
                    assert!(cospectral(&spectra[i], &spectra[j]).unwrap());
                }
                if let IsoStatus::Isomorphic(w) = graph_isomorphic(a, b).unwrap().status {
                    let map = w.vertex_map(&f, 3);
                    assert!(build_cover(a).graph().is_isomorphism(build_cover(b).graph(), &map));
                }
            }
        }
    }

    #[test]
    fn verdict_json() {
        let f = field(5, 1);
        let a = VoltageAssignment::from_pair_values(f.clone(), 3, &[1]).unwrap();
        let b = VoltageAssignment::from_pair_values(f.clone(), 3, &[2]).unwrap();
        let v = graph_isomorphic(&a, &b).unwrap();
        let j = v.to_json(&f);
        assert_eq!(j["status"], "Isomorphic");
        assert_eq!(j["hypothesis_ok"], true);
        let IsoStatus::Isomorphic(w) = v.status else {
            unreachable!()
        };
        assert_eq!(IsoWitness::from_json(&f, &j["witness"]).unwrap(), w);
    }
}
