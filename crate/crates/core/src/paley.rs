//! The Paley graph `X(F_q)`: vertices `F_q`, `x ~ y` iff `y - x` is a nonzero square.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct PaleyGraph {
    field: Arc<FiniteField>,
    squares: Vec<FieldElement>,
    is_square: Vec<bool>,
}

/// Builds `X(F_q)`; requires `q ≡ 1 (mod 4)` so that adjacency is symmetric.
pub fn build_paley(field: Arc<FiniteField>) -> Result<PaleyGraph> {
    field.ensure_one_mod_four()?;
    let squares = field.squares();
    let mut is_square = vec![false; field.q() as usize];
    for &s in &squares {
        is_square[s.index()] = true;
    }
    Ok(PaleyGraph {
        field,
        squares,
        is_square,
    })
}

impl PaleyGraph {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// Nonzero squares ordered by even powers of the generator.
    pub fn squares(&self) -> &[FieldElement] {
        &self.squares
    }

    pub fn is_square(&self, x: FieldElement) -> bool {
        self.is_square[x.index()]
    }

    pub fn is_adjacent(&self, x: FieldElement, y: FieldElement) -> bool {
        self.is_square(self.field.sub(y, x))
    }

    pub fn degree(&self) -> usize {
        self.squares.len()
    }

    /// Vertex `i` of the returned graph is the field element with index `i`.
    pub fn graph(&self) -> Graph {
        let f = &self.field;
        let adj = f
            .elements()
            .map(|x| self.squares.iter().map(|&s| f.add(x, s).index()).collect())
            .collect();
        Graph::from_adjacency(adj)
    }

    /// The map `x -> t x^{p^i} + a`, returned as images indexed by vertex.
    /// `t` must be a nonzero square; the result is checked to be an automorphism.
    pub fn automorphism(&self, t: FieldElement, i: usize, a: FieldElement) -> Result<Vec<FieldElement>> {
        let f = &self.field;
        if t.is_zero() || !self.is_square(t) {
            return Err(Error::NotASquare(f.pretty(t)));
        }
        let images: Vec<FieldElement> = f.elements().map(|x| f.add(f.mul(t, f.frobenius(x, i)), a)).collect();
        let preserves = f.elements().all(|x| {
            self.squares
                .iter()
                .all(|&s| self.is_adjacent(images[x.index()], images[f.add(x, s).index()]))
        });
        if !preserves {
            return Err(Error::Precondition("map does not preserve adjacency".into()));
        }
        Ok(images)
    }
}

/// A real number `(rational_twice + surd * sqrt(radicand)) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfSurd {
    pub rational_twice: i64,
    pub surd: i64,
    pub radicand: u64,
}

impl HalfSurd {
    pub fn value(&self) -> f64 {
        (self.rational_twice as f64 + self.surd as f64 * (self.radicand as f64).sqrt()) / 2.0
    }

    /// Exact integer value when the radicand is a perfect square and the sum is even.
    pub fn as_integer(&self) -> Option<i64> {
        let root = (self.radicand as f64).sqrt().round() as i64;
        if self.surd != 0 && (root * root) as u64 != self.radicand {
            return None;
        }
        let twice = self.rational_twice + self.surd * root;
        (twice % 2 == 0).then_some(twice / 2)
    }
}

impl fmt::Display for HalfSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let sign = if self.surd < 0 { "-" } else { "" };
        let mag = self.surd.abs();
        let surd = if mag == 1 {
            format!("{sign}sqrt({})", self.radicand)
        } else {
            format!("{sign}{mag}*sqrt({})", self.radicand)
        };
        write!(
            f,
            "({surd} {} {})/2",
            if self.rational_twice < 0 { "-" } else { "+" },
            self.rational_twice.abs()
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormEigenvalue {
    pub exact: HalfSurd,
    pub value: f64,
    pub multiplicity: usize,
}

/// The Paley spectrum from the Gauss sum evaluation: the valency `(q-1)/2` once,
/// and `((-1)^{r-1} sqrt(q) - 1)/2`, `((-1)^r sqrt(q) - 1)/2` each `(q-1)/2` times.
pub fn paley_spectrum_closed_form(field: &FiniteField) -> Result<Vec<ClosedFormEigenvalue>> {
    field.ensure_one_mod_four()?;
    let q = field.q() as i64;
    let r = field.r();
    let half = ((q - 1) / 2) as usize;
    let sign_squares = if r % 2 == 1 { 1 } else { -1 };
    let entries = [
        (
            HalfSurd {
                rational_twice: q - 1,
                surd: 0,
                radicand: q as u64,
            },
            1,
        ),
        (
            HalfSurd {
                rational_twice: -1,
                surd: sign_squares,
                radicand: q as u64,
            },
            half,
        ),
        (
            HalfSurd {
                rational_twice: -1,
                surd: -sign_squares,
                radicand: q as u64,
            },
            half,
        ),
    ];
    Ok(entries
        .into_iter()
        .map(|(exact, multiplicity)| ClosedFormEigenvalue {
            exact,
            value: exact.value(),
            multiplicity,
        })
        .collect())
}
