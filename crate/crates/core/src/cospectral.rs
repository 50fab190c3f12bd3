//! Cospectrality certificates from odd permutation polynomials.
//!
//! An odd permutation polynomial `f` with `θ^α_{a,k} = θ^β_{f(a),k}` gives the
//! matrix `q M_{x,y} = Σ_a ζ_p^{tr(f(a) y - a x)}`, which is orthogonal,
//! `F_q`-circulant after conjugating translations, and carries `ψ^β` to `ψ^α`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::cover::VoltageAssignment;
use crate::cyclotomic::CycSum;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::spectrum::{full_spectrum, CoverSpectrum};

/// A polynomial over `F_q` of degree below `q`, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermPoly {
    field: Arc<FiniteField>,
    coeffs: BTreeMap<u64, FieldElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyReport {
    pub bijective: bool,
    pub odd: bool,
    /// `f(a x) = a f(x)` for all `a` in the prime field.
    pub semilinear: bool,
}

impl PermPoly {
    pub fn new(field: Arc<FiniteField>, coeffs: BTreeMap<u64, FieldElement>) -> Result<Self> {
        if let Some((&e, _)) = coeffs.iter().find(|(&e, _)| e >= field.q() as u64) {
            return Err(Error::InvalidPolynomial(format!(
                "exponent {e} is not below q = {}",
                field.q()
            )));
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(PermPoly { field, coeffs })
    }

    pub fn identity(field: Arc<FiniteField>) -> Self {
        PermPoly {
            field,
            coeffs: [(1, FieldElement::ONE)].into_iter().collect(),
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// Nonzero coefficients by exponent.
    pub fn coeffs(&self) -> &BTreeMap<u64, FieldElement> {
        &self.coeffs
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs
            .iter()
            .fold(FieldElement::ZERO, |acc, (&e, &c)| f.add(acc, f.mul(c, f.pow(x, e))))
    }

    /// Values at every element, indexed by element index.
    pub fn values(&self) -> Vec<FieldElement> {
        self.field.elements().map(|x| self.eval(x)).collect()
    }

    pub fn validate(&self) -> PolyReport {
        let f = &self.field;
        let values = self.values();
        let mut seen = vec![false; values.len()];
        let mut bijective = true;
        for v in &values {
            bijective &= !std::mem::replace(&mut seen[v.index()], true);
        }
        let odd = f
            .elements()
            .all(|x| values[f.neg(x).index()] == f.neg(values[x.index()]));
        let semilinear = (1..f.p() as i64).all(|a| {
            let a = f.from_int(a);
            f.elements()
                .all(|x| values[f.mul(a, x).index()] == f.mul(a, values[x.index()]))
        });
        PolyReport {
            bijective,
            odd,
            semilinear,
        }
    }

    fn ensure_odd_permutation(&self) -> Result<()> {
        let report = self.validate();
        if !report.bijective || !report.odd {
            return Err(Error::InvalidPolynomial(
                "expected an odd permutation polynomial".into(),
            ));
        }
        Ok(())
    }

    /// The unique polynomial of degree below `q` taking `values[x.index()]` at `x`.
    pub fn interpolate(field: Arc<FiniteField>, values: &[FieldElement]) -> Result<Self> {
        let q = field.q() as u64;
        if values.len() as u64 != q {
            return Err(Error::InvalidPolynomial(format!(
                "expected {q} values, got {}",
                values.len()
            )));
        }
        let f = &field;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, values[0]);
        // c_j = -Σ_a f(a) a^{q-1-j} for 1 <= j <= q-1, reading 0^0 as 1
        let nonzero: Vec<(FieldElement, FieldElement)> = f.elements().skip(1).map(|a| (a, values[a.index()])).collect();
        for j in 1..q {
            let init = if j == q - 1 { values[0] } else { FieldElement::ZERO };
            let s = nonzero
                .iter()
                .fold(init, |acc, &(a, v)| f.add(acc, f.mul(v, f.pow(a, q - 1 - j))));
            coeffs.insert(j, f.neg(s));
        }
        let poly = Self::new(field.clone(), coeffs)?;
        debug_assert_eq!(poly.values(), values);
        Ok(poly)
    }

    /// Interpolates a uniformly random odd bijection.
    pub fn random_odd<R: Rng + ?Sized>(field: Arc<FiniteField>, rng: &mut R) -> Result<Self> {
        let f = &field;
        let reps: Vec<FieldElement> = f.elements().filter(|&x| !x.is_zero() && x < f.neg(x)).collect();
        let mut images = reps.clone();
        images.shuffle(rng);
        let mut values = vec![FieldElement::ZERO; f.q() as usize];
        for (&a, &b) in reps.iter().zip(&images) {
            let b = if rng.gen_bool(0.5) { b } else { f.neg(b) };
            values[a.index()] = b;
            values[f.neg(a).index()] = f.neg(b);
        }
        Self::interpolate(field.clone(), &values)
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(e, &c)| (e.to_string(), Value::String(self.field.key(c))))
            .collect();
        json!({ "coeffs": coeffs })
    }

    pub fn from_json(field: Arc<FiniteField>, value: &Value) -> Result<Self> {
        let map = value
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("polynomial needs a \"coeffs\" object".into()))?;
        let mut coeffs = BTreeMap::new();
        for (e, c) in map {
            let e: u64 = e
                .parse()
                .map_err(|_| Error::Parse(format!("exponent {e:?} is not an integer")))?;
            let c = c
                .as_str()
                .ok_or_else(|| Error::Parse("coefficients must be element keys".into()))?;
            coeffs.insert(e, field.parse_key(c)?);
        }
        Self::new(field, coeffs)
    }
}

/// Checks `θ^α_{a,k} = θ^β_{f(a),k}` for all labels.
pub fn eigenvalue_bijection_check(alpha: &VoltageAssignment, beta: &VoltageAssignment, f: &PermPoly) -> Result<bool> {
    alpha.ensure_same_parameters(beta)?;
    f.ensure_odd_permutation()?;
    Ok(labels_correspond(
        &full_spectrum(alpha),
        &full_spectrum(beta),
        &f.values(),
    ))
}

fn labels_correspond(sa: &CoverSpectrum, sb: &CoverSpectrum, values: &[FieldElement]) -> bool {
    sa.labeled().all(|(a, k, th)| sb.get(values[a.index()], k) == th)
}

/// `q M` stored as term counts: entry `(x, y)` is `Σ_u counts[u] ζ_p^u`.
#[derive(Clone, Debug)]
pub struct MMatrix {
    field: Arc<FiniteField>,
    ell: u32,
    counts: Vec<u32>,
}

pub fn build_matrix_m(f: &PermPoly, ell: u32) -> Result<MMatrix> {
    f.ensure_odd_permutation()?;
    let field = f.field().clone();
    crate::cover::check_ell(&field, ell)?;
    let (p, q) = (field.p() as usize, field.q() as usize);
    let fa = f.values();
    // tr_tab[a][y] = tr(a y)
    let tr_tab: Vec<Vec<u32>> = field
        .elements()
        .map(|a| field.elements().map(|y| field.trace(field.mul(a, y))).collect())
        .collect();
    let mut counts = vec![0u32; q * q * p];
    for x in 0..q {
        for y in 0..q {
            let cell = &mut counts[(x * q + y) * p..(x * q + y + 1) * p];
            for a in 0..q {
                let u = (tr_tab[fa[a].index()][y] as usize + p - tr_tab[a][x] as usize) % p;
                cell[u] += 1;
            }
        }
    }
    Ok(MMatrix { field, ell, counts })
}

impl MMatrix {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    fn raw(&self, x: usize, y: usize) -> &[u32] {
        let (p, q) = (self.field.p() as usize, self.field.q() as usize);
        &self.counts[(x * q + y) * p..(x * q + y + 1) * p]
    }

    /// Coordinates of `q M_{x,y}` in the basis `1, ζ_p, ..., ζ_p^{p-2}`.
    fn canonical(&self, x: usize, y: usize) -> Vec<i64> {
        reduce(&self.raw(x, y).iter().map(|&c| c as i64).collect::<Vec<_>>())
    }

    /// `q M_{x,y}`.
    pub fn scaled_entry(&self, x: FieldElement, y: FieldElement) -> CycSum {
        let p = self.field.p();
        let mut counts = crate::cyclotomic::ExponentCounts::new(p, self.ell);
        for (u, &c) in self.raw(x.index(), y.index()).iter().enumerate() {
            counts.add(u as u32, 0, c as i64);
        }
        CycSum::from_exponent_counts(&counts)
    }

    /// `M_{x,y}`, with denominator dividing `q`.
    pub fn entry(&self, x: FieldElement, y: FieldElement) -> CycSum {
        self.scaled_entry(x, y).div_int(self.field.q() as i64)
    }

    /// `(qM)(qM)^T = q^2 I`.
    pub fn is_orthogonal(&self) -> bool {
        let q = self.field.q() as usize;
        let q2 = (q * q) as i64;
        (0..q).all(|x| {
            (0..q).all(|y| {
                let mut acc = vec![0i64; self.field.p() as usize];
                for z in 0..q {
                    convolve_into(&mut acc, self.raw(x, z), self.raw(y, z));
                }
                let expect = if x == y { q2 } else { 0 };
                reduce(&acc)
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| c == if i == 0 { expect } else { 0 })
            })
        })
    }

    /// `Σ_z (qM)_{x,z} (qM)_{y,z+t} = q (qM)_{y-x,t}` for all `x, y, t`, the
    /// exact form of `M R^t M^T` being the `F_q`-circulant with defining
    /// vector the `t`-column of `M`.
    pub fn is_circulant(&self) -> bool {
        let f = &self.field;
        let q = f.q() as usize;
        let p = f.p() as usize;
        let add = |a: usize, b: usize| f.add(FieldElement::from_index(a), FieldElement::from_index(b)).index();
        let sub = |a: usize, b: usize| f.sub(FieldElement::from_index(a), FieldElement::from_index(b)).index();
        let shifted: Vec<Vec<usize>> = (0..q).map(|t| (0..q).map(|z| add(z, t)).collect()).collect();
        let canon: Vec<Vec<i64>> = (0..q * q).map(|i| self.canonical(i / q, i % q)).collect();
        (0..q).all(|t| {
            (0..q).all(|x| {
                (0..q).all(|y| {
                    let mut acc = vec![0i64; p];
                    for (z, &zt) in shifted[t].iter().enumerate() {
                        convolve_into(&mut acc, self.raw(x, z), self.raw(y, zt));
                    }
                    let target = &canon[sub(y, x) * q + t];
                    reduce(&acc).iter().zip(target).all(|(&a, &b)| a == q as i64 * b)
                })
            })
        })
    }

    /// The column `t = 0` is `q` at `x = 0` and zero elsewhere.
    pub fn zero_column_is_unit(&self) -> bool {
        let q = self.field.q() as usize;
        (0..q).all(|x| {
            let c = self.canonical(x, 0);
            c.iter()
                .enumerate()
                .all(|(i, &v)| v == if x == 0 && i == 0 { q as i64 } else { 0 })
        })
    }

    /// `w_c = q M v_c^β - q v_c^α` where `v_c^γ` indicates the squares with voltage `c`.
    fn transport_vectors(&self, alpha: &VoltageAssignment, beta: &VoltageAssignment) -> Vec<Vec<Vec<i64>>> {
        let f = &self.field;
        let (q, p) = (f.q() as usize, f.p() as usize);
        let ell = alpha.ell() as usize;
        let mut w = vec![vec![vec![0i64; p]; q]; ell];
        for (y, c) in beta.iter() {
            for (x, row) in w[c as usize].iter_mut().enumerate() {
                for (u, &n) in self.raw(x, y.index()).iter().enumerate() {
                    row[u] += n as i64;
                }
            }
        }
        for (x, c) in alpha.iter() {
            w[c as usize][x.index()][0] -= q as i64;
        }
        w.into_iter()
            .map(|vec| vec.iter().map(|e| reduce(e)).collect())
            .collect()
    }

    /// `M ψ^β = ψ^α` for every nontrivial character of `Z/ℓ` at once: all `w_c` agree.
    pub fn transports(&self, alpha: &VoltageAssignment, beta: &VoltageAssignment) -> Result<bool> {
        alpha.ensure_same_parameters(beta)?;
        if **alpha.field() != *self.field {
            return Err(Error::ParameterMismatch(
                "matrix and voltages live over different fields".into(),
            ));
        }
        let w = self.transport_vectors(alpha, beta);
        Ok(w.windows(2).all(|pair| pair[0] == pair[1]))
    }
}

fn convolve_into(acc: &mut [i64], a: &[u32], b: &[u32]) {
    let p = acc.len();
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[(i + j) % p] += x as i64 * y as i64;
        }
    }
}

/// Raw `ζ_p` exponent counts to basis coordinates `1, ..., ζ_p^{p-2}`.
fn reduce(raw: &[i64]) -> Vec<i64> {
    let last = raw[raw.len() - 1];
    raw[..raw.len() - 1].iter().map(|&c| c - last).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Condition3 {
    pub orthogonal: bool,
    pub circulant: bool,
    pub psi_transport: bool,
}

impl Condition3 {
    pub fn holds(&self) -> bool {
        self.orthogonal && self.circulant && self.psi_transport
    }

    pub fn to_json(&self) -> Value {
        json!({
            "orthogonal": self.orthogonal,
            "circulant": self.circulant,
            "psi_transport": self.psi_transport,
        })
    }
}

pub fn check_condition3(m: &MMatrix, alpha: &VoltageAssignment, beta: &VoltageAssignment) -> Result<Condition3> {
    Ok(Condition3 {
        psi_transport: m.transports(alpha, beta)?,
        orthogonal: m.is_orthogonal(),
        circulant: m.is_circulant(),
    })
}

/// The square-by-square part of `M` cut into the `p - 1` blocks of its
/// block-circulant form, squares ordered by even powers of the generator.
#[derive(Clone, Debug)]
pub struct Blocks {
    field: Arc<FiniteField>,
    size: usize,
    /// squares as `g^{2i}`
    order: Vec<FieldElement>,
    /// `blocks[k][i][j] = M_{g^{2i}, g^{2(k b + j)}}`
    blocks: Vec<Vec<Vec<CycSum>>>,
}

/// Blocks with respect to the field's own generator.
pub fn block_decompose(m: &MMatrix) -> Result<Blocks> {
    let g = m.field().exp(1);
    block_decompose_with(m, g)
}

/// Blocks with squares ordered by even powers of `generator`.
pub fn block_decompose_with(m: &MMatrix, generator: FieldElement) -> Result<Blocks> {
    let f = m.field().clone();
    let (p, q) = (f.p() as usize, f.q() as usize);
    let is_generator = f
        .log(generator)
        .is_some_and(|e| num_integer::gcd(e as u64, q as u64 - 1) == 1);
    if !is_generator {
        return Err(Error::Precondition(format!(
            "{} does not generate the multiplicative group",
            f.key(generator)
        )));
    }
    if !f.r().is_multiple_of(2) {
        return Err(Error::Precondition("block form needs an even extension degree".into()));
    }
    for a in 1..p as i64 {
        let a = f.from_int(a);
        for x in f.elements() {
            for y in f.elements() {
                if m.raw(f.mul(a, x).index(), f.mul(a, y).index()) != m.raw(x.index(), y.index()) {
                    return Err(Error::Precondition(
                        "matrix is not invariant under prime field scalars".into(),
                    ));
                }
            }
        }
    }
    let half = (q - 1) / 2;
    let b = half / (p - 1);
    let g2 = f.mul(generator, generator);
    let squares: Vec<FieldElement> = std::iter::successors(Some(f.one()), |&s| Some(f.mul(s, g2)))
        .take(half)
        .collect();
    let tilde = |i: usize, j: usize| m.raw(squares[i].index(), squares[j].index());
    for rb in 0..p - 1 {
        for cb in 0..p - 1 {
            let k = (cb + p - 1 - rb) % (p - 1);
            for i in 0..b {
                for j in 0..b {
                    if tilde(rb * b + i, cb * b + j) != tilde(i, k * b + j) {
                        return Err(Error::Precondition("square part is not block circulant".into()));
                    }
                }
            }
        }
    }
    let blocks = (0..p - 1)
        .map(|k| {
            (0..b)
                .map(|i| (0..b).map(|j| m.entry(squares[i], squares[k * b + j])).collect())
                .collect()
        })
        .collect();
    Ok(Blocks {
        field: f,
        size: b,
        order: squares,
        blocks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Zeta {
    /// a formal primitive `ℓ`-th root of unity
    Symbolic,
    /// the trivial character
    One,
}

impl Blocks {
    pub fn size(&self) -> usize {
        self.size
    }

    /// The squares in block order.
    pub fn order(&self) -> &[FieldElement] {
        &self.order
    }

    /// Block `k` for `k = 1, ..., p - 1`.
    pub fn block(&self, k: usize) -> &[Vec<CycSum>] {
        &self.blocks[k - 1]
    }

    /// `q M^{[k]}` as integers, when all its entries are rational.
    pub fn scaled_integer_block(&self, k: usize) -> Option<Vec<Vec<i64>>> {
        let q = self.field.q() as i64;
        self.block(k)
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        let n = c.scale(q).to_integer()?;
                        i64::try_from(n).ok()
                    })
                    .collect()
            })
            .collect()
    }

    /// `Σ_k M^{[k]}`.
    pub fn sum(&self) -> Vec<Vec<CycSum>> {
        (0..self.size)
            .map(|i| {
                (0..self.size)
                    .map(|j| {
                        let first = self.blocks[0][i][j].clone();
                        self.blocks[1..].iter().fold(first, |acc, b| &acc + &b[i][j])
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.blocks
                .iter()
                .map(|b| {
                    Value::Array(
                        b.iter()
                            .map(|row| Value::Array(row.iter().map(CycSum::to_json).collect()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Checks `Σ_{i=1}^{p-1} M^{[i]} ψ^β_{[i+j-1]} = ψ^α_{[j]}` for `j = 1, ..., (p-1)/2`,
/// returning one flag per `j`.
pub fn check_block_equations(
    blocks: &Blocks,
    alpha: &VoltageAssignment,
    beta: &VoltageAssignment,
    zeta: Zeta,
) -> Result<Vec<bool>> {
    alpha.ensure_same_parameters(beta)?;
    let f = &blocks.field;
    if **alpha.field() != **f {
        return Err(Error::ParameterMismatch(
            "blocks and voltages live over different fields".into(),
        ));
    }
    let p = f.p() as usize;
    let ell = alpha.ell();
    let entry_ell = blocks.blocks[0][0][0].ell();
    if entry_ell != ell {
        return Err(Error::ParameterMismatch(format!(
            "blocks were built for ell = {entry_ell}, voltages use {ell}"
        )));
    }
    let b = blocks.size;
    let psi = |gamma: &VoltageAssignment, block: usize| -> Vec<CycSum> {
        (0..b)
            .map(|i| match zeta {
                Zeta::Symbolic => {
                    let v = gamma.get(blocks.order[block * b + i]).expect("squares carry voltages");
                    CycSum::monomial(f.p(), ell, 0, v)
                }
                Zeta::One => CycSum::one(f.p(), ell),
            })
            .collect()
    };
    let psi_beta: Vec<Vec<CycSum>> = (0..p - 1).map(|blk| psi(beta, blk)).collect();
    Ok((0..(p - 1) / 2)
        .map(|j| {
            let target = psi(alpha, j);
            (0..b).all(|row| {
                let terms = (0..p - 1).flat_map(|i| {
                    let vec = &psi_beta[(i + j) % (p - 1)];
                    blocks.blocks[i][row].iter().zip(vec)
                });
                CycSum::dot(f.p(), ell, terms) == target[row]
            })
        })
        .collect())
}

/// Builds an odd bijection `f` with `θ^α_{a,k} = θ^β_{f(a),k}` by matching
/// labels with equal eigenvalue signatures `(θ_{a,k})_k`, pairing elements in
/// element order and setting `f(-a) = -f(a)`. Returns `None` when the signature
/// classes do not match up.
pub fn derive_bijection(alpha: &VoltageAssignment, beta: &VoltageAssignment) -> Result<Option<PermPoly>> {
    alpha.ensure_same_parameters(beta)?;
    let sa = full_spectrum(alpha);
    let sb = full_spectrum(beta);
    Ok(derive_from_spectra(&sa, &sb)
        .map(|values| PermPoly::interpolate(alpha.field().clone(), &values).expect("a full value table")))
}

fn derive_from_spectra(sa: &CoverSpectrum, sb: &CoverSpectrum) -> Option<Vec<FieldElement>> {
    let f = sa.field();
    let ell = sa.ell();
    let signature =
        |s: &CoverSpectrum, a: FieldElement| -> Vec<CycSum> { (0..ell).map(|k| s.get(a, k).clone()).collect() };
    let classes = |s: &CoverSpectrum| {
        let mut map: BTreeMap<Vec<CycSum>, Vec<FieldElement>> = BTreeMap::new();
        for a in f.elements().skip(1) {
            map.entry(signature(s, a)).or_default().push(a);
        }
        map
    };
    if signature(sa, f.zero()) != signature(sb, f.zero()) {
        return None;
    }
    let ca = classes(sa);
    let cb = classes(sb);
    let mut values = vec![FieldElement::ZERO; f.q() as usize];
    for (sig, members) in &ca {
        let targets = cb.get(sig)?;
        if targets.len() != members.len() {
            return None;
        }
        let mirror: Vec<CycSum> = (0..ell as usize)
            .map(|k| sig[(ell as usize - k) % ell as usize].clone())
            .collect();
        if mirror == *sig {
            let reps =
                |v: &[FieldElement]| -> Vec<FieldElement> { v.iter().copied().filter(|&x| x < f.neg(x)).collect() };
            for (a, b) in reps(members).into_iter().zip(reps(targets)) {
                values[a.index()] = b;
                values[f.neg(a).index()] = f.neg(b);
            }
        } else if *sig < mirror {
            for (&a, &b) in members.iter().zip(targets) {
                values[a.index()] = b;
                values[f.neg(a).index()] = f.neg(b);
            }
        }
    }
    labels_correspond(sa, sb, &values).then_some(values)
}

/// An odd permutation polynomial with the checks it passed.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub f: PermPoly,
    pub blocks: Option<Blocks>,
    pub checks: Condition3,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let mut out = json!({ "f": self.f.to_json() });
        if let Some(b) = &self.blocks {
            out["blocks"] = b.to_json();
        }
        out["checks"] = self.checks.to_json();
        out
    }
}

/// Derives `f` for the pair and runs the matrix checks; `None` when no odd
/// bijection matches the labeled spectra.
pub fn certify(alpha: &VoltageAssignment, beta: &VoltageAssignment) -> Result<Option<Certificate>> {
    let Some(f) = derive_bijection(alpha, beta)? else {
        return Ok(None);
    };
    certify_with(alpha, beta, f).map(Some)
}

pub fn certify_with(alpha: &VoltageAssignment, beta: &VoltageAssignment, f: PermPoly) -> Result<Certificate> {
    let m = build_matrix_m(&f, alpha.ell())?;
    let checks = check_condition3(&m, alpha, beta)?;
    let blocks = if f.field().r().is_multiple_of(2) && f.validate().semilinear {
        Some(block_decompose(&m)?)
    } else {
        None
    };
    Ok(Certificate { f, blocks, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::enumerate_voltages;
    use crate::spectrum::cospectral;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(p: u32, r: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, r, None).unwrap())
    }

    #[test]
    fn identity_polynomial() {
        let f = field(5, 2);
        let id = PermPoly::identity(f.clone());
        assert_eq!(
            id.validate(),
            PolyReport {
                bijective: true,
                odd: true,
                semilinear: true
            }
        );
        let m = build_matrix_m(&id, 3).unwrap();
        for x in f.elements() {
            for y in f.elements() {
                let expect = if x == y { 25 } else { 0 };
                assert_eq!(m.scaled_entry(x, y), CycSum::from_int(5, 3, expect));
            }
        }
        assert!(m.is_orthogonal() && m.is_circulant() && m.zero_column_is_unit());
        let alpha = VoltageAssignment::random(f.clone(), 3, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert!(check_condition3(&m, &alpha, &alpha).unwrap().holds());
        assert!(eigenvalue_bijection_check(&alpha, &alpha, &id).unwrap());
        let blocks = block_decompose(&m).unwrap();
        assert_eq!(
            check_block_equations(&blocks, &alpha, &alpha, Zeta::Symbolic).unwrap(),
            vec![true, true]
        );
        let sum = blocks.sum();
        for (i, row) in sum.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                assert_eq!(c.to_integer().unwrap(), (i == j).into());
            }
        }
    }

    #[test]
    fn squaring_is_not_a_permutation() {
        let f = field(13, 1);
        let sq = PermPoly::new(f.clone(), [(2, FieldElement::ONE)].into_iter().collect()).unwrap();
        assert!(!sq.validate().bijective);
        assert!(build_matrix_m(&sq, 3).is_err());
        assert!(PermPoly::new(f, [(13, FieldElement::ONE)].into_iter().collect()).is_err());
    }

    #[test]
    fn random_odd_polynomials_are_orthogonal_and_circulant() {
        let f = field(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..3 {
            let poly = PermPoly::random_odd(f.clone(), &mut rng).unwrap();
            let report = poly.validate();
            assert!(report.bijective && report.odd);
            let m = build_matrix_m(&poly, 3).unwrap();
            assert!(m.is_orthogonal());
            assert!(m.is_circulant());
            assert!(m.zero_column_is_unit());
        }
        let f13 = field(13, 1);
        let poly = PermPoly::random_odd(f13.clone(), &mut rng).unwrap();
        let back = PermPoly::from_json(f13, &poly.to_json()).unwrap();
        assert_eq!(back, poly);
    }

    #[test]
    fn interpolation_reproduces_values() {
        let f = field(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let values: Vec<FieldElement> = (0..9).map(|_| FieldElement::from_index(rng.gen_range(0..9))).collect();
        assert_eq!(PermPoly::interpolate(f, &values).unwrap().values(), values);
    }

    #[test]
    fn derived_bijections_certify_cospectral_pairs() {
        let f = field(13, 1);
        let all: Vec<_> = enumerate_voltages(f.clone(), 3, 100).unwrap().collect();
        let spectra: Vec<_> = all.iter().map(full_spectrum).collect();
        let mut certified = 0;
        for i in 0..all.len() {
            for j in i..all.len() {
                let derived = derive_from_spectra(&spectra[i], &spectra[j]);
                assert_eq!(derived.is_some(), cospectral(&spectra[i], &spectra[j]).unwrap());
                if derived.is_some() && certified < 5 {
                    certified += 1;
                    let cert = certify(&all[i], &all[j]).unwrap().unwrap();
                    assert!(cert.checks.holds());
                    assert!(eigenvalue_bijection_check(&all[i], &all[j], &cert.f).unwrap());
                }
            }
        }
        assert!(certified > 0);
    }

    #[test]
    fn transport_fails_for_unrelated_pair() {
        let f = field(13, 1);
        let alpha = VoltageAssignment::from_pair_values(f.clone(), 3, &[1, 0, 0]).unwrap();
        let beta = VoltageAssignment::from_pair_values(f.clone(), 3, &[1, 1, 0]).unwrap();
        let m = build_matrix_m(&PermPoly::identity(f), 3).unwrap();
        assert!(!m.transports(&alpha, &beta).unwrap());
        assert!(derive_bijection(&alpha, &beta).unwrap().is_none());
    }
}
