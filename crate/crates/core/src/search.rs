//! Searches for cospectral covers that are not isomorphic as graphs.
//!
//! Cospectrality and isomorphism are both invariant under the `(t, σ, n)`
//! action on either voltage, so pairs are keyed by the codes of their orbit
//! representatives and each key is examined once.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::cospectral::{certify, Certificate};
use crate::cover::{check_ell, pair_count, voltage_count, voltage_from_code, VoltageAssignment};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::iso::{graph_isomorphic, IsoStatus};
use crate::spectrum::{cospectral, full_spectrum};

pub const DEFAULT_ENUM_CAP: u64 = 200_000;
pub const DEFAULT_PAIR_CAP: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    TauGuided,
}

impl SearchMode {
    pub fn name(&self) -> &'static str {
        match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::TauGuided => "tau_guided",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "tau_guided" | "tau-guided" => Ok(SearchMode::TauGuided),
            other => Err(Error::Parse(format!("unknown search mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Voltages enumerated, in code order.
    pub enum_cap: u64,
    /// Candidate pairs generated before deduplication.
    pub pair_cap: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            enum_cap: DEFAULT_ENUM_CAP,
            pair_cap: DEFAULT_PAIR_CAP,
        }
    }
}

/// Verdicts for one pair of voltages.
#[derive(Clone, Debug)]
pub struct PairResult {
    pub alpha: VoltageAssignment,
    pub beta: VoltageAssignment,
    /// Orbit representative codes, smaller first.
    pub key: (u64, u64),
    pub cospectral: bool,
    pub status: IsoStatus,
    /// The involution that produced the pair, in tau-guided mode.
    pub tau: Option<Vec<usize>>,
    pub certificate: Option<Certificate>,
}

impl PairResult {
    pub fn is_counterexample(&self) -> bool {
        self.cospectral && self.status == IsoStatus::NotIsomorphic
    }

    pub fn is_unresolved(&self) -> bool {
        self.cospectral && self.status == IsoStatus::Unknown
    }

    fn summary_json(&self) -> Value {
        json!({
            "alpha": self.alpha.code(),
            "beta": self.beta.code(),
            "cospectral": self.cospectral,
            "status": self.status.name(),
        })
    }

    pub fn to_json(&self) -> Value {
        let f = self.alpha.field();
        let mut out = json!({
            "alpha": values_json(&self.alpha),
            "beta": values_json(&self.beta),
            "key": [self.key.0, self.key.1],
            "cospectral": self.cospectral,
            "status": self.status.name(),
        });
        if let IsoStatus::Isomorphic(w) = &self.status {
            out["witness"] = w.to_json(f);
        }
        if let Some(tau) = &self.tau {
            out["tau"] = json!(tau);
        }
        out["certificate"] = self.certificate.as_ref().map_or(Value::Null, Certificate::to_json);
        out
    }
}

fn values_json(v: &VoltageAssignment) -> Value {
    let f = v.field();
    let values: Map<String, Value> = v
        .representative_values()
        .into_iter()
        .map(|(s, x)| (f.key(s), json!(x)))
        .collect();
    json!({ "code": v.code(), "values": values })
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub field: Arc<FiniteField>,
    pub ell: u32,
    pub mode: SearchMode,
    pub voltages: u64,
    /// Distinct orbit representatives met.
    pub orbits: usize,
    /// Involutions tried, in tau-guided mode.
    pub taus: u64,
    /// Every examined pair, sorted by key.
    pub pairs: Vec<PairResult>,
    /// False when a cap cut the enumeration short.
    pub complete: bool,
}

impl SearchReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &PairResult> {
        self.pairs.iter().filter(|p| p.is_counterexample())
    }

    pub fn unresolved(&self) -> impl Iterator<Item = &PairResult> {
        self.pairs.iter().filter(|p| p.is_unresolved())
    }

    pub fn contains_key(&self, key: (u64, u64)) -> bool {
        self.counterexamples().any(|p| p.key == key)
    }

    pub fn to_json(&self) -> Value {
        let count = |pred: &dyn Fn(&PairResult) -> bool| self.pairs.iter().filter(|p| pred(p)).count();
        json!({
            "field": self.field.descriptor(),
            "ell": self.ell,
            "mode": self.mode.name(),
            "voltages": self.voltages,
            "orbits": self.orbits,
            "taus": self.taus,
            "pairs_examined": self.pairs.len(),
            "cospectral_pairs": count(&|p| p.cospectral),
            "isomorphic_pairs": count(&|p| matches!(p.status, IsoStatus::Isomorphic(_))),
            "counterexamples": self.counterexamples().map(PairResult::to_json).collect::<Vec<_>>(),
            "unresolved": self.unresolved().map(PairResult::to_json).collect::<Vec<_>>(),
            "pairs": self.pairs.iter().map(PairResult::summary_json).collect::<Vec<_>>(),
            "complete": self.complete,
        })
    }
}

/// Orbit representative codes, computed once per voltage code.
struct OrbitCodes {
    field: Arc<FiniteField>,
    ell: u32,
    codes: HashMap<u64, u64>,
}

impl OrbitCodes {
    fn new(field: Arc<FiniteField>, ell: u32, voltages: &[VoltageAssignment]) -> Self {
        let codes = voltages
            .par_iter()
            .map(|v| (v.code(), v.orbit_representative().code()))
            .collect();
        OrbitCodes { field, ell, codes }
    }

    fn get(&mut self, v: &VoltageAssignment) -> u64 {
        *self
            .codes
            .entry(v.code())
            .or_insert_with(|| v.orbit_representative().code())
    }

    fn voltage(&self, code: u64) -> VoltageAssignment {
        voltage_from_code(self.field.clone(), self.ell, code).expect("code of an enumerated voltage")
    }
}

fn ordered(a: u64, b: u64) -> (u64, u64) {
    (a.min(b), a.max(b))
}

/// Unordered key of a pair, invariant under the `(t, σ, n)` action on either side.
pub fn pair_key(alpha: &VoltageAssignment, beta: &VoltageAssignment) -> (u64, u64) {
    ordered(alpha.orbit_representative().code(), beta.orbit_representative().code())
}

/// Exact verdicts for one pair, with a certificate for cospectral pairs that
/// are not isomorphic.
pub fn examine_pair(alpha: &VoltageAssignment, beta: &VoltageAssignment, key: (u64, u64)) -> Result<PairResult> {
    let is_cospectral = cospectral(&full_spectrum(alpha), &full_spectrum(beta))?;
    let status = graph_isomorphic(alpha, beta)?.status;
    let certificate = if is_cospectral && !matches!(status, IsoStatus::Isomorphic(_)) {
        certify(alpha, beta)?
    } else {
        None
    };
    Ok(PairResult {
        alpha: alpha.clone(),
        beta: beta.clone(),
        key,
        cospectral: is_cospectral,
        status,
        tau: None,
        certificate,
    })
}

fn enumerate_prefix(field: &Arc<FiniteField>, ell: u32, cap: u64) -> Result<(Vec<VoltageAssignment>, bool)> {
    field.ensure_one_mod_four()?;
    check_ell(field, ell)?;
    let total = voltage_count(field, ell).unwrap_or(u64::MAX);
    let taken = total.min(cap);
    let voltages = (1..=taken)
        .map(|code| voltage_from_code(field.clone(), ell, code))
        .collect::<Result<Vec<_>>>()?;
    Ok((voltages, taken == total))
}

pub fn search_counterexamples(
    field: Arc<FiniteField>,
    ell: u32,
    mode: SearchMode,
    budget: SearchBudget,
) -> Result<SearchReport> {
    match mode {
        SearchMode::Exhaustive => exhaustive(field, ell, budget),
        SearchMode::TauGuided => tau_guided(field, ell, budget),
    }
}

fn exhaustive(field: Arc<FiniteField>, ell: u32, budget: SearchBudget) -> Result<SearchReport> {
    let (voltages, mut complete) = enumerate_prefix(&field, ell, budget.enum_cap)?;
    let orbit_codes = OrbitCodes::new(field.clone(), ell, &voltages);
    let reps: Vec<u64> = orbit_codes
        .codes
        .values()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut keys = Vec::new();
    'outer: for (i, &a) in reps.iter().enumerate() {
        for &b in &reps[i..] {
            if keys.len() as u64 >= budget.pair_cap {
                complete = false;
                break 'outer;
            }
            keys.push((a, b));
        }
    }
    let pairs = keys
        .par_iter()
        .map(|&(a, b)| examine_pair(&orbit_codes.voltage(a), &orbit_codes.voltage(b), (a, b)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchReport {
        field,
        ell,
        mode: SearchMode::Exhaustive,
        voltages: voltages.len() as u64,
        orbits: reps.len(),
        taus: 0,
        pairs,
        complete,
    })
}

fn tau_guided(field: Arc<FiniteField>, ell: u32, budget: SearchBudget) -> Result<SearchReport> {
    let (voltages, mut complete) = enumerate_prefix(&field, ell, budget.enum_cap)?;
    let mut orbit_codes = OrbitCodes::new(field.clone(), ell, &voltages);
    let (taus, taus_complete) = involutions(&field, budget.pair_cap);
    complete &= taus_complete;
    let mut first: BTreeMap<(u64, u64), (VoltageAssignment, VoltageAssignment, Vec<usize>)> = BTreeMap::new();
    let mut generated = 0u64;
    let mut tried = 0u64;
    'outer: for tau in &taus {
        if tau.iter().enumerate().all(|(j, &t)| j == t) {
            continue;
        }
        tried += 1;
        for alpha in &voltages {
            if generated >= budget.pair_cap {
                complete = false;
                break 'outer;
            }
            generated += 1;
            let beta = alpha.from_tau(tau)?;
            let key = ordered(orbit_codes.get(alpha), orbit_codes.get(&beta));
            first.entry(key).or_insert_with(|| (alpha.clone(), beta, tau.clone()));
        }
    }
    let orbits = orbit_codes.codes.values().collect::<BTreeSet<_>>().len();
    let pairs = first
        .into_par_iter()
        .map(|(key, (alpha, beta, tau))| {
            let mut result = examine_pair(&alpha, &beta, key)?;
            result.tau = Some(tau);
            Ok(result)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchReport {
        field,
        ell,
        mode: SearchMode::TauGuided,
        voltages: voltages.len() as u64,
        orbits,
        taus: tried,
        pairs,
        complete,
    })
}

/// Trace-preserving involutions of the squares commuting with negation, as
/// square-index permutations, identity first. At most `cap` are produced; the
/// flag reports whether all were.
pub fn involutions(field: &FiniteField, cap: u64) -> (Vec<Vec<usize>>, bool) {
    let squares = field.squares();
    let half = squares.len();
    let h = half / 2;
    let mut by_trace: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (j, &s) in squares.iter().enumerate() {
        by_trace.entry(field.trace(s)).or_default().push(j);
    }
    let p = field.p();
    // each factor lists partial maps j -> τ(j) on one negation-closed part
    let mut factors: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
    let mut complete = true;
    for (&c, members) in &by_trace {
        let mirror = (p - c) % p;
        if c == 0 {
            let reps: Vec<usize> = members.iter().copied().filter(|&j| j < h).collect();
            let (list, done) = signed_pairings(&reps, h, cap);
            complete &= done;
            factors.push(list);
        } else if c < mirror {
            let (list, done) = plain_involutions(members, cap);
            complete &= done;
            let extended = list
                .into_iter()
                .map(|m| {
                    let neg = |j: usize| (j + h) % half;
                    let mut full = m.clone();
                    full.extend(m.iter().map(|&(j, t)| (neg(j), neg(t))));
                    full
                })
                .collect();
            factors.push(extended);
        }
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; factors.len()];
    loop {
        if out.len() as u64 >= cap {
            complete = false;
            break;
        }
        let mut tau = vec![0; half];
        for (f, &i) in factors.iter().zip(&idx) {
            for &(j, t) in &f[i] {
                tau[j] = t;
            }
        }
        out.push(tau);
        // odometer, last factor fastest
        let mut pos = factors.len();
        loop {
            if pos == 0 {
                return (out, complete);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < factors[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
    (out, complete)
}

/// Involutions of `members`, identity first.
fn plain_involutions(members: &[usize], cap: u64) -> (Vec<Vec<(usize, usize)>>, bool) {
    fn go(rest: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>, cap: u64) -> bool {
        if out.len() as u64 >= cap {
            return false;
        }
        let Some((&first, tail)) = rest.split_first() else {
            out.push(acc.clone());
            return true;
        };
        acc.push((first, first));
        let mut done = go(tail, acc, out, cap);
        acc.pop();
        for (i, &other) in tail.iter().enumerate() {
            let mut remaining = tail.to_vec();
            remaining.remove(i);
            acc.push((first, other));
            acc.push((other, first));
            done &= go(&remaining, acc, out, cap);
            acc.pop();
            acc.pop();
        }
        done
    }
    let mut out = Vec::new();
    let done = go(members, &mut Vec::new(), &mut out, cap);
    (out, done)
}

/// Involutions on a negation-closed set given by its representatives `reps`
/// (the other member of `j` being `j + h`), commuting with negation.
fn signed_pairings(reps: &[usize], h: usize, cap: u64) -> (Vec<Vec<(usize, usize)>>, bool) {
    fn go(
        rest: &[usize],
        h: usize,
        acc: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
        cap: u64,
    ) -> bool {
        if out.len() as u64 >= cap {
            return false;
        }
        let Some((&first, tail)) = rest.split_first() else {
            out.push(acc.clone());
            return true;
        };
        let mut done = true;
        // fixed pair: s -> s or s -> -s
        for (a, b) in [(first, first + h), (first + h, first)] {
            acc.push((first, a));
            acc.push((first + h, b));
            done &= go(tail, h, acc, out, cap);
            acc.truncate(acc.len() - 2);
        }
        for (i, &other) in tail.iter().enumerate() {
            let mut remaining = tail.to_vec();
            remaining.remove(i);
            for img in [other, other + h] {
                let neg = (img + h) % (2 * h);
                acc.extend([(first, img), (img, first), (first + h, neg), (neg, first + h)]);
                done &= go(&remaining, h, acc, out, cap);
                acc.truncate(acc.len() - 4);
            }
        }
        done
    }
    let mut out = Vec::new();
    let done = go(reps, h, &mut Vec::new(), &mut out, cap);
    (out, done)
}

/// Verdicts on every unordered pair of voltages, self-pairs included, with no
/// orbit reduction.
#[derive(Clone, Debug)]
pub struct PairCensus {
    pub voltages: u64,
    /// Unordered pairs including self-pairs.
    pub pairs: u64,
    pub cospectral: u64,
    pub isomorphic: u64,
    /// Cospectral pairs that are isomorphic, necessarily no more than `cospectral`.
    pub cospectral_isomorphic: u64,
    /// Isomorphic pairs found not cospectral; nonzero only on a defect.
    pub isomorphic_not_cospectral: u64,
    pub unresolved: u64,
    /// Codes of cospectral pairs that are not isomorphic.
    pub counterexamples: Vec<(u64, u64)>,
}

impl PairCensus {
    /// Unordered pairs of distinct voltages.
    pub fn distinct_pairs(&self) -> u64 {
        self.pairs - self.voltages
    }

    pub fn to_json(&self) -> Value {
        json!({
            "voltages": self.voltages,
            "pairs": self.pairs,
            "distinct_pairs": self.distinct_pairs(),
            "cospectral": self.cospectral,
            "isomorphic": self.isomorphic,
            "cospectral_isomorphic": self.cospectral_isomorphic,
            "isomorphic_not_cospectral": self.isomorphic_not_cospectral,
            "unresolved": self.unresolved,
            "counterexamples": self.counterexamples,
        })
    }
}

pub fn pair_census(field: Arc<FiniteField>, ell: u32, enum_cap: u64) -> Result<PairCensus> {
    let (voltages, complete) = enumerate_prefix(&field, ell, enum_cap)?;
    if !complete {
        return Err(Error::BudgetExceeded(format!(
            "{ell}^{} voltages exceed the enumeration cap {enum_cap}",
            pair_count(&field)
        )));
    }
    let spectra: Vec<_> = voltages.par_iter().map(full_spectrum).collect();
    let n = voltages.len();
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| {
                    let c = cospectral(&spectra[i], &spectra[j])?;
                    let s = graph_isomorphic(&voltages[i], &voltages[j])?.status;
                    Ok((i, j, c, s))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut census = PairCensus {
        voltages: n as u64,
        pairs: 0,
        cospectral: 0,
        isomorphic: 0,
        cospectral_isomorphic: 0,
        isomorphic_not_cospectral: 0,
        unresolved: 0,
        counterexamples: Vec::new(),
    };
    for (i, j, c, s) in rows.into_iter().flatten() {
        census.pairs += 1;
        let iso = matches!(s, IsoStatus::Isomorphic(_));
        census.cospectral += c as u64;
        census.isomorphic += iso as u64;
        census.cospectral_isomorphic += (c && iso) as u64;
        census.isomorphic_not_cospectral += (iso && !c) as u64;
        match (c, s) {
            (true, IsoStatus::NotIsomorphic) => census.counterexamples.push((voltages[i].code(), voltages[j].code())),
            (true, IsoStatus::Unknown) => census.unresolved += 1,
            _ => {}
        }
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::check_tau;

    fn field(p: u32, r: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, r, None).unwrap())
    }

    /// Brute force over all permutations of the squares.
    fn brute_involution_count(f: &FiniteField) -> usize {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let half = f.squares().len();
        perms(half).into_iter().filter(|t| check_tau(f, t).is_ok()).count()
    }

    #[test]
    fn involutions_match_brute_force() {
        for (p, r) in [(5, 1), (13, 1), (3, 2), (17, 1)] {
            let f = field(p, r);
            let (taus, complete) = involutions(&f, u64::MAX);
            assert!(complete);
            for t in &taus {
                check_tau(&f, t).unwrap();
            }
            let distinct: BTreeSet<_> = taus.iter().collect();
            assert_eq!(distinct.len(), taus.len());
            assert_eq!(taus.len(), brute_involution_count(&f), "q = {}", f.q());
            assert!(taus[0].iter().enumerate().all(|(j, &t)| j == t));
        }
    }

    #[test]
    fn involution_cap() {
        let f = field(5, 2);
        let (all, complete) = involutions(&f, u64::MAX);
        assert!(complete);
        let (some, complete) = involutions(&f, 3);
        assert!(!complete);
        assert_eq!(some[..], all[..3]);
    }

    #[test]
    fn census_counts() {
        let census = pair_census(field(13, 1), 3, 1000).unwrap();
        assert_eq!(census.voltages, 26);
        assert_eq!(census.pairs, 351);
        assert_eq!(census.distinct_pairs(), 325);
        assert!(census.counterexamples.is_empty());
        assert_eq!(census.isomorphic_not_cospectral, 0);
        assert_eq!(census.cospectral, census.cospectral_isomorphic);
        assert!(pair_census(field(13, 1), 3, 10).is_err());
    }

    #[test]
    fn exhaustive_is_deterministic_and_agrees_with_census() {
        let f = field(13, 1);
        let a = search_counterexamples(f.clone(), 3, SearchMode::Exhaustive, SearchBudget::default()).unwrap();
        let b = search_counterexamples(f, 3, SearchMode::Exhaustive, SearchBudget::default()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.complete);
        assert_eq!(a.counterexamples().count(), 0);
        let keys: Vec<_> = a.pairs.iter().map(|p| p.key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(a.pairs.len(), a.orbits * (a.orbits + 1) / 2);
    }

    #[test]
    fn budget_marks_partial_results() {
        let budget = SearchBudget {
            enum_cap: 5,
            pair_cap: DEFAULT_PAIR_CAP,
        };
        let r = search_counterexamples(field(13, 1), 3, SearchMode::Exhaustive, budget).unwrap();
        assert!(!r.complete);
        assert_eq!(r.voltages, 5);
        let budget = SearchBudget {
            enum_cap: DEFAULT_ENUM_CAP,
            pair_cap: 2,
        };
        let r = search_counterexamples(field(13, 1), 3, SearchMode::Exhaustive, budget).unwrap();
        assert!(!r.complete);
        assert_eq!(r.pairs.len(), 2);
    }

    #[test]
    fn both_modes_find_the_example_orbit() {
        let f = crate::example25::field();
        let key = pair_key(
            &crate::example25::alpha(3).unwrap(),
            &crate::example25::beta(3).unwrap(),
        );
        for mode in [SearchMode::TauGuided, SearchMode::Exhaustive] {
            let r = search_counterexamples(f.clone(), 3, mode, SearchBudget::default()).unwrap();
            assert!(r.complete);
            let found: Vec<_> = r.counterexamples().collect();
            assert_eq!(found.len(), 1, "{mode}");
            assert_eq!(found[0].key, key);
            assert!(found[0].certificate.as_ref().unwrap().checks.holds());
        }
    }

    #[test]
    fn mode_names() {
        assert_eq!("tau-guided".parse::<SearchMode>().unwrap(), SearchMode::TauGuided);
        assert_eq!("exhaustive".parse::<SearchMode>().unwrap().to_string(), "exhaustive");
        assert!("random".parse::<SearchMode>().is_err());
    }
}
