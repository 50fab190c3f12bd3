//! The cospectral, non-isomorphic pair of `Z/ℓ`-covers of the Paley graph on
//! `F_25 = F_5(w)`, `w^2 = 2`, with its permutation polynomial certificate.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::cospectral::{
    block_decompose_with, build_matrix_m, check_block_equations, check_condition3, eigenvalue_bijection_check,
    PermPoly, Zeta,
};
use crate::cover::{make_voltage, tau_from_map, VoltageAssignment};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::io::{field_from_json, poly_from_json, voltage_from_json};
use crate::iso::{cover_isomorphic, graph_isomorphic, IsoStatus};
use crate::spectrum::{cospectral, full_spectrum};

pub const ALPHA_JSON: &str = include_str!("../data/example25_alpha.json");
pub const BETA_JSON: &str = include_str!("../data/example25_beta.json");
pub const POLY_JSON: &str = include_str!("../data/example25_f.json");

/// Voltages on the squares of trace 1 and 2, as `((c0, c1), α, β)`.
pub const VOLTAGE_TABLE: [([u32; 2], i64, i64); 6] = [
    ([1, 0], 1, 0),
    ([3, 0], 1, 0),
    ([1, 1], 1, 1),
    ([3, 3], 0, 0),
    ([1, 4], 0, 1),
    ([3, 2], 0, 1),
];

/// The generator `w + 3` that orders the squares for the blocks below.
pub const GENERATOR: [u32; 2] = [3, 1];

/// The four blocks of the square part of `M`, multiplied by 5.
pub const SCALED_BLOCKS: [[[i64; 3]; 3]; 4] = [
    [[0, 1, 1], [0, 3, 1], [1, -1, 1]],
    [[0, 1, 3], [1, 0, 1], [2, 0, 0]],
    [[-1, -1, 1], [0, 2, -1], [1, 1, 0]],
    [[1, -1, 0], [-1, 0, -1], [1, 0, -1]],
];

/// The sum of the four blocks.
pub const BLOCK_SUM: [[i64; 3]; 3] = [[0, 0, 1], [0, 1, 0], [1, 0, 0]];

pub fn field() -> Arc<FiniteField> {
    let doc: Value = serde_json::from_str(POLY_JSON).expect("embedded JSON");
    Arc::new(field_from_json(&doc["field"]).expect("embedded field"))
}

fn from_table(field: Arc<FiniteField>, ell: u32, column: usize) -> Result<VoltageAssignment> {
    let partial: BTreeMap<FieldElement, i64> = VOLTAGE_TABLE
        .iter()
        .map(|(c, a, b)| Ok((field.element(c)?, if column == 0 { *a } else { *b })))
        .collect::<Result<_>>()?;
    make_voltage(field, ell, &partial)
}

pub fn alpha(ell: u32) -> Result<VoltageAssignment> {
    from_table(field(), ell, 0)
}

pub fn beta(ell: u32) -> Result<VoltageAssignment> {
    from_table(field(), ell, 1)
}

/// The shipped files, which fix `ℓ = 3`.
pub fn shipped_pair() -> Result<(VoltageAssignment, VoltageAssignment)> {
    let a = voltage_from_json(&serde_json::from_str(ALPHA_JSON)?)?;
    let b = voltage_from_json(&serde_json::from_str(BETA_JSON)?)?;
    Ok((a, b))
}

pub fn polynomial() -> PermPoly {
    let doc: Value = serde_json::from_str(POLY_JSON).expect("embedded JSON");
    poly_from_json(Some(field()), &doc).expect("embedded polynomial")
}

/// Swaps the `F_5^×`-orbits of `1` and `4w+1`, fixing the orbit of `w+1`, and
/// preserves the trace; as square indices.
pub fn tau() -> Vec<usize> {
    let f = field();
    let one = f.one();
    let other = f.element(&[1, 4]).expect("element");
    let orbit_of = |s: FieldElement, base: FieldElement| (1..5).find(|&c| f.mul(f.from_int(c), base) == s);
    tau_from_map(&f, |s| {
        if let Some(c) = orbit_of(s, one) {
            f.mul(f.from_int(c), other)
        } else if let Some(c) = orbit_of(s, other) {
            f.mul(f.from_int(c), one)
        } else {
            s
        }
    })
    .expect("orbits consist of squares")
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub ell: u32,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ell": self.ell,
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed})).collect::<Vec<_>>(),
            "all_passed": self.all_passed(),
        })
    }
}

/// Runs every check of the worked example for an odd prime `ℓ ≠ 5`.
pub fn verify(ell: u32) -> Result<Report> {
    if ell.is_multiple_of(2) {
        return Err(Error::InvalidEll(format!(
            "{ell} is even; the construction needs an odd prime"
        )));
    }
    let a = alpha(ell)?;
    let b = beta(ell)?;
    let f = polynomial();
    let field = a.field().clone();
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool| checks.push(Check { name, passed });

    let report = f.validate();
    push("f_bijective", report.bijective);
    push("f_odd", report.odd);
    push("f_semilinear", report.semilinear);
    push("f_of_one_is_one", f.eval(field.one()) == field.one());
    push("beta_is_alpha_through_tau", a.from_tau(&tau())? == b);

    push("eigenvalue_bijection", eigenvalue_bijection_check(&a, &b, &f)?);
    push("cospectral", cospectral(&full_spectrum(&a), &full_spectrum(&b))?);
    push("not_cover_isomorphic", cover_isomorphic(&a, &b)?.is_none());
    let verdict = graph_isomorphic(&a, &b)?;
    push("not_graph_isomorphic", verdict.status == IsoStatus::NotIsomorphic);

    let m = build_matrix_m(&f, ell)?;
    let c3 = check_condition3(&m, &a, &b)?;
    push("m_orthogonal", c3.orthogonal);
    push("m_circulant", c3.circulant);
    push("m_zero_column", m.zero_column_is_unit());
    push("m_transports_psi", c3.psi_transport);

    let blocks = block_decompose_with(&m, field.element(&GENERATOR)?)?;
    // scaled_integer_block gives 25 M
    let printed = (1..=4).all(|k| {
        blocks.scaled_integer_block(k).is_some_and(|blk| {
            blk.iter()
                .zip(&SCALED_BLOCKS[k - 1])
                .all(|(row, want)| row.iter().zip(want).all(|(&x, &w)| x == 5 * w))
        })
    });
    push("blocks_match_printed", printed);
    let sum_ok = blocks
        .sum()
        .iter()
        .zip(&BLOCK_SUM)
        .all(|(row, want)| row.iter().zip(want).all(|(c, &w)| c.to_integer() == Some(w.into())));
    push("block_sum_is_permutation", sum_ok);
    let symbolic = check_block_equations(&blocks, &a, &b, Zeta::Symbolic)?;
    push("block_equation_j1", symbolic.first() == Some(&true));
    push("block_equation_j2", symbolic.get(1) == Some(&true));
    push(
        "block_equations_trivial_character",
        check_block_equations(&blocks, &a, &b, Zeta::One)?.iter().all(|&x| x),
    );
    Ok(Report { ell, checks })
}
