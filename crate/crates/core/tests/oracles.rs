//! Independent reference computations checked against the library.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use num_complex::Complex64;
use paley_covers::cospectral::{
    build_matrix_m, check_condition3, derive_bijection, eigenvalue_bijection_check, PermPoly,
};
use paley_covers::cover::{build_cover, enumerate_voltages, tau_from_map, VoltageAssignment};
use paley_covers::example25;
use paley_covers::field::{FieldElement, FiniteField};
use paley_covers::iso::cover_isomorphic;
use paley_covers::paley::build_paley;
use paley_covers::spectrum::{cospectral, full_spectrum, numeric_spectrum, theta};
use paley_covers::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(p: u32, r: u32) -> Arc<FiniteField> {
    Arc::new(FiniteField::new(p, r, None).unwrap())
}

/// Pairs `(c0, c1)` for `c0 + c1 w` with `w^2 = d`, or plain residues when `r = 1`.
struct NaiveField {
    p: u32,
    r: u32,
    d: u32,
}

impl NaiveField {
    fn mul(&self, a: (u32, u32), b: (u32, u32)) -> (u32, u32) {
        let p = self.p;
        ((a.0 * b.0 + self.d * a.1 * b.1) % p, (a.0 * b.1 + a.1 * b.0) % p)
    }

    fn elements(&self) -> Vec<(u32, u32)> {
        let hi = if self.r == 2 { self.p } else { 1 };
        (0..hi).flat_map(|c1| (0..self.p).map(move |c0| (c0, c1))).collect()
    }

    fn squares(&self) -> BTreeSet<(u32, u32)> {
        self.elements()
            .into_iter()
            .filter(|&x| x != (0, 0))
            .map(|x| self.mul(x, x))
            .collect()
    }

    /// `x + x^p`; for `r = 2` the conjugate of `w` is `-w`, so the trace is `2 c0`.
    fn trace(&self, x: (u32, u32)) -> u32 {
        if self.r == 1 {
            x.0
        } else {
            (2 * x.0) % self.p
        }
    }
}

fn lib_pair(f: &FiniteField, x: FieldElement) -> (u32, u32) {
    let c = f.coeffs(x);
    (c[0], c.get(1).copied().unwrap_or(0))
}

#[test]
fn squares_and_traces_match_naive_model() {
    for (p, r, d) in [(13, 1, 0), (5, 2, 2), (3, 2, 2), (7, 2, 3)] {
        let f = field(p, r);
        assert_eq!(f.modulus()[0], (p - d % p) % p, "modulus w^2 = {d}");
        let naive = NaiveField { p, r, d };
        let lib: BTreeSet<_> = f.squares().into_iter().map(|s| lib_pair(&f, s)).collect();
        assert_eq!(lib, naive.squares(), "q = {}", f.q());
        for x in f.elements() {
            assert_eq!(f.trace(x), naive.trace(lib_pair(&f, x)));
        }
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(lib_pair(&f, f.mul(a, b)), naive.mul(lib_pair(&f, a), lib_pair(&f, b)));
            }
        }
    }
}

#[test]
fn frozen_square_sets_and_generators() {
    let f13 = field(13, 1);
    let sq: BTreeSet<u32> = f13.squares().into_iter().map(|s| f13.coeffs(s)[0]).collect();
    assert_eq!(sq, BTreeSet::from([1, 3, 4, 9, 10, 12]));
    assert_eq!(f13.coeffs(f13.multiplicative_generator()), vec![2]);
    let f5 = field(5, 1);
    assert_eq!(f5.coeffs(f5.multiplicative_generator()), vec![2]);

    let f25 = field(5, 2);
    let g = f25.multiplicative_generator();
    assert_eq!(f25.key(g), "3,1");
    assert_eq!(f25.order(g), 24);
    let w = f25.element(&[0, 1]).unwrap();
    assert_eq!(f25.pow(w, 12), f25.from_int(-1));
    let paley = build_paley(f25.clone()).unwrap();
    assert!(matches!(
        paley.automorphism(w, 0, f25.zero()),
        Err(Error::NotASquare(_))
    ));
}

#[test]
fn reducible_modulus_is_rejected() {
    // T^2 + 1 has the roots 2 and 3 over F_5
    assert!(matches!(
        FiniteField::new(5, 2, Some(vec![1, 0, 1])),
        Err(Error::ReducibleModulus(_))
    ));
}

#[test]
fn paley_13_spectrum() {
    let f = field(13, 1);
    let g = build_paley(f).unwrap().graph();
    let ev = paley_covers::spectrum::numeric_graph_spectrum(&g, 100).unwrap();
    let (lo, hi) = ((-1.0 - 13f64.sqrt()) / 2.0, (-1.0 + 13f64.sqrt()) / 2.0);
    assert!((lo - -2.302776).abs() < 1e-6 && (hi - 1.302776).abs() < 1e-6);
    assert_eq!(ev.iter().filter(|&&x| (x - lo).abs() < 1e-9).count(), 6);
    assert_eq!(ev.iter().filter(|&&x| (x - hi).abs() < 1e-9).count(), 6);
    assert!((ev[12] - 6.0).abs() < 1e-9);
}

/// `Σ_s ζ_p^{tr(a s)} ζ_ℓ^{k α(s)}` in floating point.
fn numeric_theta(alpha: &VoltageAssignment, a: FieldElement, k: u32) -> Complex64 {
    let f = alpha.field();
    let tau = std::f64::consts::TAU;
    alpha
        .iter()
        .map(|(s, v)| {
            let phase = f.trace(f.mul(a, s)) as f64 / f.p() as f64 + (k * v) as f64 / alpha.ell() as f64;
            Complex64::from_polar(1.0, tau * phase)
        })
        .sum()
}

#[test]
fn eigenvalues_match_character_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cases = vec![
        example25::alpha(3).unwrap(),
        VoltageAssignment::random(field(13, 1), 5, &mut rng).unwrap(),
        VoltageAssignment::random(field(3, 2), 7, &mut rng).unwrap(),
    ];
    for alpha in cases {
        let f = alpha.field();
        for a in f.elements() {
            for k in 0..alpha.ell() {
                let exact = theta(&alpha, a, k).embed_complex();
                assert!((exact - numeric_theta(&alpha, a, k)).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn frozen_example_eigenvalue() {
    let alpha = example25::alpha(3).unwrap();
    let f = alpha.field();
    let t = theta(&alpha, f.zero(), 1);
    assert_eq!(t.to_integer().map(|n| n.to_string()), Some("3".into()));
    assert_eq!(
        theta(&alpha, f.zero(), 0).to_integer().map(|n| n.to_string()),
        Some("12".into())
    );
}

#[test]
fn dense_eigensolver_agrees_with_exact_values() {
    let alpha = example25::alpha(3).unwrap();
    let exact = full_spectrum(&alpha).sorted_floats();
    let numeric = numeric_spectrum(&build_cover(&alpha), 1000).unwrap();
    let dev = exact
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(dev < 1e-12, "deviation {dev:e}");
}

#[test]
fn hand_built_cycle_cover() {
    // over F_5 the Paley graph is the 5-cycle; voltage 1 on the step +1 winds it once
    let f = field(5, 1);
    let alpha = VoltageAssignment::from_pair_values(f.clone(), 3, &[1]).unwrap();
    let cover = build_cover(&alpha);
    let g = cover.graph();
    assert_eq!(g.n(), 15);
    assert_eq!(g.edge_count(), 15);
    assert!((0..15).all(|v| g.degree(v) == 2));
    // breadth-first search from one vertex reaches all 15: a single 15-cycle
    let mut seen = [false; 15];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    assert!(seen.iter().all(|&s| s));
}

#[test]
fn frozen_voltage_counts() {
    assert_eq!(enumerate_voltages(field(13, 1), 3, 1000).unwrap().count(), 26);
    assert_eq!(enumerate_voltages(field(3, 2), 5, 1000).unwrap().count(), 24);
}

#[test]
fn negative_controls() {
    let f = example25::field();
    let alpha = example25::alpha(3).unwrap();
    let beta = example25::beta(3).unwrap();
    let ones = VoltageAssignment::from_pair_values(f.clone(), 3, &[1; 6]).unwrap();
    assert!(!cospectral(&full_spectrum(&ones), &full_spectrum(&alpha)).unwrap());

    let identity = PermPoly::identity(f.clone());
    assert!(!eigenvalue_bijection_check(&alpha, &beta, &identity).unwrap());
    assert!(eigenvalue_bijection_check(&alpha, &beta, &example25::polynomial()).unwrap());

    let m = build_matrix_m(&example25::polynomial(), 3).unwrap();
    let wrong = check_condition3(&m, &alpha, &alpha).unwrap();
    assert!(wrong.orthogonal && wrong.circulant && !wrong.psi_transport);
    assert!(check_condition3(&m, &alpha, &beta).unwrap().holds());
}

#[test]
fn galois_image_is_cover_isomorphic() {
    let f = example25::field();
    let alpha = example25::alpha(3).unwrap();
    let tau = tau_from_map(&f, |x| f.frobenius(x, 1)).unwrap();
    let image = alpha.from_tau(&tau).unwrap();
    let (_, sigma) = cover_isomorphic(&alpha, &image).unwrap().expect("Frobenius twin");
    assert_eq!(sigma, 1);
}

#[test]
fn derived_bijection_is_the_shipped_polynomial() {
    let (alpha, beta) = example25::shipped_pair().unwrap();
    let derived = derive_bijection(&alpha, &beta).unwrap().expect("cospectral pair");
    assert_eq!(derived.coeffs(), example25::polynomial().coeffs());
}
