//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;
use twistcalc::spinal::{PaperComponent, SpineComponent};
use twistcalc::{OpaqueBlock, SpinalOpenBook, Surface, TwistWord};

/// Curves of the genus-2 standard model, boundary twist excluded.
pub const GENUS_TWO_CURVES: &[&str] = &["c1", "c2", "c3", "c4", "b", "r", "a1"];

pub fn leaf() -> impl Strategy<Value = TwistWord> {
    (prop::sample::select(GENUS_TWO_CURVES), prop_oneof![-3i64..=-1, 1i64..=3])
        .prop_map(|(c, e)| TwistWord::twist_pow(c, e))
}

/// Words over the genus-2 model without opaque blocks.
pub fn concrete_word() -> impl Strategy<Value = TwistWord> {
    leaf().prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(TwistWord::Product),
            (inner.clone(), -3i64..=3).prop_map(|(w, k)| w.power(k)),
            (inner.clone(), inner).prop_map(|(a, b)| TwistWord::commutator(a, b)),
        ]
    })
}

fn opaque() -> impl Strategy<Value = TwistWord> {
    (
        prop::sample::select(&["C", "C1", "h", "T2", "phi_2"][..]),
        any::<bool>(),
        prop::option::of((prop::sample::select(&["m", "g", "k"][..]), -5i64..40)),
    )
        .prop_map(|(label, commutator, param)| {
            let mut b = if commutator {
                OpaqueBlock::commutator(label)
            } else {
                OpaqueBlock::unknown(label)
            };
            if let Some((k, v)) = param {
                b = b.with_param(k, v);
            }
            TwistWord::Opaque(b)
        })
}

/// Any word the text syntax can express.
pub fn any_word() -> impl Strategy<Value = TwistWord> {
    let curve = "[a-z][a-z0-9_]{0,5}".prop_filter("t_ prefix clash", |s| !s.is_empty());
    let leaf = prop_oneof![
        4 => (curve, prop_oneof![-9i64..=-1, 1i64..=9]).prop_map(|(c, e)| TwistWord::twist_pow(c, e)),
        1 => opaque(),
    ];
    leaf.prop_recursive(5, 48, 5, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..5).prop_map(TwistWord::Product),
            (inner.clone(), prop_oneof![-12i64..=-1, 2i64..=12]).prop_map(|(w, k)| w.power(k)),
            (inner.clone(), inner).prop_map(|(a, b)| TwistWord::commutator(a, b)),
        ]
    })
}

/// A flat random word for paper monodromies.
pub fn random_monodromy<R: Rng>(rng: &mut R) -> TwistWord {
    let len = rng.gen_range(0..6);
    TwistWord::Product(
        (0..len)
            .map(|_| {
                let c = GENUS_TWO_CURVES[rng.gen_range(0..GENUS_TWO_CURVES.len())];
                match rng.gen_range(0..10) {
                    0 => TwistWord::Opaque(OpaqueBlock::unknown("h")),
                    1 => TwistWord::Opaque(OpaqueBlock::unknown("h")).inverse(),
                    2 => TwistWord::twists([c, "c1"]).power(rng.gen_range(2..4)),
                    _ => TwistWord::twist_pow(c, if rng.gen_bool(0.8) { 1 } else { -1 }),
                }
            })
            .collect(),
    )
}

/// A symmetric, uniform, simple book with `p` paper and `s` spine components.
pub fn random_book<R: Rng>(rng: &mut R, p: usize, s: usize, page_genus: u32, vertebra_genus: u32) -> SpinalOpenBook {
    let mut matching = BTreeMap::new();
    let paper = (0..p)
        .map(|i| PaperComponent {
            name: format!("P{i}"),
            page: Surface::with_boundary(page_genus, s as u32),
            monodromy: random_monodromy(rng),
            boundary_labels: (0..s)
                .map(|j| {
                    matching.insert(format!("P{i}:{j}"), format!("S{j}:{i}"));
                    format!("P{i}:{j}")
                })
                .collect(),
        })
        .collect();
    let spine = (0..s)
        .map(|j| {
            let mut labels: Vec<String> = (0..p).map(|i| format!("S{j}:{i}")).collect();
            // label order on a spine is arbitrary
            let k = rng.gen_range(0..p);
            labels.rotate_left(k);
            SpineComponent {
                name: format!("S{j}"),
                vertebra: Surface::with_boundary(vertebra_genus, p as u32),
                boundary_labels: labels,
                framing: if rng.gen_bool(0.5) { Some(rng.gen_range(-3..3)) } else { None },
            }
        })
        .collect();
    SpinalOpenBook::new(paper, spine, matching).expect("generated books are simple")
}

// ---------------------------------------------------------------------------
// Independent oracles

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by cofactor expansion.
fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}` with
/// `D_k` the gcd of all `k × k` minors.
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<i64> {
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut divisors = vec![1i128];
    for k in 1..=nr.min(nc) {
        let mut g = 0i128;
        for rows in subsets(nr, k) {
            for cols in subsets(nc, k) {
                let sub: Vec<Vec<i128>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j]).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| (w[1] / w[0]) as i64).collect()
}

/// `⟨u, v⟩ = Σ u_{x_i} v_{y_i} - u_{y_i} v_{x_i}` written out directly.
pub fn pairing(u: &[i64], v: &[i64]) -> i64 {
    u.chunks(2).zip(v.chunks(2)).map(|(a, b)| a[0] * b[1] - a[1] * b[0]).sum()
}

/// Euler characteristic of `k` fibers and `l` sections meeting in `k·l` points.
pub fn euler_fibers_and_sections(g: u32, h: u32, k: i64, l: i64) -> i64 {
    let (g, h) = (i64::from(g), i64::from(h));
    k * (2 - 2 * g) + l * (2 - 2 * h) - k * l
}
