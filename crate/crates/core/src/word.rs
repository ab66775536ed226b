//! Twist words: expression trees over Dehn twist generators.
//!
//! Composition is functional, so in `Product([a, b])` the factor `b` acts
//! first. Printing and parsing live in [`crate::dsl`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::json::safe_int;

/// Above this many expanded factors a leaf-only power is kept symbolic.
const EXPANSION_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpaqueKind {
    Commutator,
    UnknownElement,
}

/// `self · right_factor = equals`, used to give a block a symplectic image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefiningRelation {
    pub right_factor: TwistWord,
    pub equals: TwistWord,
}

/// A mapping class that is named but not spelled out as twists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpaqueBlock {
    pub label: String,
    pub kind: OpaqueKind,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, i64>,
    /// Number of positive twists the block is known to expand to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_twists: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defined_by: Option<Box<DefiningRelation>>,
}

impl OpaqueBlock {
    pub fn new(label: impl Into<String>, kind: OpaqueKind) -> Self {
        OpaqueBlock {
            label: label.into(),
            kind,
            params: BTreeMap::new(),
            declared_twists: None,
            defined_by: None,
        }
    }

    pub fn commutator(label: impl Into<String>) -> Self {
        Self::new(label, OpaqueKind::Commutator)
    }

    pub fn unknown(label: impl Into<String>) -> Self {
        Self::new(label, OpaqueKind::UnknownElement)
    }

    pub fn with_param(mut self, key: impl Into<String>, value: i64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    /// Whether a symplectic image can be computed for this block.
    pub fn is_resolvable(&self) -> bool {
        self.defined_by.is_some()
    }
}

impl fmt::Display for OpaqueBlock {
    /// `C(m=3)`; the DSL adds the `?` sigil.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.params.is_empty() {
            let parts: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistWord {
    Twist {
        curve: String,
        #[serde(with = "safe_int")]
        exponent: i64,
    },
    Product(Vec<TwistWord>),
    Power(Box<TwistWord>, #[serde(with = "safe_int")] i64),
    Commutator(Box<TwistWord>, Box<TwistWord>),
    Opaque(OpaqueBlock),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistCount {
    pub positive: u64,
    pub negative: u64,
    pub opaque: u64,
}

impl std::ops::Add for TwistCount {
    type Output = TwistCount;
    fn add(self, o: TwistCount) -> TwistCount {
        TwistCount {
            positive: self.positive.saturating_add(o.positive),
            negative: self.negative.saturating_add(o.negative),
            opaque: self.opaque.saturating_add(o.opaque),
        }
    }
}

impl TwistCount {
    fn times(self, k: u64) -> TwistCount {
        TwistCount {
            positive: self.positive.saturating_mul(k),
            negative: self.negative.saturating_mul(k),
            opaque: self.opaque.saturating_mul(k),
        }
    }

    fn flipped(self) -> TwistCount {
        TwistCount {
            positive: self.negative,
            negative: self.positive,
            opaque: self.opaque,
        }
    }
}

impl TwistWord {
    pub fn identity() -> Self {
        TwistWord::Product(Vec::new())
    }

    pub fn twist(curve: impl Into<String>) -> Self {
        TwistWord::twist_pow(curve, 1)
    }

    /// # Panics
    /// If `exponent` is zero; leaves carry nonzero exponents.
    pub fn twist_pow(curve: impl Into<String>, exponent: i64) -> Self {
        assert!(exponent != 0, "twist exponent must be nonzero");
        TwistWord::Twist {
            curve: curve.into(),
            exponent,
        }
    }

    pub fn product(factors: impl IntoIterator<Item = TwistWord>) -> Self {
        TwistWord::Product(factors.into_iter().collect())
    }

    /// Product of single positive twists, in the given order.
    pub fn twists<S: AsRef<str>>(curves: impl IntoIterator<Item = S>) -> Self {
        TwistWord::product(curves.into_iter().map(|c| TwistWord::twist(c.as_ref())))
    }

    pub fn power(self, k: i64) -> Self {
        TwistWord::Power(Box::new(self), k)
    }

    pub fn commutator(a: TwistWord, b: TwistWord) -> Self {
        TwistWord::Commutator(Box::new(a), Box::new(b))
    }

    pub fn opaque(block: OpaqueBlock) -> Self {
        TwistWord::Opaque(block)
    }

    /// `i ∘ self ∘ i⁻¹`.
    pub fn conjugate_by(self, i: TwistWord) -> Self {
        let inv = i.inverse();
        TwistWord::Product(vec![i, self, inv])
    }

    pub fn is_identity_literal(&self) -> bool {
        matches!(self, TwistWord::Product(v) if v.is_empty())
    }

    pub fn inverse(&self) -> TwistWord {
        match self {
            TwistWord::Twist { curve, exponent } => TwistWord::Twist {
                curve: curve.clone(),
                exponent: -exponent,
            },
            TwistWord::Product(v) => TwistWord::Product(v.iter().rev().map(|w| w.inverse()).collect()),
            TwistWord::Power(x, k) => TwistWord::Power(x.clone(), -k),
            // (aba⁻¹b⁻¹)⁻¹ = bab⁻¹a⁻¹
            TwistWord::Commutator(a, b) => TwistWord::Commutator(b.clone(), a.clone()),
            TwistWord::Opaque(_) => TwistWord::Power(Box::new(self.clone()), -1),
        }
    }

    /// Counts of positive and negative twists and of opaque blocks.
    pub fn twist_count(&self) -> TwistCount {
        match self {
            TwistWord::Twist { exponent, .. } => {
                let n = exponent.unsigned_abs();
                if *exponent > 0 {
                    TwistCount {
                        positive: n,
                        ..Default::default()
                    }
                } else {
                    TwistCount {
                        negative: n,
                        ..Default::default()
                    }
                }
            }
            TwistWord::Product(v) => v.iter().fold(TwistCount::default(), |acc, w| acc + w.twist_count()),
            TwistWord::Power(x, k) => {
                let c = x.twist_count().times(k.unsigned_abs());
                if *k < 0 {
                    c.flipped()
                } else {
                    c
                }
            }
            TwistWord::Commutator(a, b) => {
                let ab = a.twist_count() + b.twist_count();
                ab + ab.flipped()
            }
            TwistWord::Opaque(_) => TwistCount {
                opaque: 1,
                ..Default::default()
            },
        }
    }

    /// Positive: every twist exponent is positive, powers are non-negative, and
    /// opaque blocks are commutators or carry a declared positive expansion.
    /// Commutator nodes are allowed anywhere.
    pub fn is_positive(&self) -> bool {
        match self {
            TwistWord::Twist { exponent, .. } => *exponent > 0,
            TwistWord::Product(v) => v.iter().all(TwistWord::is_positive),
            TwistWord::Power(x, k) => *k >= 0 && x.is_positive(),
            TwistWord::Commutator(..) => true,
            TwistWord::Opaque(b) => b.kind == OpaqueKind::Commutator || b.declared_twists.is_some(),
        }
    }

    /// Every curve name referenced by a twist leaf, in first-occurrence order.
    pub fn curve_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |w| {
            if let TwistWord::Twist { curve, .. } = w {
                if !out.contains(curve) {
                    out.push(curve.clone());
                }
            }
        });
        out
    }

    /// Opaque blocks in traversal order, including repeats.
    pub fn opaque_blocks(&self) -> Vec<&OpaqueBlock> {
        let mut out = Vec::new();
        collect_opaque(self, &mut out);
        out
    }

    /// Display labels of blocks with no computable image, deduplicated.
    pub fn unresolved_labels(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for b in self.opaque_blocks() {
            if !b.is_resolvable() {
                let s = b.to_string();
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }

    fn visit(&self, f: &mut impl FnMut(&TwistWord)) {
        f(self);
        match self {
            TwistWord::Product(v) => v.iter().for_each(|w| w.visit(f)),
            TwistWord::Power(x, _) => x.visit(f),
            TwistWord::Commutator(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            TwistWord::Twist { .. } | TwistWord::Opaque(_) => {}
        }
    }

    fn is_leaf_only(&self) -> bool {
        match self {
            TwistWord::Twist { .. } => true,
            TwistWord::Product(v) => v.iter().all(TwistWord::is_leaf_only),
            TwistWord::Power(x, _) => x.is_leaf_only(),
            TwistWord::Commutator(..) | TwistWord::Opaque(_) => false,
        }
    }

    /// Free reduction.
    ///
    /// Flattens products, merges adjacent twists on the same curve (dropping
    /// zero exponents), expands powers of leaf-only subwords, and removes
    /// trivial commutators. The result evaluates identically to `self`.
    pub fn reduce(&self) -> TwistWord {
        let mut out = Vec::new();
        reduce_into(self, &mut out);
        wrap(out)
    }

    /// The top-level factors, flattening nested products.
    pub fn factors(&self) -> Vec<TwistWord> {
        let mut out = Vec::new();
        flatten_into(self, &mut out);
        out
    }
}

fn collect_opaque<'a>(w: &'a TwistWord, out: &mut Vec<&'a OpaqueBlock>) {
    match w {
        TwistWord::Opaque(b) => out.push(b),
        TwistWord::Product(v) => v.iter().for_each(|x| collect_opaque(x, out)),
        TwistWord::Power(x, k) => {
            if *k != 0 {
                collect_opaque(x, out);
            }
        }
        TwistWord::Commutator(a, b) => {
            collect_opaque(a, out);
            collect_opaque(b, out);
        }
        TwistWord::Twist { .. } => {}
    }
}

fn flatten_into(w: &TwistWord, out: &mut Vec<TwistWord>) {
    match w {
        TwistWord::Product(v) => v.iter().for_each(|x| flatten_into(x, out)),
        other => out.push(other.clone()),
    }
}

fn wrap(mut factors: Vec<TwistWord>) -> TwistWord {
    if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        TwistWord::Product(factors)
    }
}

fn push_factor(out: &mut Vec<TwistWord>, w: TwistWord) {
    if let TwistWord::Twist { curve, exponent } = &w {
        if let Some(TwistWord::Twist {
            curve: last,
            exponent: last_exp,
        }) = out.last_mut()
        {
            if last == curve {
                match last_exp.checked_add(*exponent) {
                    Some(0) => {
                        out.pop();
                        return;
                    }
                    Some(sum) => {
                        *last_exp = sum;
                        return;
                    }
                    // Leave both leaves in place rather than overflow.
                    None => {}
                }
            }
        }
    } else if let Some(last) = out.last() {
        if *last == w.inverse() {
            out.pop();
            return;
        }
        let (lb, lk) = power_parts(last);
        let (wb, wk) = power_parts(&w);
        if lb == wb {
            if let Some(sum) = lk.checked_add(wk) {
                let base = lb.clone();
                out.pop();
                match sum {
                    0 => {}
                    1 => out.push(base),
                    k => out.push(TwistWord::Power(Box::new(base), k)),
                }
                return;
            }
        }
    }
    out.push(w);
}

/// `x^k` as `(x, k)`, any other factor as `(w, 1)`.
fn power_parts(w: &TwistWord) -> (&TwistWord, i64) {
    match w {
        TwistWord::Power(x, k) => (x, *k),
        _ => (w, 1),
    }
}

fn reduce_into(w: &TwistWord, out: &mut Vec<TwistWord>) {
    match w {
        TwistWord::Twist { exponent: 0, .. } => {}
        TwistWord::Twist { .. } | TwistWord::Opaque(_) => push_factor(out, w.clone()),
        TwistWord::Product(v) => v.iter().for_each(|x| reduce_into(x, out)),
        TwistWord::Power(_, 0) => {}
        TwistWord::Power(x, k) => {
            let inner = x.reduce();
            if inner.is_identity_literal() {
                return;
            }
            let base = inner.factors();
            let total = (base.len() as u64).saturating_mul(k.unsigned_abs());
            if *k == 1 || (x.is_leaf_only() && total <= EXPANSION_LIMIT) {
                let base = if *k < 0 {
                    inner.inverse().factors()
                } else {
                    base
                };
                for _ in 0..k.unsigned_abs() {
                    for f in &base {
                        push_factor(out, f.clone());
                    }
                }
            } else {
                push_factor(out, TwistWord::Power(Box::new(inner), *k));
            }
        }
        TwistWord::Commutator(a, b) => {
            let (ra, rb) = (a.reduce(), b.reduce());
            if ra.is_identity_literal() || rb.is_identity_literal() || ra == rb {
                return;
            }
            push_factor(out, TwistWord::Commutator(Box::new(ra), Box::new(rb)));
        }
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::print_word(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c: &str) -> TwistWord {
        TwistWord::twist(c)
    }

    #[test]
    fn cancellation() {
        let w = TwistWord::product([t("c1"), TwistWord::twist_pow("c1", -1)]);
        assert_eq!(w.reduce(), TwistWord::identity());
    }

    #[test]
    fn zeroth_power() {
        let w = TwistWord::twists(["c1", "c2"]).power(0);
        assert_eq!(w.reduce(), TwistWord::identity());
    }

    #[test]
    fn exponent_merge() {
        let w = TwistWord::product([TwistWord::twist_pow("c1", 2), TwistWord::twist_pow("c1", -1)]);
        assert_eq!(w.reduce(), t("c1"));
    }

    #[test]
    fn nested_cancellation_cascades() {
        let w = TwistWord::product([
            t("a"),
            TwistWord::product([t("b"), TwistWord::twist_pow("b", -1)]),
            TwistWord::twist_pow("a", -1),
            t("c"),
        ]);
        assert_eq!(w.reduce(), t("c"));
    }

    #[test]
    fn negative_power_expands_to_inverse() {
        let w = TwistWord::twists(["a", "b"]).power(-2);
        let expected = TwistWord::product([
            TwistWord::twist_pow("b", -1),
            TwistWord::twist_pow("a", -1),
            TwistWord::twist_pow("b", -1),
            TwistWord::twist_pow("a", -1),
        ]);
        assert_eq!(w.reduce(), expected);
    }

    #[test]
    fn opaque_power_kept() {
        let w = TwistWord::opaque(OpaqueBlock::unknown("T2")).power(3);
        assert_eq!(w.reduce(), w);
        assert_eq!(w.twist_count().opaque, 3);
    }

    #[test]
    fn trivial_commutators_vanish() {
        assert_eq!(TwistWord::commutator(t("a"), t("a")).reduce(), TwistWord::identity());
        assert_eq!(
            TwistWord::commutator(t("a"), TwistWord::identity()).reduce(),
            TwistWord::identity()
        );
    }

    #[test]
    fn counts() {
        let tw = TwistWord::product([
            t("c2"),
            t("c1"),
            TwistWord::twists(["c1", "c2", "c3"]).power(2),
            t("c1"),
            t("c2"),
        ]);
        assert_eq!(
            tw.twist_count(),
            TwistCount {
                positive: 10,
                negative: 0,
                opaque: 0
            }
        );
        assert_eq!(TwistWord::identity().twist_count(), TwistCount::default());
        let c = TwistWord::commutator(t("a"), TwistWord::twist_pow("b", 2));
        assert_eq!(
            c.twist_count(),
            TwistCount {
                positive: 3,
                negative: 3,
                opaque: 0
            }
        );
        assert_eq!(tw.inverse().twist_count().negative, 10);
    }

    #[test]
    fn positivity() {
        assert!(t("a").is_positive());
        assert!(!TwistWord::twist_pow("a", -1).is_positive());
        assert!(TwistWord::opaque(OpaqueBlock::commutator("C")).is_positive());
        assert!(!TwistWord::opaque(OpaqueBlock::unknown("h")).is_positive());
        assert!(TwistWord::commutator(t("a"), TwistWord::twist_pow("b", -1)).is_positive());
    }

    #[test]
    fn unresolved_labels_dedup() {
        let c = |i: i64| TwistWord::opaque(OpaqueBlock::commutator(format!("C{i}")));
        let w = TwistWord::product([c(1), c(2), c(1), TwistWord::opaque(OpaqueBlock::commutator("C").with_param("m", 2))]);
        assert_eq!(w.unresolved_labels(), vec!["C1", "C2", "C(m=2)"]);
    }
}
