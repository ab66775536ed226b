//! Relation templates and monodromy factorizations of the families
//! `X_{g,h,n}(m)`.
//!
//! Over `Γ_g^1` the families are cut out by
//!
//! ```text
//! t_δ^k          = C(m) · T^m · R^k                            (h = 1)
//! t_δ^{2-2h+k}   = C_1 ⋯ C_{h-1} · C(m) · T_1^m · T_2^m · R^k   (h > 1)
//! ```
//!
//! with `k = 2h - 2 - n ≥ 0`, where `R` is the one-boundary chain word. The
//! commutators `C_i`, `C(m)` are never spelled out and stay opaque. `T_2` is
//! known only through its defining relation, which is enough for its
//! symplectic image.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::chain_names;
use crate::word::{DefiningRelation, OpaqueBlock, TwistWord};

/// Parameters `(g, h, n, m)` of a family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyParams {
    pub g: u32,
    pub h: u32,
    pub n: i64,
    pub m: u32,
}

impl FamilyParams {
    pub fn new(g: u32, h: u32, n: i64, m: u32) -> Result<Self> {
        if g < 2 {
            return Err(Error::domain(format!("fiber genus must be >= 2, got {g}")));
        }
        if h < 1 {
            return Err(Error::domain(format!("base genus must be >= 1, got {h}")));
        }
        let bound = 2 * i64::from(h) - 2;
        if n > bound {
            return Err(Error::domain(format!(
                "section self-intersection {n} exceeds the bound 2h-2 = {bound}"
            )));
        }
        Ok(FamilyParams { g, h, n, m })
    }

    /// Number of chain-relation factors `k = 2h - 2 - n`.
    pub fn k(&self) -> i64 {
        2 * i64::from(self.h) - 2 - self.n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationTemplate {
    pub name: String,
    pub lhs: TwistWord,
    pub rhs: TwistWord,
    pub params: Option<FamilyParams>,
    pub provenance: String,
}

/// A vanishing cycle read off a factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VanishingCycle {
    Named { curve: String },
    /// One of the positive twists hidden inside a block such as `T_2`:
    /// non-separating, homology class unknown.
    Anonymous { block: String, index: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub params: FamilyParams,
    pub base_genus: u32,
    /// Exponent of `t_δ` on the left; the section has square `-boundary_twist_power`.
    pub boundary_twist_power: i64,
    pub word: TwistWord,
    pub vanishing_cycles: Vec<VanishingCycle>,
    pub commutator_blocks: Vec<OpaqueBlock>,
}

impl Factorization {
    pub fn section_self_intersection(&self) -> i64 {
        -self.boundary_twist_power
    }

    /// Left side `t_δ^power`.
    pub fn lhs(&self) -> TwistWord {
        boundary_power(self.boundary_twist_power)
    }
}

fn boundary_power(p: i64) -> TwistWord {
    if p == 0 {
        TwistWord::identity()
    } else {
        TwistWord::twist_pow("delta", p)
    }
}

fn check_genus(g: u32) -> Result<()> {
    if g < 2 {
        return Err(Error::domain(format!("fiber genus must be >= 2, got {g}")));
    }
    Ok(())
}

/// `R = (t_{c_1} ⋯ t_{c_{2g-2}} t_b t_r)^{4g+2}`, which equals `t_δ`.
pub fn chain_word(g: u32) -> Result<TwistWord> {
    check_genus(g)?;
    Ok(TwistWord::twists(chain_names(g)).power(4 * i64::from(g) + 2))
}

/// `T = t_{c_2} t_{c_1} (t_{c_1} t_{c_2} t_{c_3})^2 t_{c_1} t_{c_2}`.
pub fn t_word() -> TwistWord {
    TwistWord::product([
        TwistWord::twist("c2"),
        TwistWord::twist("c1"),
        TwistWord::twists(["c1", "c2", "c3"]).power(2),
        TwistWord::twist("c1"),
        TwistWord::twist("c2"),
    ])
}

/// `T_1 = t_r t_{a_1} t_b t_r (t_{a_1} t_r t_b)^2`.
pub fn t1_word() -> TwistWord {
    TwistWord::product([
        TwistWord::twist("r"),
        TwistWord::twist("a1"),
        TwistWord::twist("b"),
        TwistWord::twist("r"),
        TwistWord::twists(["a1", "r", "b"]).power(2),
    ])
}

fn t2_factor(g: u32) -> TwistWord {
    let names: Vec<String> = (1..=2 * g - 3).map(|i| format!("c{i}")).collect();
    TwistWord::twists(names).power(2 * i64::from(g) - 2)
}

fn t2_target(g: u32) -> TwistWord {
    let mut names: Vec<String> = (1..=2 * g - 2).map(|i| format!("c{i}")).collect();
    names.push("b".into());
    TwistWord::twists(names).power(2 * i64::from(g))
}

/// `T_2` as an opaque block with `8g - 6` declared positive twists, determined by
/// `T_2 · (t_{c_1} ⋯ t_{c_{2g-3}})^{2g-2} = (t_{c_1} ⋯ t_{c_{2g-2}} t_b)^{2g}`.
pub fn t2_word(g: u32) -> Result<TwistWord> {
    check_genus(g)?;
    let mut block = OpaqueBlock::unknown("T2").with_param("g", i64::from(g));
    block.declared_twists = Some(8 * u64::from(g) - 6);
    block.defined_by = Some(Box::new(DefiningRelation {
        right_factor: t2_factor(g),
        equals: t2_target(g),
    }));
    Ok(TwistWord::Opaque(block))
}

fn c_of_m(m: u32) -> TwistWord {
    TwistWord::opaque(OpaqueBlock::commutator("C").with_param("m", i64::from(m)))
}

fn fixed_commutators(h: u32) -> Vec<TwistWord> {
    (1..h)
        .map(|i| TwistWord::opaque(OpaqueBlock::commutator(format!("C{i}"))))
        .collect()
}

pub fn build_factorization(p: FamilyParams) -> Result<Factorization> {
    let FamilyParams { g, h, m, .. } = FamilyParams::new(p.g, p.h, p.n, p.m)?;
    let k = p.k();
    let m = i64::from(m);
    let mut factors = fixed_commutators(h);
    factors.push(c_of_m(p.m));
    if h == 1 {
        factors.push(t_word().power(m));
    } else {
        factors.push(t1_word().power(m));
        factors.push(t2_word(g)?.power(m));
    }
    factors.push(chain_word(g)?.power(k));
    let word = TwistWord::Product(factors);

    let commutator_blocks = word
        .opaque_blocks()
        .into_iter()
        .filter(|b| b.kind == crate::word::OpaqueKind::Commutator)
        .cloned()
        .collect();
    let mut vanishing_cycles = Vec::new();
    collect_cycles(&word, &mut vanishing_cycles)?;

    Ok(Factorization {
        params: p,
        base_genus: h,
        boundary_twist_power: 2 - 2 * i64::from(h) + k,
        word,
        vanishing_cycles,
        commutator_blocks,
    })
}

pub(crate) fn collect_cycles(w: &TwistWord, out: &mut Vec<VanishingCycle>) -> Result<()> {
    match w {
        TwistWord::Twist { curve, exponent } => {
            if *exponent < 0 {
                return Err(Error::domain(format!("negative twist on `{curve}`")));
            }
            for _ in 0..*exponent {
                out.push(VanishingCycle::Named {
                    curve: curve.clone(),
                });
            }
        }
        TwistWord::Product(v) => {
            for x in v {
                collect_cycles(x, out)?;
            }
        }
        TwistWord::Power(x, k) => {
            if *k < 0 {
                return Err(Error::domain("negative power in a positive factorization"));
            }
            let mut once = Vec::new();
            collect_cycles(x, &mut once)?;
            for _ in 0..*k {
                out.extend(once.iter().cloned());
            }
        }
        TwistWord::Commutator(..) => {}
        TwistWord::Opaque(block) => {
            for index in 0..block.declared_twists.unwrap_or(0) {
                out.push(VanishingCycle::Anonymous {
                    block: block.label.clone(),
                    index,
                });
            }
        }
    }
    Ok(())
}

/// All relation templates relevant to a family member, over `standard_model(g)`.
pub fn templates(p: FamilyParams) -> Result<Vec<RelationTemplate>> {
    let p = FamilyParams::new(p.g, p.h, p.n, p.m)?;
    let g = p.g;
    let mut out = vec![
        RelationTemplate {
            name: "chain".into(),
            lhs: TwistWord::twist("delta"),
            rhs: chain_word(g)?,
            params: None,
            provenance: "one-boundary chain relation".into(),
        },
        RelationTemplate {
            name: "t2-definition".into(),
            lhs: TwistWord::product([t2_word(g)?, t2_factor(g)]),
            rhs: t2_target(g),
            params: None,
            provenance: "defining relation of T_2 via odd chain relations".into(),
        },
    ];
    let m = i64::from(p.m);
    let (base_lhs, base_rhs) = if p.h == 1 {
        (
            TwistWord::identity(),
            TwistWord::product([c_of_m(p.m), t_word().power(m)]),
        )
    } else {
        let mut f = fixed_commutators(p.h);
        f.push(c_of_m(p.m));
        f.push(t1_word().power(m));
        f.push(t2_word(g)?.power(m));
        (boundary_power(2 - 2 * i64::from(p.h)), TwistWord::Product(f))
    };
    out.push(RelationTemplate {
        name: "family-base".into(),
        lhs: base_lhs,
        rhs: base_rhs,
        params: Some(p),
        provenance: "commutator relation before adding chain factors".into(),
    });
    let fact = build_factorization(p)?;
    out.push(RelationTemplate {
        name: "family".into(),
        lhs: fact.lhs(),
        rhs: fact.word,
        params: Some(p),
        provenance: "family relation with k chain factors".into(),
    });
    Ok(out)
}

/// Replaces `?*T2` blocks (optionally tagged `g=…`) by the genus-`g` block
/// carrying its defining relation.
pub fn resolve_known_blocks(w: &TwistWord, g: u32) -> Result<TwistWord> {
    Ok(match w {
        TwistWord::Opaque(b)
            if b.label == "T2"
                && b.kind == crate::word::OpaqueKind::UnknownElement
                && b.defined_by.is_none() =>
        {
            if let Some(&bg) = b.params.get("g") {
                if bg != i64::from(g) {
                    return Err(Error::domain(format!(
                        "block T2 tagged with genus {bg}, model has genus {g}"
                    )));
                }
            }
            t2_word(g)?
        }
        TwistWord::Product(v) => TwistWord::Product(
            v.iter()
                .map(|x| resolve_known_blocks(x, g))
                .collect::<Result<_>>()?,
        ),
        TwistWord::Power(x, k) => TwistWord::Power(Box::new(resolve_known_blocks(x, g)?), *k),
        TwistWord::Commutator(a, b) => TwistWord::Commutator(
            Box::new(resolve_known_blocks(a, g)?),
            Box::new(resolve_known_blocks(b, g)?),
        ),
        other => other.clone(),
    })
}
