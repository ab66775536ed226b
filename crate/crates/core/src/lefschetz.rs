//! Lefschetz fibration records, their invariants, fiber sums and the
//! excision of fibers and sections.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{build_factorization, collect_cycles, FamilyParams, Factorization, VanishingCycle};
use crate::spinal::{PaperComponent, SpinalOpenBook, SpineComponent};
use crate::surface::{CurveModel, Surface};
use crate::word::{OpaqueKind, TwistWord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingCycleRecord {
    pub cycle: VanishingCycle,
    /// Genus of the smaller side when the cycle separates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separating_split: Option<u32>,
    pub boundary_parallel: bool,
}

impl VanishingCycleRecord {
    fn non_separating(cycle: VanishingCycle) -> Self {
        VanishingCycleRecord {
            cycle,
            separating_split: None,
            boundary_parallel: false,
        }
    }
}

/// A section; sections in one list are assumed pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionRecord {
    pub label: String,
    pub self_intersection: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LefschetzFibration {
    pub fiber_genus: u32,
    pub fiber_boundary_components: u32,
    pub base_genus: u32,
    pub base_boundary_components: u32,
    pub vanishing_cycles: Vec<VanishingCycleRecord>,
    pub commutator_count: u32,
    pub sections: Vec<SectionRecord>,
    pub monodromy: TwistWord,
    /// Known only for hyperelliptic fibrations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<i64>,
    pub hyperelliptic: bool,
}

impl LefschetzFibration {
    /// Bounded fiber, bounded base, and no vanishing cycle cutting off a
    /// closed subsurface of a fiber.
    pub fn allowable(&self) -> bool {
        self.fiber_boundary_components > 0
            && self.base_boundary_components > 0
            && self
                .vanishing_cycles
                .iter()
                .all(|c| c.separating_split.is_none())
    }

    pub fn fiber(&self) -> Surface {
        Surface::with_boundary(self.fiber_genus, self.fiber_boundary_components)
    }

    pub fn base(&self) -> Surface {
        Surface::with_boundary(self.base_genus, self.base_boundary_components)
    }

    pub fn is_closed(&self) -> bool {
        self.fiber_boundary_components == 0 && self.base_boundary_components == 0
    }

    /// The fibration of `X_{g,h,n}(m)` with its section of square `n`.
    pub fn from_factorization(f: &Factorization) -> Result<Self> {
        let p = f.params;
        let signature = if p.g == 2 {
            family_invariants(p.g, p.h, p.n, p.m)?.signature
        } else {
            None
        };
        Ok(LefschetzFibration {
            fiber_genus: p.g,
            fiber_boundary_components: 0,
            base_genus: f.base_genus,
            base_boundary_components: 0,
            vanishing_cycles: f
                .vanishing_cycles
                .iter()
                .cloned()
                .map(VanishingCycleRecord::non_separating)
                .collect(),
            commutator_count: f.commutator_blocks.len() as u32,
            sections: vec![SectionRecord {
                label: "S".into(),
                self_intersection: f.section_self_intersection(),
            }],
            monodromy: f.word.clone(),
            signature,
            hyperelliptic: p.g == 2,
        })
    }

    /// The closed fibration over `Σ_h` described by `t_δ^{boundary_power} = word`
    /// in `Γ_g^1`, where `h` is the number of commutators in `word`.
    ///
    /// The signature is filled in by Endo's formula at genus 2.
    pub fn from_monodromy(model: &CurveModel, word: &TwistWord, boundary_power: i64) -> Result<Self> {
        let g = model.genus();
        let mut cycles = Vec::new();
        collect_cycles(word, &mut cycles)?;
        let mut records = Vec::with_capacity(cycles.len());
        for c in cycles {
            let rec = match &c {
                VanishingCycle::Named { curve } => {
                    let nc = model.curve(curve)?;
                    if nc.boundary_parallel {
                        return Err(Error::domain(format!(
                            "`{curve}` is boundary parallel and cannot be a vanishing cycle of a closed fiber"
                        )));
                    }
                    VanishingCycleRecord {
                        cycle: c.clone(),
                        separating_split: nc.separating_split,
                        boundary_parallel: false,
                    }
                }
                VanishingCycle::Anonymous { .. } => VanishingCycleRecord::non_separating(c.clone()),
            };
            records.push(rec);
        }
        let h = commutator_count(word)?;
        let mut f = LefschetzFibration {
            fiber_genus: g,
            fiber_boundary_components: 0,
            base_genus: h,
            base_boundary_components: 0,
            vanishing_cycles: records,
            commutator_count: h,
            sections: vec![SectionRecord {
                label: "S".into(),
                self_intersection: -boundary_power,
            }],
            monodromy: word.clone(),
            signature: None,
            hyperelliptic: false,
        };
        if g == 2 {
            f = f.with_hyperelliptic_signature()?;
        }
        Ok(f)
    }

    /// Asserts hyperellipticity and fills in the signature from Endo's formula.
    pub fn with_hyperelliptic_signature(mut self) -> Result<Self> {
        let (n, s) = self.cycle_counts();
        self.signature = Some(endo_signature(self.fiber_genus, n, &s)?);
        self.hyperelliptic = true;
        Ok(self)
    }

    /// `(N, s_j)`: non-separating count and separating counts by split.
    pub fn cycle_counts(&self) -> (u64, BTreeMap<u32, u64>) {
        let mut n = 0;
        let mut s = BTreeMap::new();
        for c in &self.vanishing_cycles {
            match c.separating_split {
                Some(j) => *s.entry(j).or_insert(0) += 1,
                None => n += 1,
            }
        }
        (n, s)
    }

    pub fn invariants(&self) -> InvariantReport {
        let euler = euler_characteristic(self);
        InvariantReport::new(self.vanishing_cycles.len() as i64, euler, self.signature, self.hyperelliptic)
    }
}

fn commutator_count(w: &TwistWord) -> Result<u32> {
    let n: u64 = match w {
        TwistWord::Commutator(..) => 1,
        TwistWord::Opaque(b) if b.kind == OpaqueKind::Commutator => 1,
        TwistWord::Opaque(_) | TwistWord::Twist { .. } => 0,
        TwistWord::Product(v) => v.iter().map(commutator_count).sum::<Result<u32>>()?.into(),
        TwistWord::Power(x, k) => {
            let k = u64::try_from(*k).map_err(|_| Error::domain("negative power in a monodromy factorization"))?;
            u64::from(commutator_count(x)?) * k
        }
    };
    u32::try_from(n).map_err(|_| Error::Overflow("commutator count"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    /// Number of critical points.
    #[serde(rename = "M")]
    pub critical_points: i64,
    pub euler: i64,
    pub signature: Option<i64>,
    pub c1_squared: Option<i64>,
    pub c2: Option<i64>,
    pub hyperelliptic: bool,
}

impl InvariantReport {
    fn new(critical_points: i64, euler: i64, signature: Option<i64>, hyperelliptic: bool) -> Self {
        InvariantReport {
            critical_points,
            euler,
            signature,
            c1_squared: signature.map(|s| 2 * euler + 3 * s),
            c2: signature.map(|_| euler),
            hyperelliptic,
        }
    }
}

fn to_i64(x: i128, what: &'static str) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(what))
}

/// Number of critical points `M(m)` of `X_{g,h,n}(m)`.
pub fn critical_count(g: u32, h: u32, n: i64, m: u32) -> Result<i64> {
    let p = FamilyParams::new(g, h, n, m)?;
    let (g, m, n, k) = (i128::from(g), i128::from(m), i128::from(n), i128::from(p.k()));
    let chain = 8 * g * g + 4 * g;
    let total = if p.h == 1 {
        10 * m - chain * n
    } else {
        (8 * g + 4) * m + chain * k
    };
    to_i64(total, "critical count")
}

/// `χ(fiber)·χ(base) + #critical points`.
pub fn euler_characteristic(f: &LefschetzFibration) -> i64 {
    f.fiber().euler_characteristic() * f.base().euler_characteristic() + f.vanishing_cycles.len() as i64
}

/// Endo's signature of a hyperelliptic fibration with `n_nonsep` non-separating
/// and `s[j]` separating vanishing cycles of split `j`, in exact arithmetic.
pub fn endo_signature(g: u32, n_nonsep: u64, s: &BTreeMap<u32, u64>) -> Result<i64> {
    if g < 1 {
        return Err(Error::domain("fiber genus must be positive"));
    }
    let den = 2 * i128::from(g) + 1;
    let gi = i128::from(g);
    let mut sigma = Ratio::new(-(gi + 1) * i128::from(n_nonsep), den);
    for (&j, &count) in s {
        if j < 1 || j > g / 2 {
            return Err(Error::domain(format!(
                "separating split {j} out of range 1..={} for genus {g}",
                g / 2
            )));
        }
        let ji = i128::from(j);
        let coeff = Ratio::new(4 * ji * (gi - ji), den) - 1;
        sigma += coeff * i128::from(count);
    }
    if !sigma.is_integer() {
        return Err(Error::Integrality {
            numerator: to_i64(*sigma.numer(), "signature")?,
            denominator: to_i64(*sigma.denom(), "signature")?,
        });
    }
    to_i64(sigma.to_integer(), "signature")
}

/// Displayed genus-2 signature closed forms.
fn genus_two_signature(p: FamilyParams) -> i64 {
    let (m, n, k) = (i64::from(p.m), p.n, p.k());
    if p.h == 1 {
        -6 * m + 24 * n
    } else {
        -12 * m - 24 * k
    }
}

/// Invariants of `X_{g,h,n}(m)`. The signature is reported for `g = 2` only,
/// from the closed forms, and is checked against Endo's formula.
pub fn family_invariants(g: u32, h: u32, n: i64, m: u32) -> Result<InvariantReport> {
    let p = FamilyParams::new(g, h, n, m)?;
    let big_m = critical_count(g, h, n, m)?;
    let euler = to_i64(
        4 * (i128::from(g) - 1) * (i128::from(h) - 1) + i128::from(big_m),
        "Euler characteristic",
    )?;
    let signature = if g == 2 {
        let closed = genus_two_signature(p);
        let nonsep = u64::try_from(big_m).map_err(|_| Error::domain("negative critical count"))?;
        let endo = endo_signature(2, nonsep, &BTreeMap::new())?;
        if endo != closed {
            return Err(Error::domain(format!(
                "closed-form signature {closed} disagrees with Endo's formula {endo}"
            )));
        }
        Some(closed)
    } else {
        None
    };
    Ok(InvariantReport::new(big_m, euler, signature, g == 2))
}

/// The displayed genus-2 closed forms for `c_1^2`: `2m - 8n` for `h = 1` and
/// `4m + 8(2h - 2 - n)` for `h ≥ 2`. `None` for other fiber genera.
pub fn c1_squared_closed_form(g: u32, h: u32, n: i64, m: u32) -> Result<Option<i64>> {
    let p = FamilyParams::new(g, h, n, m)?;
    if g != 2 {
        return Ok(None);
    }
    let m = i64::from(m);
    Ok(Some(if h == 1 { 2 * m - 8 * n } else { 4 * m + 8 * p.k() }))
}

/// `e(X̌) = e(X) - 3 + 2(g + h)` after removing one fiber and one section.
pub fn excised_euler_paper_identity(euler: i64, g: u32, h: u32) -> i64 {
    euler - 3 + 2 * (i64::from(g) + i64::from(h))
}

/// Removes a fibered neighborhood of one regular fiber and of the listed sections.
pub fn excise_fiber_and_sections(
    f: &LefschetzFibration,
    section_labels: &[&str],
) -> Result<(LefschetzFibration, SpinalOpenBook)> {
    excise_fibers_and_sections(f, 1, section_labels)
}

/// Removes `fibers` regular fibers and the listed sections. Each fiber leaves a
/// paper component over its own boundary circle; the first carries the
/// monodromy word and the others have trivial monodromy.
pub fn excise_fibers_and_sections(
    f: &LefschetzFibration,
    fibers: u32,
    section_labels: &[&str],
) -> Result<(LefschetzFibration, SpinalOpenBook)> {
    if !f.is_closed() {
        return Err(Error::domain("excision needs a closed fiber and a closed base"));
    }
    if fibers == 0 {
        return Err(Error::domain("at least one fiber must be excised"));
    }
    if section_labels.is_empty() {
        return Err(Error::domain("at least one section must be excised"));
    }
    if let Some(c) = f.vanishing_cycles.iter().find(|c| c.separating_split.is_some()) {
        return Err(Error::NotAllowable(format!(
            "separating vanishing cycle {:?} would leave a closed surface in a fiber",
            c.cycle
        )));
    }
    let mut excised = Vec::new();
    for &l in section_labels {
        let s = f
            .sections
            .iter()
            .find(|s| s.label == l)
            .ok_or_else(|| Error::domain(format!("no section labelled `{l}`")))?;
        if excised.iter().any(|e: &&SectionRecord| e.label == l) {
            return Err(Error::domain(format!("section `{l}` listed twice")));
        }
        excised.push(s);
    }
    let l = excised.len() as u32;

    let page = Surface::with_boundary(f.fiber_genus, l);
    let vertebra = Surface::with_boundary(f.base_genus, fibers);
    let mut matching = BTreeMap::new();
    let paper = (0..fibers)
        .map(|i| PaperComponent {
            name: format!("p{i}"),
            page,
            monodromy: if i == 0 {
                f.monodromy.clone()
            } else {
                TwistWord::identity()
            },
            boundary_labels: excised
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let pl = format!("p{i}.{j}");
                    matching.insert(pl.clone(), format!("{}.{i}", s.label));
                    pl
                })
                .collect(),
        })
        .collect();
    let spine = excised
        .iter()
        .map(|s| SpineComponent {
            name: s.label.clone(),
            vertebra,
            boundary_labels: (0..fibers).map(|i| format!("{}.{i}", s.label)).collect(),
            framing: Some(s.self_intersection),
        })
        .collect();
    let book = SpinalOpenBook::new(paper, spine, matching)?;

    let out = LefschetzFibration {
        fiber_boundary_components: l,
        base_boundary_components: fibers,
        sections: f
            .sections
            .iter()
            .filter(|s| !section_labels.contains(&s.label.as_str()))
            .cloned()
            .collect(),
        ..f.clone()
    };
    Ok((out, book))
}

/// Fiber sum of `f1` with a fibration `f2` over the sphere, gluing the paired
/// sections. Unpaired sections do not survive.
pub fn fiber_sum(
    f1: &LefschetzFibration,
    f2: &LefschetzFibration,
    section_pairing: &[(&str, &str)],
) -> Result<LefschetzFibration> {
    if !f1.is_closed() || !f2.is_closed() {
        return Err(Error::domain("fiber sum needs closed fibers and closed bases"));
    }
    if f1.fiber_genus != f2.fiber_genus {
        return Err(Error::domain(format!(
            "fiber genus mismatch: {} vs {}",
            f1.fiber_genus, f2.fiber_genus
        )));
    }
    if f2.base_genus != 0 {
        return Err(Error::domain("the second summand must lie over the sphere"));
    }
    if f2.vanishing_cycles.is_empty()
        && f2.commutator_count == 0
        && f2.sections.iter().any(|s| s.self_intersection != 0)
    {
        return Err(Error::domain(
            "a trivial bundle over the sphere has only square-zero sections",
        ));
    }
    let mut sections = Vec::new();
    let mut used2 = Vec::new();
    for &(a, b) in section_pairing {
        let s1 = f1
            .sections
            .iter()
            .find(|s| s.label == a)
            .ok_or_else(|| Error::domain(format!("no section `{a}` on the first summand")))?;
        let s2 = f2
            .sections
            .iter()
            .find(|s| s.label == b)
            .ok_or_else(|| Error::domain(format!("no section `{b}` on the second summand")))?;
        if sections.iter().any(|s: &SectionRecord| s.label == a) || used2.contains(&b) {
            return Err(Error::domain("a section is paired twice"));
        }
        used2.push(b);
        sections.push(SectionRecord {
            label: a.into(),
            self_intersection: s1
                .self_intersection
                .checked_add(s2.self_intersection)
                .ok_or(Error::Overflow("section self-intersection"))?,
        });
    }
    let mut vanishing_cycles = f1.vanishing_cycles.clone();
    vanishing_cycles.extend(f2.vanishing_cycles.iter().cloned());
    Ok(LefschetzFibration {
        fiber_genus: f1.fiber_genus,
        fiber_boundary_components: 0,
        base_genus: f1.base_genus + f2.base_genus,
        base_boundary_components: 0,
        vanishing_cycles,
        commutator_count: f1.commutator_count + f2.commutator_count,
        sections,
        monodromy: TwistWord::product([f1.monodromy.clone(), f2.monodromy.clone()]),
        signature: match (f1.signature, f2.signature) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        },
        hyperelliptic: f1.hyperelliptic && f2.hyperelliptic,
    })
}

/// Convenience: the fibration of `X_{g,h,n}(m)`.
pub fn family_fibration(g: u32, h: u32, n: i64, m: u32) -> Result<LefschetzFibration> {
    LefschetzFibration::from_factorization(&build_factorization(FamilyParams::new(g, h, n, m)?)?)
}
