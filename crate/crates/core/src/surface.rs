//! Model surfaces, their first homology with the intersection pairing, and the
//! transvection action of Dehn twists.
//!
//! Homology vectors are written in the ordered basis `x_1, y_1, …, x_g, y_g`
//! with `⟨x_i, y_i⟩ = +1` and every other basis pairing zero.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A compact oriented surface `Σ_{g,r}^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surface {
    pub genus: u32,
    pub boundary_components: u32,
    #[serde(default)]
    pub marked_points: u32,
}

impl Surface {
    pub fn new(genus: u32, boundary_components: u32, marked_points: u32) -> Self {
        Surface {
            genus,
            boundary_components,
            marked_points,
        }
    }

    pub fn closed(genus: u32) -> Self {
        Surface::new(genus, 0, 0)
    }

    pub fn with_boundary(genus: u32, boundary_components: u32) -> Self {
        Surface::new(genus, boundary_components, 0)
    }

    /// Marked points do not contribute.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * i64::from(self.genus) - i64::from(self.boundary_components)
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_components == 0
    }

    /// Rank of `H_1`: `2g` when closed, `2g + s - 1` otherwise.
    pub fn first_betti(&self) -> u32 {
        if self.boundary_components == 0 {
            2 * self.genus
        } else {
            2 * self.genus + self.boundary_components - 1
        }
    }

    /// Same genus and number of boundary components.
    pub fn homeomorphic(&self, other: &Surface) -> bool {
        self.genus == other.genus && self.boundary_components == other.boundary_components
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Σ_{}", self.genus)?;
        if self.marked_points > 0 {
            write!(f, ",{}", self.marked_points)?;
        }
        if self.boundary_components > 0 {
            write!(f, "^{}", self.boundary_components)?;
        }
        Ok(())
    }
}

/// An integral class in `H_1(Σ_g)`, length `2g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyClass(Vec<i64>);

impl HomologyClass {
    pub fn new(coefficients: Vec<i64>) -> Self {
        HomologyClass(coefficients)
    }

    pub fn zero(genus: u32) -> Self {
        HomologyClass(vec![0; 2 * genus as usize])
    }

    /// The `index`-th standard basis vector (0-based, basis order).
    pub fn basis(genus: u32, index: usize) -> Self {
        let mut v = vec![0; 2 * genus as usize];
        v[index] = 1;
        HomologyClass(v)
    }

    /// `x_i`, 1-based.
    pub fn x(genus: u32, i: u32) -> Self {
        Self::basis(genus, 2 * (i as usize - 1))
    }

    /// `y_i`, 1-based.
    pub fn y(genus: u32, i: u32) -> Self {
        Self::basis(genus, 2 * (i as usize - 1) + 1)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn genus(&self) -> u32 {
        (self.0.len() / 2) as u32
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn checked_add(&self, other: &HomologyClass) -> Result<HomologyClass> {
        check_len(self.len(), other.len())?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("homology sum")))
            .collect::<Result<Vec<_>>>()
            .map(HomologyClass)
    }

    pub fn checked_scale(&self, k: i64) -> Result<HomologyClass> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow("homology scaling")))
            .collect::<Result<Vec<_>>>()
            .map(HomologyClass)
    }

    pub fn neg(&self) -> HomologyClass {
        HomologyClass(self.0.iter().map(|a| -a).collect())
    }
}

impl std::ops::Add for &HomologyClass {
    type Output = HomologyClass;

    fn add(self, rhs: &HomologyClass) -> HomologyClass {
        self.checked_add(rhs).expect("homology addition")
    }
}

impl std::ops::Sub for &HomologyClass {
    type Output = HomologyClass;

    fn sub(self, rhs: &HomologyClass) -> HomologyClass {
        self.checked_add(&rhs.neg()).expect("homology subtraction")
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if idx % 2 == 0 { 'x' } else { 'y' };
            let i = idx / 2 + 1;
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{name}{i}")?;
            } else {
                write!(f, "{sign}{mag}{name}{i}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

/// The algebraic intersection number `⟨u, v⟩`.
pub fn intersection(u: &HomologyClass, v: &HomologyClass) -> Result<i64> {
    check_len(u.len(), v.len())?;
    if !u.len().is_multiple_of(2) {
        return Err(Error::Dimension {
            expected: u.len() + 1,
            found: u.len(),
        });
    }
    let mut acc: i64 = 0;
    for pair in 0..u.len() / 2 {
        let (ux, uy) = (u.0[2 * pair], u.0[2 * pair + 1]);
        let (vx, vy) = (v.0[2 * pair], v.0[2 * pair + 1]);
        let term = ux
            .checked_mul(vy)
            .zip(uy.checked_mul(vx))
            .and_then(|(a, b)| a.checked_sub(b))
            .ok_or(Error::Overflow("intersection"))?;
        acc = acc
            .checked_add(term)
            .ok_or(Error::Overflow("intersection"))?;
    }
    Ok(acc)
}

/// Action of the positive Dehn twist along `c` on `H_1`: `v ↦ v + ⟨v,c⟩c`.
pub fn transvection(c: &NamedCurve, v: &HomologyClass) -> Result<HomologyClass> {
    transvect(&c.homology, v, 1)
}

/// `v ↦ v + k⟨v,c⟩c`, the action of `t_c^k`.
pub(crate) fn transvect(c: &HomologyClass, v: &HomologyClass, k: i64) -> Result<HomologyClass> {
    let pairing = intersection(v, c)?;
    let coeff = pairing
        .checked_mul(k)
        .ok_or(Error::Overflow("transvection"))?;
    v.checked_add(&c.checked_scale(coeff)?)
}

/// A simple closed curve on a model surface, recorded by its homology class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCurve {
    pub name: String,
    pub homology: HomologyClass,
    /// Genus `j` of the smaller side, for separating curves only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separating_split: Option<u32>,
    /// Null-homologous but parallel to a boundary component (e.g. `δ`).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub boundary_parallel: bool,
}

impl NamedCurve {
    pub fn non_separating(name: impl Into<String>, homology: HomologyClass) -> Result<Self> {
        let name = name.into();
        if homology.is_zero() {
            return Err(Error::InvalidCurve {
                name,
                reason: "non-separating curve needs a nonzero class".into(),
            });
        }
        Ok(NamedCurve {
            name,
            homology,
            separating_split: None,
            boundary_parallel: false,
        })
    }

    /// A separating curve cutting `Σ_g` into genus `j` and `g - j` pieces.
    /// The split is normalized to `min(j, g - j)`.
    pub fn separating(name: impl Into<String>, genus: u32, j: u32) -> Result<Self> {
        let name = name.into();
        if j == 0 || j >= genus {
            return Err(Error::InvalidCurve {
                name,
                reason: format!("split {j} out of range for genus {genus}"),
            });
        }
        Ok(NamedCurve {
            name,
            homology: HomologyClass::zero(genus),
            separating_split: Some(j.min(genus - j)),
            boundary_parallel: false,
        })
    }

    pub fn boundary_parallel(name: impl Into<String>, genus: u32) -> Self {
        NamedCurve {
            name: name.into(),
            homology: HomologyClass::zero(genus),
            separating_split: None,
            boundary_parallel: true,
        }
    }

    pub fn is_non_separating(&self) -> bool {
        !self.homology.is_zero()
    }

    fn validate(&self, genus: u32) -> Result<()> {
        check_len(2 * genus as usize, self.homology.len())?;
        let zero = self.homology.is_zero();
        let bad = |reason: &str| {
            Err(Error::InvalidCurve {
                name: self.name.clone(),
                reason: reason.into(),
            })
        };
        match (zero, self.separating_split, self.boundary_parallel) {
            (false, None, false) => Ok(()),
            (false, _, _) => bad("a nonzero class cannot be separating"),
            (true, Some(_), true) => bad("cannot be both separating and boundary-parallel"),
            (true, None, false) => bad("a null-homologous curve needs a split or boundary flag"),
            (true, Some(j), false) => {
                if j == 0 || 2 * j > genus {
                    bad("split must satisfy 1 <= j <= g/2")
                } else {
                    Ok(())
                }
            }
            (true, None, true) => Ok(()),
        }
    }
}

/// A surface together with a table of named curves on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    surface: Surface,
    curves: BTreeMap<String, NamedCurve>,
}

impl CurveModel {
    pub fn new(surface: Surface) -> Self {
        CurveModel {
            surface,
            curves: BTreeMap::new(),
        }
    }

    /// Inserts or replaces a curve, checking it against the surface.
    pub fn insert(&mut self, curve: NamedCurve) -> Result<()> {
        curve.validate(self.surface.genus)?;
        self.curves.insert(curve.name.clone(), curve);
        Ok(())
    }

    pub fn with_curve(mut self, curve: NamedCurve) -> Result<Self> {
        self.insert(curve)?;
        Ok(self)
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn genus(&self) -> u32 {
        self.surface.genus
    }

    pub fn curve(&self, name: &str) -> Result<&NamedCurve> {
        self.curves
            .get(name)
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.curves.contains_key(name)
    }

    pub fn curves(&self) -> impl Iterator<Item = &NamedCurve> {
        self.curves.values()
    }

    /// The standard model on `Σ_g^1`.
    ///
    /// The chain `c_1, …, c_{2g-2}, b, r` is assigned
    /// `c_{2i-1} ↦ x_i`, `c_{2i} ↦ y_i - y_{i+1}`, `b = c_{2g-1} ↦ x_g`,
    /// `r = c_{2g} ↦ y_g`; `δ` is the boundary curve and `a_1 ↦ x_g + y_g`.
    /// Both `b`/`r` and their chain aliases `c{2g-1}`/`c{2g}` are present.
    pub fn standard(g: u32) -> Result<Self> {
        if g < 2 {
            return Err(Error::domain(format!(
                "standard model needs genus >= 2, got {g}"
            )));
        }
        let mut model = CurveModel::new(Surface::with_boundary(g, 1));
        for (idx, class) in chain_classes(g).into_iter().enumerate() {
            model.insert(NamedCurve::non_separating(format!("c{}", idx + 1), class)?)?;
        }
        model.insert(NamedCurve::non_separating("b", HomologyClass::x(g, g))?)?;
        model.insert(NamedCurve::non_separating("r", HomologyClass::y(g, g))?)?;
        let a1 = &HomologyClass::x(g, g) + &HomologyClass::y(g, g);
        model.insert(NamedCurve::non_separating("a1", a1)?)?;
        model.insert(NamedCurve::boundary_parallel("delta", g))?;
        Ok(model)
    }

    /// Replaces the class of `a1` in a standard model.
    pub fn with_a1(self, class: HomologyClass) -> Result<Self> {
        self.with_curve(NamedCurve::non_separating("a1", class)?)
    }
}

/// Names of the chain `c_1, …, c_{2g-2}, b, r`.
pub fn chain_names(g: u32) -> Vec<String> {
    let mut names: Vec<String> = (1..=2 * g - 2).map(|i| format!("c{i}")).collect();
    names.push("b".into());
    names.push("r".into());
    names
}

fn chain_classes(g: u32) -> Vec<HomologyClass> {
    let mut out = Vec::with_capacity(2 * g as usize);
    for i in 1..=g {
        out.push(HomologyClass::x(g, i));
        if i < g {
            out.push(&HomologyClass::y(g, i) - &HomologyClass::y(g, i + 1));
        } else {
            out.push(HomologyClass::y(g, g));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(g: u32, i: u32) -> HomologyClass {
        HomologyClass::x(g, i)
    }
    fn y(g: u32, i: u32) -> HomologyClass {
        HomologyClass::y(g, i)
    }

    #[test]
    fn basis_pairing() {
        assert_eq!(intersection(&x(2, 1), &y(2, 1)).unwrap(), 1);
        assert_eq!(intersection(&y(2, 1), &x(2, 1)).unwrap(), -1);
        assert_eq!(intersection(&x(2, 1), &y(2, 2)).unwrap(), 0);
    }

    #[test]
    fn self_pairing_vanishes() {
        let u = &x(2, 1) + &y(2, 2);
        assert_eq!(intersection(&u, &u).unwrap(), 0);
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            intersection(&x(2, 1), &x(3, 1)),
            Err(Error::Dimension {
                expected: 4,
                found: 6
            })
        );
    }

    #[test]
    fn c2_meets_c3() {
        let m = CurveModel::standard(3).unwrap();
        let c2 = &m.curve("c2").unwrap().homology;
        let c3 = &m.curve("c3").unwrap().homology;
        assert_eq!(c2, &(&y(3, 1) - &y(3, 2)));
        assert_eq!(intersection(c2, c3).unwrap(), 1);
    }

    #[test]
    fn transvection_examples() {
        let c = NamedCurve::non_separating("x1", x(2, 1)).unwrap();
        assert_eq!(
            transvection(&c, &y(2, 1)).unwrap(),
            &y(2, 1) - &x(2, 1)
        );
        assert_eq!(transvection(&c, &x(2, 1)).unwrap(), x(2, 1));
        let delta = NamedCurve::boundary_parallel("delta", 2);
        let v = &x(2, 2) + &y(2, 1);
        assert_eq!(transvection(&delta, &v).unwrap(), v);
    }

    #[test]
    fn genus_two_model() {
        let m = CurveModel::standard(2).unwrap();
        assert_eq!(m.curve("b").unwrap().homology, x(2, 2));
        assert_eq!(m.curve("c3").unwrap().homology, x(2, 2));
        assert_eq!(m.curve("r").unwrap().homology, y(2, 2));
        assert_eq!(m.curve("c4").unwrap().homology, y(2, 2));
        let c1 = &m.curve("c1").unwrap().homology;
        assert_eq!(intersection(c1, &m.curve("c2").unwrap().homology).unwrap(), 1);
        assert_eq!(intersection(c1, &m.curve("c3").unwrap().homology).unwrap(), 0);
        assert!(m.curve("delta").unwrap().boundary_parallel);
        assert!(m.curve("delta").unwrap().separating_split.is_none());
    }

    #[test]
    fn genus_three_model_sizes() {
        let m = CurveModel::standard(3).unwrap();
        assert_eq!(chain_names(3).len(), 6);
        for name in chain_names(3) {
            assert_eq!(m.curve(&name).unwrap().homology.len(), 6);
        }
    }

    #[test]
    fn genus_below_two_rejected() {
        assert!(matches!(CurveModel::standard(1), Err(Error::Domain(_))));
    }

    #[test]
    fn chain_pattern_holds_up_to_genus_ten() {
        for g in 2..=10 {
            let m = CurveModel::standard(g).unwrap();
            let chain: Vec<_> = chain_names(g)
                .iter()
                .map(|n| m.curve(n).unwrap().homology.clone())
                .collect();
            for i in 0..chain.len() {
                for j in 0..chain.len() {
                    let expected = match j as i64 - i as i64 {
                        1 => 1,
                        -1 => -1,
                        _ => 0,
                    };
                    assert_eq!(intersection(&chain[i], &chain[j]).unwrap(), expected);
                }
            }
            for name in chain_names(g).iter().chain(std::iter::once(&"a1".to_string())) {
                assert!(m.curve(name).unwrap().is_non_separating());
            }
        }
    }

    #[test]
    fn a1_meets_b_and_r() {
        let m = CurveModel::standard(4).unwrap();
        let a1 = &m.curve("a1").unwrap().homology;
        assert_eq!(intersection(a1, &m.curve("b").unwrap().homology).unwrap().abs(), 1);
        assert_eq!(intersection(a1, &m.curve("r").unwrap().homology).unwrap().abs(), 1);
    }

    #[test]
    fn a1_override() {
        let m = CurveModel::standard(2).unwrap().with_a1(y(2, 1)).unwrap();
        assert_eq!(m.curve("a1").unwrap().homology, y(2, 1));
    }

    #[test]
    fn separating_split_normalized() {
        let c = NamedCurve::separating("s", 5, 4).unwrap();
        assert_eq!(c.separating_split, Some(1));
        assert!(NamedCurve::separating("s", 5, 0).is_err());
        assert!(NamedCurve::non_separating("z", HomologyClass::zero(2)).is_err());
    }

    #[test]
    fn euler_characteristic_ignores_marked_points() {
        assert_eq!(Surface::new(2, 1, 3).euler_characteristic(), -3);
        assert_eq!(Surface::closed(0).euler_characteristic(), 2);
    }

    #[test]
    fn display_class() {
        assert_eq!((&x(2, 1) - &y(2, 2)).to_string(), "x1-y2");
        assert_eq!(HomologyClass::zero(1).to_string(), "0");
    }
}
