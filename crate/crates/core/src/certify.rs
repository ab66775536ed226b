//! Evaluation of twist words in `Sp(2g, Z)` and the homological relation
//! certifier.
//!
//! A `Verified` verdict means the two sides act identically on `H_1`. That is
//! necessary for a relation in the mapping class group but not sufficient;
//! `Refuted` on the other hand is a genuine disproof.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{CurveModel, HomologyClass};
use crate::symplectic::SpMatrix;
use crate::word::TwistWord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluation {
    Matrix(SpMatrix),
    /// Labels of opaque blocks without a symplectic image.
    Indeterminate(Vec<String>),
}

impl Evaluation {
    pub fn matrix(&self) -> Option<&SpMatrix> {
        match self {
            Evaluation::Matrix(m) => Some(m),
            Evaluation::Indeterminate(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Refuted {
        /// First basis vector on which the two sides disagree.
        witness: HomologyClass,
        lhs_image: HomologyClass,
        rhs_image: HomologyClass,
    },
    Indeterminate {
        opaque: Vec<String>,
    },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

fn check_curves(w: &TwistWord, model: &CurveModel) -> Result<()> {
    for name in w.curve_names() {
        model.curve(&name)?;
    }
    Ok(())
}

/// The image of `w` in `Sp(2g, Z)`, composing right to left.
pub fn evaluate(w: &TwistWord, model: &CurveModel) -> Result<Evaluation> {
    check_curves(w, model)?;
    let unresolved = w.unresolved_labels();
    if !unresolved.is_empty() {
        return Ok(Evaluation::Indeterminate(unresolved));
    }
    image(w, model).map(Evaluation::Matrix)
}

fn image(w: &TwistWord, model: &CurveModel) -> Result<SpMatrix> {
    match w {
        TwistWord::Twist { curve, exponent } => {
            SpMatrix::transvection(&model.curve(curve)?.homology, *exponent)
        }
        TwistWord::Product(factors) => {
            let mut acc = SpMatrix::identity(model.genus());
            for f in factors {
                acc = acc.mul(&image(f, model)?)?;
            }
            Ok(acc)
        }
        TwistWord::Power(x, k) => image(x, model)?.pow(*k),
        TwistWord::Commutator(a, b) => {
            let (ma, mb) = (image(a, model)?, image(b, model)?);
            ma.mul(&mb)?.mul(&ma.inverse())?.mul(&mb.inverse())
        }
        TwistWord::Opaque(block) => match &block.defined_by {
            Some(rel) => {
                check_curves(&rel.equals, model)?;
                check_curves(&rel.right_factor, model)?;
                let rhs = image(&rel.equals, model)?;
                let factor = image(&rel.right_factor, model)?;
                rhs.mul(&factor.inverse())
            }
            None => Err(Error::domain(format!("opaque block `{block}` has no image"))),
        },
    }
}

/// Compares the symplectic images of two words.
pub fn certify_relation(lhs: &TwistWord, rhs: &TwistWord, model: &CurveModel) -> Result<Verdict> {
    let (l, r) = (evaluate(lhs, model)?, evaluate(rhs, model)?);
    match (l, r) {
        (Evaluation::Matrix(a), Evaluation::Matrix(b)) => Ok(match a.first_difference(&b) {
            None => Verdict::Verified,
            Some(j) => Verdict::Refuted {
                witness: HomologyClass::basis(model.genus(), j),
                lhs_image: a.column(j),
                rhs_image: b.column(j),
            },
        }),
        (l, r) => {
            let mut opaque = Vec::new();
            for e in [l, r] {
                if let Evaluation::Indeterminate(labels) = e {
                    for s in labels {
                        if !opaque.contains(&s) {
                            opaque.push(s);
                        }
                    }
                }
            }
            Ok(Verdict::Indeterminate { opaque })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::chain_names;
    use crate::word::OpaqueBlock;

    fn t(c: &str) -> TwistWord {
        TwistWord::twist(c)
    }

    #[test]
    fn boundary_twist_is_trivial() {
        let m = CurveModel::standard(2).unwrap();
        let e = evaluate(&t("delta"), &m).unwrap();
        assert!(e.matrix().unwrap().is_identity());
        assert_eq!(e.matrix().unwrap().dim(), 4);
    }

    #[test]
    fn self_commutator_is_trivial() {
        let m = CurveModel::standard(2).unwrap();
        let e = evaluate(&TwistWord::commutator(t("c1"), t("c1")), &m).unwrap();
        assert!(e.matrix().unwrap().is_identity());
    }

    #[test]
    fn unknown_curve() {
        let m = CurveModel::standard(2).unwrap();
        assert_eq!(evaluate(&t("zz"), &m), Err(Error::UnknownCurve("zz".into())));
    }

    #[test]
    fn unknown_curve_reported_before_opaque() {
        let m = CurveModel::standard(2).unwrap();
        let w = TwistWord::product([TwistWord::opaque(OpaqueBlock::commutator("C")), t("zz")]);
        assert!(matches!(evaluate(&w, &m), Err(Error::UnknownCurve(_))));
    }

    #[test]
    fn braid_relation_verified() {
        let m = CurveModel::standard(2).unwrap();
        let lhs = TwistWord::twists(["c1", "c2", "c1"]);
        let rhs = TwistWord::twists(["c2", "c1", "c2"]);
        assert_eq!(certify_relation(&lhs, &rhs, &m).unwrap(), Verdict::Verified);
    }

    #[test]
    fn disjoint_twists_commute() {
        let m = CurveModel::standard(2).unwrap();
        let lhs = TwistWord::twists(["c1", "c3"]);
        let rhs = TwistWord::twists(["c3", "c1"]);
        assert_eq!(certify_relation(&lhs, &rhs, &m).unwrap(), Verdict::Verified);
    }

    #[test]
    fn refutation_carries_witness() {
        let m = CurveModel::standard(2).unwrap();
        // t_{c1} fixes x1 = e0 and sends y1 = e1 to y1 + x1; t_{c2} moves x1.
        let v = certify_relation(&t("c1"), &t("c2"), &m).unwrap();
        match v {
            Verdict::Refuted {
                witness,
                lhs_image,
                rhs_image,
            } => {
                assert_eq!(witness, HomologyClass::basis(2, 0));
                assert_eq!(lhs_image, HomologyClass::new(vec![1, 0, 0, 0]));
                assert_eq!(rhs_image, HomologyClass::new(vec![1, 1, 0, -1]));
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn opaque_sides_indeterminate() {
        let m = CurveModel::standard(2).unwrap();
        let lhs = TwistWord::product([
            TwistWord::opaque(OpaqueBlock::commutator("C1")),
            TwistWord::opaque(OpaqueBlock::commutator("C").with_param("m", 1)),
        ]);
        let v = certify_relation(&lhs, &t("delta").power(-2), &m).unwrap();
        assert_eq!(
            v,
            Verdict::Indeterminate {
                opaque: vec!["C1".into(), "C(m=1)".into()]
            }
        );
    }

    #[test]
    fn chain_word_image_is_trivial_genus_two() {
        let m = CurveModel::standard(2).unwrap();
        let r = TwistWord::twists(chain_names(2)).power(10);
        assert!(evaluate(&r, &m).unwrap().matrix().unwrap().is_identity());
        let partial = TwistWord::twists(chain_names(2)).power(5);
        assert!(!evaluate(&partial, &m).unwrap().matrix().unwrap().is_identity());
    }
}
