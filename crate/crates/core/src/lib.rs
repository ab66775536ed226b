//! Combinatorial machinery for Lefschetz fibrations over surfaces of any
//! genus and the contact manifolds on their boundaries.
//!
//! * [`surface`]: model surfaces, homology classes, the standard curve model.
//! * [`word`], [`dsl`]: twist-word trees, free reduction, the text syntax.
//! * [`symplectic`], [`certify`]: images in `Sp(2g, Z)` and relation checks.
//! * [`family`]: the relation templates and monodromy factorizations of the
//!   families `X_{g,h,n}(m)`.
//! * [`lefschetz`]: fibration records and their invariants, excision and
//!   fiber sums.
//! * [`spinal`]: spinal open books, spinal taps and folds.
//! * [`plumbing`], [`snf`]: plumbing graphs, Smith normal form and first
//!   homology.

pub mod certify;
pub mod dsl;
pub mod error;
pub mod family;
pub mod json;
pub mod lefschetz;
pub mod plumbing;
pub mod snf;
pub mod spinal;
pub mod surface;
pub mod symplectic;
pub mod word;

pub use certify::{certify_relation, evaluate, Evaluation, Verdict};
pub use dsl::{parse_word, print_word};
pub use error::{Error, Result};
pub use surface::{intersection, transvection, CurveModel, HomologyClass, NamedCurve, Surface};
pub use symplectic::SpMatrix;
pub use word::{OpaqueBlock, OpaqueKind, TwistCount, TwistWord};
pub use family::{build_factorization, chain_word, FamilyParams, Factorization, RelationTemplate};
pub use lefschetz::{
    critical_count, endo_signature, euler_characteristic, family_invariants, InvariantReport,
    LefschetzFibration, SectionRecord,
};
pub use plumbing::{build_generalized, build_y, first_homology, linking_matrix, HomologyResult, PlumbingGraph};
pub use spinal::{
    boundary_of_disk_fibration, fold, spinal_tap, CobordismAccount, FoldSpec, SpinalOpenBook, TapSpec,
};
