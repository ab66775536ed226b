//! Abstract spinal open books, the spinal tap and its inverse fold.
//!
//! A book is stored as paper components (a page with monodromy and one
//! labelled boundary circle per spine component) and spine components (a
//! vertebra with one labelled boundary circle per paper component), plus the
//! matching of paper labels with spine labels. Only symmetric, uniform and
//! simple books are representable: all pages are homeomorphic, all vertebrae
//! are homeomorphic and every paper component meets every spine component
//! along exactly one interface torus.
//!
//! Paper monodromies are kept as flat top-level products so that tapping and
//! folding can split and concatenate factor lists exactly. The gluing map
//! `h: F_1 → F_2` of a tap is carried as an opaque element `?*h`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::certify::{certify_relation, Verdict};
use crate::dsl::{parse_word, print_word};
use crate::error::{Error, Result};
use crate::surface::{CurveModel, Surface};
use crate::word::{OpaqueBlock, OpaqueKind, TwistWord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperComponent {
    pub name: String,
    pub page: Surface,
    pub monodromy: TwistWord,
    pub boundary_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpineComponent {
    pub name: String,
    pub vertebra: Surface,
    pub boundary_labels: Vec<String>,
    /// Euler number of the circle bundle relative to the chosen section, when known.
    pub framing: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BookRepr", into = "BookRepr")]
pub struct SpinalOpenBook {
    paper: Vec<PaperComponent>,
    spine: Vec<SpineComponent>,
    /// Paper label → spine label.
    matching: BTreeMap<String, String>,
}

fn topo(msg: impl Into<String>) -> Error {
    Error::Topology(msg.into())
}

fn canonical(w: &TwistWord) -> TwistWord {
    TwistWord::Product(w.factors())
}

impl SpinalOpenBook {
    /// Validates the bijection and the symmetric/uniform/simple conditions.
    pub fn new(
        mut paper: Vec<PaperComponent>,
        spine: Vec<SpineComponent>,
        matching: BTreeMap<String, String>,
    ) -> Result<Self> {
        if paper.is_empty() || spine.is_empty() {
            return Err(topo("a book needs at least one paper and one spine component"));
        }
        let mut names = BTreeSet::new();
        for n in paper.iter().map(|p| &p.name).chain(spine.iter().map(|s| &s.name)) {
            if !names.insert(n.as_str()) {
                return Err(topo(format!("duplicate component name `{n}`")));
            }
        }
        let page = paper[0].page;
        let vertebra = spine[0].vertebra;
        if paper.iter().any(|p| !p.page.homeomorphic(&page)) {
            return Err(topo("pages are not all homeomorphic"));
        }
        if spine.iter().any(|s| !s.vertebra.homeomorphic(&vertebra)) {
            return Err(topo("vertebrae are not all homeomorphic"));
        }
        if page.boundary_components as usize != spine.len() {
            return Err(topo(format!(
                "pages have {} boundary circles but there are {} spine components",
                page.boundary_components,
                spine.len()
            )));
        }
        if vertebra.boundary_components as usize != paper.len() {
            return Err(topo(format!(
                "vertebrae have {} boundary circles but there are {} paper components",
                vertebra.boundary_components,
                paper.len()
            )));
        }

        let mut paper_owner = BTreeMap::new();
        for (i, p) in paper.iter().enumerate() {
            if p.boundary_labels.len() != spine.len() {
                return Err(topo(format!("paper `{}` has the wrong number of labels", p.name)));
            }
            for l in &p.boundary_labels {
                if paper_owner.insert(l.as_str(), i).is_some() {
                    return Err(topo(format!("paper label `{l}` used twice")));
                }
            }
        }
        let mut spine_owner = BTreeMap::new();
        for (j, s) in spine.iter().enumerate() {
            if s.boundary_labels.len() != paper.len() {
                return Err(topo(format!("spine `{}` has the wrong number of labels", s.name)));
            }
            for l in &s.boundary_labels {
                if spine_owner.insert(l.as_str(), j).is_some() {
                    return Err(topo(format!("spine label `{l}` used twice")));
                }
            }
        }
        if matching.len() != paper_owner.len() {
            return Err(topo("matching does not cover every paper boundary circle"));
        }
        let mut seen_spine = BTreeSet::new();
        let mut pairs = BTreeSet::new();
        for (pl, sl) in &matching {
            let i = *paper_owner
                .get(pl.as_str())
                .ok_or_else(|| topo(format!("matching uses unknown paper label `{pl}`")))?;
            let j = *spine_owner
                .get(sl.as_str())
                .ok_or_else(|| topo(format!("matching uses unknown spine label `{sl}`")))?;
            if !seen_spine.insert(sl.as_str()) {
                return Err(topo(format!("spine label `{sl}` matched twice")));
            }
            if !pairs.insert((i, j)) {
                return Err(topo(format!(
                    "paper `{}` meets spine `{}` more than once",
                    paper[i].name, spine[j].name
                )));
            }
        }
        for p in &mut paper {
            p.monodromy = canonical(&p.monodromy);
        }
        Ok(SpinalOpenBook {
            paper,
            spine,
            matching,
        })
    }

    pub fn paper(&self) -> &[PaperComponent] {
        &self.paper
    }

    pub fn spine(&self) -> &[SpineComponent] {
        &self.spine
    }

    pub fn matching(&self) -> &BTreeMap<String, String> {
        &self.matching
    }

    pub fn page(&self) -> Surface {
        self.paper[0].page
    }

    pub fn vertebra(&self) -> Surface {
        self.spine[0].vertebra
    }

    /// Sum of the Euler characteristics of all vertebrae.
    pub fn total_vertebra_euler(&self) -> i64 {
        self.spine.iter().map(|s| s.vertebra.euler_characteristic()).sum()
    }

    pub fn paper_index(&self, name: &str) -> Result<usize> {
        self.paper
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| topo(format!("no paper component named `{name}`")))
    }

    /// The spine label matched to the circle of paper `i` on spine `j`, and its position.
    fn interface(&self, i: usize, j: usize) -> (String, usize) {
        let s = &self.spine[j];
        for pl in &self.paper[i].boundary_labels {
            let sl = &self.matching[pl];
            if let Some(pos) = s.boundary_labels.iter().position(|l| l == sl) {
                return (sl.clone(), pos);
            }
        }
        unreachable!("validated books are simple")
    }

    pub fn into_parts(self) -> (Vec<PaperComponent>, Vec<SpineComponent>, BTreeMap<String, String>) {
        (self.paper, self.spine, self.matching)
    }
}

/// The open book `(page, word)` viewed as a spinal open book: one paper
/// component and one disk vertebra per binding component.
pub fn boundary_of_disk_fibration(word: &TwistWord, page: Surface) -> Result<SpinalOpenBook> {
    if page.is_closed() {
        return Err(topo("the page of an open book must have boundary"));
    }
    if !word.is_positive() {
        return Err(Error::domain("monodromy of a Lefschetz fibration over the disk must be positive"));
    }
    let nb = page.boundary_components as usize;
    let mut matching = BTreeMap::new();
    let mut spine = Vec::with_capacity(nb);
    let mut labels = Vec::with_capacity(nb);
    for j in 0..nb {
        let (pl, sl) = (format!("p0.{j}"), format!("s{j}.0"));
        matching.insert(pl.clone(), sl.clone());
        labels.push(pl);
        spine.push(SpineComponent {
            name: format!("s{j}"),
            vertebra: Surface::with_boundary(0, 1),
            boundary_labels: vec![sl],
            framing: None,
        });
    }
    SpinalOpenBook::new(
        vec![PaperComponent {
            name: "p0".into(),
            page,
            monodromy: word.clone(),
            boundary_labels: labels,
        }],
        spine,
        matching,
    )
}

// ---------------------------------------------------------------------------
// Tapping and folding

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpineArc {
    /// Spine labels of the two endpoints' boundary circles.
    pub ends: (String, String),
    pub same_boundary: bool,
}

/// Where and under which name a same-circle tap splits a paper component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    /// Factor index at which the monodromy is cut; factors before it stay.
    pub at: usize,
    pub new_component: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TapSpec {
    /// One arc per spine component, in spine order.
    pub spine_arcs: Vec<SpineArc>,
    /// Paper components containing `F_1` and `F_2`; equal for a split.
    pub page_pair: (String, String),
    /// Name of the identification `h: F_1 → F_2`.
    pub gluing: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSpec>,
}

impl TapSpec {
    /// The merge tap joining paper components `a` and `b` of `book`.
    pub fn merge(book: &SpinalOpenBook, a: &str, b: &str, gluing: &str) -> Result<TapSpec> {
        let (ia, ib) = (book.paper_index(a)?, book.paper_index(b)?);
        let spine_arcs = (0..book.spine.len())
            .map(|j| SpineArc {
                ends: (book.interface(ia, j).0, book.interface(ib, j).0),
                same_boundary: false,
            })
            .collect();
        Ok(TapSpec {
            spine_arcs,
            page_pair: (a.into(), b.into()),
            gluing: gluing.into(),
            split: None,
        })
    }

    /// The split tap cutting paper component `a` after `at` factors.
    pub fn split(
        book: &SpinalOpenBook,
        a: &str,
        at: usize,
        new_component: &str,
        gluing: &str,
    ) -> Result<TapSpec> {
        let ia = book.paper_index(a)?;
        let spine_arcs = (0..book.spine.len())
            .map(|j| {
                let l = book.interface(ia, j).0;
                SpineArc {
                    ends: (l.clone(), l),
                    same_boundary: true,
                }
            })
            .collect();
        Ok(TapSpec {
            spine_arcs,
            page_pair: (a.into(), a.into()),
            gluing: gluing.into(),
            split: Some(SplitSpec {
                at,
                new_component: new_component.into(),
            }),
        })
    }
}

/// Weinstein handles of the Stein cobordism realized by one tap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CobordismAccount {
    pub one_handles: u64,
    pub two_handles: u64,
}

impl CobordismAccount {
    /// One 1-handle and `b_1(S)` 2-handles, `S` the closed tap surface
    /// `F_1 ∪ annuli ∪ −F_2` with `χ(S) = χ(F_1) + χ(F_2)`.
    pub fn for_pages(f1: Surface, f2: Surface) -> Result<Self> {
        let b1 = 2 - f1.euler_characteristic() - f2.euler_characteristic();
        let two_handles =
            u64::try_from(b1).map_err(|_| topo("tap surface has negative first Betti number"))?;
        Ok(CobordismAccount {
            one_handles: 1,
            two_handles,
        })
    }
}

/// One interface torus removed by a merge, recorded so that the fold can put
/// it back in place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceRecord {
    pub paper_label: String,
    pub spine: usize,
    pub spine_label: String,
    pub spine_position: usize,
}

/// Data describing a fold, the inverse of a tap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FoldSpec {
    /// Cuts `component` into two along a factor boundary; every vertebra
    /// gains a boundary circle.
    Unmerge {
        component: String,
        split_at: usize,
        gluing: String,
        new_component: String,
        new_position: usize,
        /// In the order of the new component's boundary labels.
        interfaces: Vec<InterfaceRecord>,
        /// The split-off factors are wrapped as `h⁻¹ … h` and the wrapper is removed.
        wrapped: bool,
    },
    /// Joins `second` onto `first`; every vertebra gains a handle.
    Join {
        first: String,
        second: String,
        gluing: String,
        /// The second monodromy is wrapped as `h … h⁻¹` and the wrapper is removed.
        wrapped: bool,
    },
}

fn gluing_word(label: &str) -> TwistWord {
    TwistWord::Opaque(OpaqueBlock::new(label, OpaqueKind::UnknownElement))
}

fn gluing_inverse(label: &str) -> TwistWord {
    gluing_word(label).inverse()
}

/// Strips `first … last` from `v` if present.
fn strip<'a>(v: &'a [TwistWord], first: &TwistWord, last: &TwistWord) -> Option<&'a [TwistWord]> {
    if v.len() >= 2 && &v[0] == first && &v[v.len() - 1] == last {
        Some(&v[1..v.len() - 1])
    } else {
        None
    }
}

fn wrap(first: TwistWord, mid: &[TwistWord], last: TwistWord) -> Vec<TwistWord> {
    let mut out = Vec::with_capacity(mid.len() + 2);
    out.push(first);
    out.extend_from_slice(mid);
    out.push(last);
    out
}

/// Cuts the book along the tap surface determined by `spec` and folds it.
///
/// Returns the new book, the handle account of the cobordism, and the fold
/// data that undoes the tap.
pub fn spinal_tap(
    book: &SpinalOpenBook,
    spec: &TapSpec,
) -> Result<(SpinalOpenBook, CobordismAccount, FoldSpec)> {
    if spec.gluing.is_empty() {
        return Err(topo("empty gluing label"));
    }
    if spec.spine_arcs.len() != book.spine.len() {
        return Err(topo(format!(
            "tap needs one arc per spine component ({}), got {}",
            book.spine.len(),
            spec.spine_arcs.len()
        )));
    }
    let (a, b) = &spec.page_pair;
    let ia = book.paper_index(a)?;
    let ib = book.paper_index(b)?;
    let account = CobordismAccount::for_pages(book.paper[ia].page, book.paper[ib].page)?;
    if ia == ib {
        let split = spec
            .split
            .as_ref()
            .ok_or_else(|| topo("a same-circle tap needs split data"))?;
        let (out, fold) = tap_split(book, spec, ia, split)?;
        Ok((out, account, fold))
    } else {
        if spec.split.is_some() {
            return Err(topo("split data given for a tap joining two paper components"));
        }
        let (out, fold) = tap_merge(book, spec, ia, ib)?;
        Ok((out, account, fold))
    }
}

fn tap_merge(
    book: &SpinalOpenBook,
    spec: &TapSpec,
    ia: usize,
    ib: usize,
) -> Result<(SpinalOpenBook, FoldSpec)> {
    let mut removed = Vec::new();
    for (j, arc) in spec.spine_arcs.iter().enumerate() {
        let (la, _) = book.interface(ia, j);
        let (lb, pb) = book.interface(ib, j);
        let ok = (arc.ends == (la.clone(), lb.clone()) || arc.ends == (lb.clone(), la.clone()))
            && !arc.same_boundary;
        if !ok {
            return Err(topo(format!(
                "arc on spine `{}` must join `{la}` and `{lb}`",
                book.spine[j].name
            )));
        }
        removed.push((j, lb, pb));
    }

    let h = &spec.gluing;
    let mut factors = book.paper[ia].monodromy.factors();
    let split_at = factors.len();
    factors.push(gluing_inverse(h));
    factors.extend(book.paper[ib].monodromy.factors());
    factors.push(gluing_word(h));

    let pb = &book.paper[ib];
    let interfaces = pb
        .boundary_labels
        .iter()
        .map(|pl| {
            let sl = &book.matching[pl];
            let &(j, _, pos) = removed.iter().find(|r| &r.1 == sl).expect("label is on a spine");
            InterfaceRecord {
                paper_label: pl.clone(),
                spine: j,
                spine_label: sl.clone(),
                spine_position: pos,
            }
        })
        .collect();

    let mut paper = book.paper.clone();
    paper[ia].monodromy = TwistWord::Product(factors);
    let gone = paper.remove(ib);
    let mut matching = book.matching.clone();
    for pl in &gone.boundary_labels {
        matching.remove(pl);
    }
    let mut spine = book.spine.clone();
    for (j, _, pos) in &removed {
        let s = &mut spine[*j];
        s.boundary_labels.remove(*pos);
        s.vertebra.boundary_components -= 1;
    }
    let fold = FoldSpec::Unmerge {
        component: book.paper[ia].name.clone(),
        split_at,
        gluing: h.clone(),
        new_component: gone.name,
        new_position: ib,
        interfaces,
        wrapped: true,
    };
    Ok((SpinalOpenBook::new(paper, spine, matching)?, fold))
}

fn tap_split(
    book: &SpinalOpenBook,
    spec: &TapSpec,
    ia: usize,
    split: &SplitSpec,
) -> Result<(SpinalOpenBook, FoldSpec)> {
    if book.vertebra().genus == 0 {
        return Err(topo(
            "a same-circle arc on a planar vertebra separates it; spine components must stay connected",
        ));
    }
    let new = &split.new_component;
    if book.paper.iter().any(|p| &p.name == new) || book.spine.iter().any(|s| &s.name == new) {
        return Err(topo(format!("component name `{new}` already in use")));
    }
    let mut positions = Vec::new();
    for (j, arc) in spec.spine_arcs.iter().enumerate() {
        let (la, pa) = book.interface(ia, j);
        if arc.ends != (la.clone(), la.clone()) || !arc.same_boundary {
            return Err(topo(format!(
                "arc on spine `{}` must have both ends on `{la}`",
                book.spine[j].name
            )));
        }
        positions.push(pa);
    }
    let factors = book.paper[ia].monodromy.factors();
    if split.at > factors.len() {
        return Err(Error::IndexOutOfRange {
            what: "monodromy factor",
            index: split.at,
            len: factors.len(),
        });
    }
    let h = &spec.gluing;
    let (left, right) = factors.split_at(split.at);
    let (second, wrapped) = match strip(right, &gluing_inverse(h), &gluing_word(h)) {
        Some(mid) => (mid.to_vec(), false),
        None => (wrap(gluing_word(h), right, gluing_inverse(h)), true),
    };

    let mut matching = book.matching.clone();
    let mut labels = Vec::new();
    let mut spine = book.spine.clone();
    for (j, s) in spine.iter_mut().enumerate() {
        let pl = format!("{new}.{j}");
        let sl = format!("{}.{new}", s.name);
        if matching.contains_key(&pl) || book.spine.iter().any(|t| t.boundary_labels.contains(&sl)) {
            return Err(topo(format!("label `{pl}` or `{sl}` already in use")));
        }
        s.boundary_labels.insert(positions[j] + 1, sl.clone());
        s.vertebra.genus -= 1;
        s.vertebra.boundary_components += 1;
        matching.insert(pl.clone(), sl);
        labels.push(pl);
    }
    let mut paper = book.paper.clone();
    paper[ia].monodromy = TwistWord::Product(left.to_vec());
    paper.insert(
        ia + 1,
        PaperComponent {
            name: new.clone(),
            page: book.paper[ia].page,
            monodromy: TwistWord::Product(second),
            boundary_labels: labels,
        },
    );
    let fold = FoldSpec::Join {
        first: book.paper[ia].name.clone(),
        second: new.clone(),
        gluing: h.clone(),
        wrapped,
    };
    Ok((SpinalOpenBook::new(paper, spine, matching)?, fold))
}

/// Re-glues a book along the data of `spec`; the inverse of [`spinal_tap`].
pub fn fold(book: &SpinalOpenBook, spec: &FoldSpec) -> Result<SpinalOpenBook> {
    match spec {
        FoldSpec::Unmerge {
            component,
            split_at,
            gluing,
            new_component,
            new_position,
            interfaces,
            wrapped,
        } => fold_unmerge(
            book,
            component,
            *split_at,
            gluing,
            new_component,
            *new_position,
            interfaces,
            *wrapped,
        ),
        FoldSpec::Join {
            first,
            second,
            gluing,
            wrapped,
        } => fold_join(book, first, second, gluing, *wrapped),
    }
}

#[allow(clippy::too_many_arguments)]
fn fold_unmerge(
    book: &SpinalOpenBook,
    component: &str,
    split_at: usize,
    gluing: &str,
    new_component: &str,
    new_position: usize,
    interfaces: &[InterfaceRecord],
    wrapped: bool,
) -> Result<SpinalOpenBook> {
    let ia = book.paper_index(component)?;
    if new_component == component {
        return Err(topo("fold needs two distinct paper components"));
    }
    if interfaces.len() != book.spine.len() {
        return Err(topo("fold needs one interface per spine component"));
    }
    let factors = book.paper[ia].monodromy.factors();
    if split_at > factors.len() {
        return Err(Error::IndexOutOfRange {
            what: "monodromy factor",
            index: split_at,
            len: factors.len(),
        });
    }
    let (left, right) = factors.split_at(split_at);
    let second = if wrapped {
        strip(right, &gluing_inverse(gluing), &gluing_word(gluing))
            .ok_or_else(|| topo(format!("monodromy of `{component}` lacks the `{gluing}` markers")))?
            .to_vec()
    } else {
        wrap(gluing_word(gluing), right, gluing_inverse(gluing))
    };

    let mut spine = book.spine.clone();
    let mut matching = book.matching.clone();
    let mut covered = BTreeSet::new();
    // insert in position order per spine so recorded positions are reproduced
    let mut order: Vec<&InterfaceRecord> = interfaces.iter().collect();
    order.sort_by_key(|r| (r.spine, r.spine_position));
    for r in order {
        if r.paper_label == r.spine_label {
            return Err(topo(format!("label `{}` used on both sides", r.paper_label)));
        }
        let s = spine.get_mut(r.spine).ok_or(Error::IndexOutOfRange {
            what: "spine component",
            index: r.spine,
            len: book.spine.len(),
        })?;
        if !covered.insert(r.spine) {
            return Err(topo(format!("spine {} listed twice", r.spine)));
        }
        if r.spine_position > s.boundary_labels.len() {
            return Err(Error::IndexOutOfRange {
                what: "spine boundary position",
                index: r.spine_position,
                len: s.boundary_labels.len(),
            });
        }
        if matching.contains_key(&r.paper_label) || s.boundary_labels.contains(&r.spine_label) {
            return Err(topo(format!("label `{}` already in use", r.paper_label)));
        }
        s.boundary_labels.insert(r.spine_position, r.spine_label.clone());
        s.vertebra.boundary_components += 1;
        matching.insert(r.paper_label.clone(), r.spine_label.clone());
    }
    let mut paper = book.paper.clone();
    paper[ia].monodromy = TwistWord::Product(left.to_vec());
    if new_position > paper.len() {
        return Err(Error::IndexOutOfRange {
            what: "paper position",
            index: new_position,
            len: paper.len(),
        });
    }
    paper.insert(
        new_position,
        PaperComponent {
            name: new_component.into(),
            page: book.paper[ia].page,
            monodromy: TwistWord::Product(second),
            boundary_labels: interfaces.iter().map(|r| r.paper_label.clone()).collect(),
        },
    );
    SpinalOpenBook::new(paper, spine, matching)
}

fn fold_join(
    book: &SpinalOpenBook,
    first: &str,
    second: &str,
    gluing: &str,
    wrapped: bool,
) -> Result<SpinalOpenBook> {
    if first == second {
        return Err(topo("fold needs two distinct paper components"));
    }
    let (i1, i2) = (book.paper_index(first)?, book.paper_index(second)?);
    if !book.paper[i1].page.homeomorphic(&book.paper[i2].page) {
        return Err(topo("folded pages are not homeomorphic"));
    }
    let f2 = book.paper[i2].monodromy.factors();
    let tail = if wrapped {
        strip(&f2, &gluing_word(gluing), &gluing_inverse(gluing))
            .ok_or_else(|| topo(format!("monodromy of `{second}` lacks the `{gluing}` markers")))?
            .to_vec()
    } else {
        wrap(gluing_inverse(gluing), &f2, gluing_word(gluing))
    };
    let mut paper = book.paper.clone();
    let mut factors = paper[i1].monodromy.factors();
    factors.extend(tail);
    paper[i1].monodromy = TwistWord::Product(factors);
    let gone = paper.remove(i2);
    let mut matching = book.matching.clone();
    let mut spine = book.spine.clone();
    for pl in &gone.boundary_labels {
        let sl = matching.remove(pl).expect("validated matching");
        for s in spine.iter_mut() {
            if let Some(pos) = s.boundary_labels.iter().position(|l| *l == sl) {
                s.boundary_labels.remove(pos);
                s.vertebra.boundary_components -= 1;
                s.vertebra.genus += 1;
            }
        }
    }
    SpinalOpenBook::new(paper, spine, matching)
}

// ---------------------------------------------------------------------------
// Framings

/// A dividing slope `(-p, q)` on an interface torus, `p, q > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p <= 0 || q <= 0 {
            return Err(topo(format!("dividing slope (-{p}, {q}) needs p, q > 0")));
        }
        Ok(Slope { p, q })
    }

    pub fn as_pair(&self) -> (i64, i64) {
        (-self.p, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedSpinalOpenBook {
    underlying: SpinalOpenBook,
    framings: Vec<Vec<i64>>,
    /// Keyed by paper label of the interface circle.
    slopes: BTreeMap<String, Slope>,
}

impl FramedSpinalOpenBook {
    /// `framings[j]` holds degrees over a basis of `H_1` of vertebra `j`.
    pub fn new(
        underlying: SpinalOpenBook,
        framings: Vec<Vec<i64>>,
        slopes: BTreeMap<String, Slope>,
    ) -> Result<Self> {
        if framings.len() != underlying.spine.len() {
            return Err(topo("one framing vector per spine component required"));
        }
        let b1 = underlying.vertebra().first_betti() as usize;
        if let Some(f) = framings.iter().find(|f| f.len() != b1) {
            return Err(Error::Dimension {
                expected: b1,
                found: f.len(),
            });
        }
        if slopes.len() != underlying.matching.len()
            || slopes.keys().any(|k| !underlying.matching.contains_key(k))
        {
            return Err(topo("one slope per interface torus required"));
        }
        for s in slopes.values() {
            Slope::new(s.p, s.q)?;
        }
        Ok(FramedSpinalOpenBook {
            underlying,
            framings,
            slopes,
        })
    }

    /// Zero framings and slope `(-1, 1)` everywhere.
    pub fn standard(underlying: SpinalOpenBook) -> Self {
        let b1 = underlying.vertebra().first_betti() as usize;
        let framings = vec![vec![0; b1]; underlying.spine.len()];
        let slopes = underlying
            .matching
            .keys()
            .map(|k| (k.clone(), Slope { p: 1, q: 1 }))
            .collect();
        FramedSpinalOpenBook {
            underlying,
            framings,
            slopes,
        }
    }

    pub fn underlying(&self) -> &SpinalOpenBook {
        &self.underlying
    }

    pub fn framings(&self) -> &[Vec<i64>] {
        &self.framings
    }

    pub fn slopes(&self) -> &BTreeMap<String, Slope> {
        &self.slopes
    }
}

/// Changes the section of spine component `spine_index` by a map to `S^1` of
/// degree `delta` along `basis_direction`. The supported contact structure is
/// unchanged up to isotopy, so only the recorded degrees move.
pub fn change_framing(
    fb: &FramedSpinalOpenBook,
    spine_index: usize,
    basis_direction: usize,
    delta: i64,
) -> Result<FramedSpinalOpenBook> {
    let n = fb.framings.len();
    let row = fb.framings.get(spine_index).ok_or(Error::IndexOutOfRange {
        what: "spine component",
        index: spine_index,
        len: n,
    })?;
    let len = row.len();
    let entry = row.get(basis_direction).ok_or(Error::IndexOutOfRange {
        what: "vertebra homology direction",
        index: basis_direction,
        len,
    })?;
    let updated = entry
        .checked_add(delta)
        .ok_or(Error::Overflow("framing degree"))?;
    let mut out = fb.clone();
    out.framings[spine_index][basis_direction] = updated;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Total monodromy and certificates

/// `Φ = φ_1^{i_1} ∘ ⋯ ∘ φ_n^{i_n}` with `φ^i = i ∘ φ ∘ i⁻¹`.
///
/// `identifications[k]` maps the page of paper component `k` to a common
/// model; identity words are not written out.
pub fn total_monodromy(book: &SpinalOpenBook, identifications: &[TwistWord]) -> Result<TwistWord> {
    if identifications.len() != book.paper.len() {
        return Err(topo(format!(
            "expected {} identifications, got {}",
            book.paper.len(),
            identifications.len()
        )));
    }
    let factors = book
        .paper
        .iter()
        .zip(identifications)
        .map(|(p, i)| {
            if i.is_identity_literal() {
                p.monodromy.clone()
            } else {
                p.monodromy.clone().conjugate_by(i.clone())
            }
        })
        .collect::<Vec<_>>();
    Ok(if factors.len() == 1 {
        factors.into_iter().next().expect("one factor")
    } else {
        TwistWord::Product(factors)
    })
}

fn is_commutator(w: &TwistWord) -> bool {
    match w {
        TwistWord::Commutator(..) => true,
        TwistWord::Opaque(b) => b.kind == OpaqueKind::Commutator,
        _ => false,
    }
}

/// Checks a candidate `Φ = (positive twists) · [a_1, b_1] ⋯ [a_k, b_k]` with
/// `k < h` in `Sp(2g, Z)`. Nothing is searched for.
pub fn check_positive_coset_certificate(
    phi: &TwistWord,
    twists: &TwistWord,
    commutators: &[TwistWord],
    h: u32,
    model: &CurveModel,
) -> Result<Verdict> {
    if commutators.len() >= h as usize {
        return Err(Error::domain(format!(
            "certificate uses {} commutators, needs fewer than {h}",
            commutators.len()
        )));
    }
    if !twists.is_positive() {
        return Err(Error::domain("twist part of the certificate is not positive"));
    }
    if let Some(c) = commutators.iter().find(|c| !is_commutator(c)) {
        return Err(Error::domain(format!("`{c}` is not a commutator")));
    }
    let mut rhs = vec![twists.clone()];
    rhs.extend(commutators.iter().cloned());
    certify_relation(phi, &TwistWord::Product(rhs), model)
}

// ---------------------------------------------------------------------------
// Serialization

#[derive(Serialize, Deserialize)]
struct PaperRepr {
    name: String,
    page: Surface,
    monodromy: String,
    boundary_labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SpineRepr {
    name: String,
    vertebra: Surface,
    boundary_labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    framing: Option<i64>,
}

#[derive(Serialize, Deserialize)]
struct BookRepr {
    paper: Vec<PaperRepr>,
    spine: Vec<SpineRepr>,
    matching: BTreeMap<String, String>,
}

impl From<SpinalOpenBook> for BookRepr {
    fn from(b: SpinalOpenBook) -> Self {
        BookRepr {
            paper: b
                .paper
                .into_iter()
                .map(|p| PaperRepr {
                    name: p.name,
                    page: p.page,
                    monodromy: print_word(&p.monodromy),
                    boundary_labels: p.boundary_labels,
                })
                .collect(),
            spine: b
                .spine
                .into_iter()
                .map(|s| SpineRepr {
                    name: s.name,
                    vertebra: s.vertebra,
                    boundary_labels: s.boundary_labels,
                    framing: s.framing,
                })
                .collect(),
            matching: b.matching,
        }
    }
}

impl TryFrom<BookRepr> for SpinalOpenBook {
    type Error = Error;

    fn try_from(r: BookRepr) -> Result<Self> {
        let paper = r
            .paper
            .into_iter()
            .map(|p| {
                Ok(PaperComponent {
                    name: p.name,
                    page: p.page,
                    monodromy: parse_word(&p.monodromy)?,
                    boundary_labels: p.boundary_labels,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let spine = r
            .spine
            .into_iter()
            .map(|s| SpineComponent {
                name: s.name,
                vertebra: s.vertebra,
                boundary_labels: s.boundary_labels,
                framing: s.framing,
            })
            .collect();
        SpinalOpenBook::new(paper, spine, r.matching)
    }
}
