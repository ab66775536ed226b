//! Plumbing graphs of circle bundles over surfaces and the first homology of
//! the plumbed 3-manifold.
//!
//! `H_1` is read from the standard presentation: each vertex contributes the
//! `2·genus` classes of its base surface freely, each independent cycle of the
//! graph contributes a free class, and the fiber classes are presented by the
//! linking matrix. On trees the cycle term vanishes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snf::invariant_factors;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub genus: u32,
    pub euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub free_rank: u64,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<i64>,
}

fn graph_err(msg: impl Into<String>) -> Error {
    Error::Graph(msg.into())
}

impl PlumbingGraph {
    /// Edges are unordered pairs; repeated pairs are multi-edges.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(graph_err("a plumbing graph needs at least one vertex"));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::IndexOutOfRange {
                        what: "vertex",
                        index: v,
                        len: n,
                    });
                }
            }
            if a == b {
                return Err(graph_err(format!("self-loop at vertex {a}")));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        if (0..n).any(|v| find(&mut parent, v) != root) {
            return Err(graph_err("graph is not connected"));
        }
        Ok(PlumbingGraph { vertices, edges })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// First Betti number of the underlying graph.
    pub fn cycle_rank(&self) -> u64 {
        (self.edges.len() + 1 - self.vertices.len()) as u64
    }

    /// Reorders vertices: vertex `i` of the result is vertex `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.vertices.len();
        let mut inv = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: order.len(),
            });
        }
        for (i, &o) in order.iter().enumerate() {
            if o >= n || inv[o] != usize::MAX {
                return Err(graph_err("not a permutation"));
            }
            inv[o] = i;
        }
        PlumbingGraph::new(
            order.iter().map(|&o| self.vertices[o]).collect(),
            self.edges.iter().map(|&(a, b)| (inv[a], inv[b])).collect(),
        )
    }
}

/// Bounds on the parameters of `Y_{g,h,n}`.
fn check_params(g: u32, h: u32, n: i64) -> Result<()> {
    if g < 2 {
        return Err(Error::domain(format!("fiber genus must be >= 2, got {g}")));
    }
    if h < 1 {
        return Err(Error::domain(format!("base genus must be >= 1, got {h}")));
    }
    if n > 2 * i64::from(h) - 2 {
        return Err(Error::domain(format!("n = {n} exceeds the bound 2h-2 = {}", 2 * i64::from(h) - 2)));
    }
    Ok(())
}

/// The circle bundle over `Σ_g` of Euler number 0 plumbed once with the one
/// over `Σ_h` of Euler number `n`.
pub fn build_y(g: u32, h: u32, n: i64) -> Result<PlumbingGraph> {
    check_params(g, h, n)?;
    PlumbingGraph::new(
        vec![Vertex { genus: g, euler: 0 }, Vertex { genus: h, euler: n }],
        vec![(0, 1)],
    )
}

/// `k` top vertices `(g, 0)` and `l` bottom vertices `(h, r_i)`, every top
/// vertex plumbed once with every bottom vertex.
pub fn build_generalized(k: usize, l: usize, g: u32, h: u32, framings: &[i64]) -> Result<PlumbingGraph> {
    if k == 0 || l == 0 {
        return Err(Error::domain("k and l must be positive"));
    }
    if framings.len() != l {
        return Err(Error::Dimension {
            expected: l,
            found: framings.len(),
        });
    }
    let mut vertices = vec![Vertex { genus: g, euler: 0 }; k];
    vertices.extend(framings.iter().map(|&r| Vertex { genus: h, euler: r }));
    let edges = (0..k).flat_map(|i| (0..l).map(move |j| (i, k + j))).collect();
    PlumbingGraph::new(vertices, edges)
}

/// Euler numbers on the diagonal, edge multiplicities off it.
pub fn linking_matrix(p: &PlumbingGraph) -> Vec<Vec<i64>> {
    let n = p.vertices.len();
    let mut m = vec![vec![0i64; n]; n];
    for (i, v) in p.vertices.iter().enumerate() {
        m[i][i] = v.euler;
    }
    for &(a, b) in &p.edges {
        m[a][b] += 1;
        m[b][a] += 1;
    }
    m
}

pub fn first_homology(p: &PlumbingGraph) -> Result<HomologyResult> {
    let l = linking_matrix(p);
    let factors = invariant_factors(&l)?;
    let corank = (p.vertices.len() - factors.len()) as u64;
    let base: u64 = p.vertices.iter().map(|v| 2 * u64::from(v.genus)).sum();
    Ok(HomologyResult {
        free_rank: base + p.cycle_rank() + corank,
        torsion: factors.into_iter().filter(|&d| d > 1).collect(),
    })
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<Vertex>,
    edges: Vec<[usize; 2]>,
    /// Euler numbers again, in vertex order, for surgery-diagram tools.
    framings: Vec<i64>,
}

impl From<PlumbingGraph> for GraphRepr {
    fn from(p: PlumbingGraph) -> Self {
        GraphRepr {
            framings: p.vertices.iter().map(|v| v.euler).collect(),
            vertices: p.vertices,
            edges: p.edges.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl TryFrom<GraphRepr> for PlumbingGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        if r.framings.len() != r.vertices.len()
            || r.framings.iter().zip(&r.vertices).any(|(f, v)| *f != v.euler)
        {
            return Err(graph_err("framings disagree with vertex Euler numbers"));
        }
        PlumbingGraph::new(r.vertices, r.edges.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_graphs() {
        let y = build_y(2, 1, 0).unwrap();
        assert_eq!(y.vertices(), &[Vertex { genus: 2, euler: 0 }, Vertex { genus: 1, euler: 0 }]);
        assert_eq!(y.edges(), &[(0, 1)]);
        assert_eq!(build_y(2, 3, 2).unwrap().vertices()[1], Vertex { genus: 3, euler: 2 });
        assert!(build_y(2, 1, 1).is_err());
        assert_eq!(linking_matrix(&build_y(3, 2, -4).unwrap()), vec![vec![0, 1], vec![1, -4]]);
    }

    #[test]
    fn generalized_graphs() {
        assert_eq!(build_generalized(1, 1, 2, 1, &[-1]).unwrap(), build_y(2, 1, -1).unwrap());
        let p = build_generalized(2, 1, 2, 1, &[0]).unwrap();
        assert_eq!((p.vertices().len(), p.edges().len()), (3, 2));
        assert_eq!(
            linking_matrix(&p),
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 0]]
        );
        let star = build_generalized(1, 3, 2, 1, &[0, -1, -2]).unwrap();
        assert_eq!(star.vertices()[3].euler, -2);
        assert!(build_generalized(1, 2, 2, 1, &[0]).is_err());
    }

    #[test]
    fn homology_examples() {
        for n in -5..=0 {
            let h = first_homology(&build_y(2, 1, n).unwrap()).unwrap();
            assert_eq!(h, HomologyResult { free_rank: 6, torsion: vec![] });
        }
        let lens = PlumbingGraph::new(vec![Vertex { genus: 0, euler: 7 }], vec![]).unwrap();
        assert_eq!(first_homology(&lens).unwrap(), HomologyResult { free_rank: 0, torsion: vec![7] });
        let trivial = PlumbingGraph::new(vec![Vertex { genus: 3, euler: 0 }], vec![]).unwrap();
        assert_eq!(first_homology(&trivial).unwrap().free_rank, 7);
    }

    #[test]
    fn cycles_add_free_rank() {
        // two sphere vertices joined twice: one loop in the graph
        let p = PlumbingGraph::new(
            vec![Vertex { genus: 0, euler: 2 }, Vertex { genus: 0, euler: 2 }],
            vec![(0, 1), (0, 1)],
        )
        .unwrap();
        assert_eq!(p.cycle_rank(), 1);
        // linking matrix [[2,2],[2,2]] has factors [2]
        assert_eq!(first_homology(&p).unwrap(), HomologyResult { free_rank: 2, torsion: vec![2] });
    }

    #[test]
    fn invalid_graphs() {
        let v = Vertex { genus: 1, euler: 0 };
        assert!(PlumbingGraph::new(vec![], vec![]).is_err());
        assert!(PlumbingGraph::new(vec![v, v], vec![]).is_err());
        assert!(PlumbingGraph::new(vec![v, v], vec![(0, 0), (0, 1)]).is_err());
        assert!(PlumbingGraph::new(vec![v], vec![(0, 1)]).is_err());
    }

    #[test]
    fn json_shape() {
        let y = build_y(2, 1, -1).unwrap();
        let v = serde_json::to_value(&y).unwrap();
        assert_eq!(v["edges"], serde_json::json!([[0, 1]]));
        assert_eq!(v["framings"], serde_json::json!([0, -1]));
        assert_eq!(serde_json::from_value::<PlumbingGraph>(v).unwrap(), y);
    }
}
