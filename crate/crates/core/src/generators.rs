//! Graph families used throughout: the universal graphs `U_{h,d}`, a few
//! named families, and seeded random graphs.
//!
//! Random graphs use Xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). An Erdős–Rényi sample visits the
//! pairs `u < v` in lexicographic order and keeps a pair when the next
//! `f64` draw is below `p`, so corpora are reproducible in any language
//! with the same generator.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::decomp::RootedForest;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// The seeded generator behind every random corpus.
pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Number of vertices of one complete `d`-ary tree of vertex-height `h`.
pub(crate) fn tree_size(h: usize, d: usize) -> usize {
    (0..h).map(|i| d.pow(i as u32)).sum()
}

/// The forest of `d` complete `d`-ary trees of vertex-height `h` whose
/// closure is `U_{h,d}`. Trees are numbered consecutively, each in
/// breadth-first order.
pub fn u_forest(h: usize, d: usize) -> Result<RootedForest> {
    if d == 0 {
        return Err(Error::input("d must be positive"));
    }
    let size = tree_size(h, d);
    let n = if h == 0 { 0 } else { d * size };
    if n > crate::MAX_VERTICES {
        return Err(Error::input(format!(
            "U_{{{h},{d}}} has {n} vertices, more than supported"
        )));
    }
    let mut parent = vec![None; n];
    for t in 0..if h == 0 { 0 } else { d } {
        let base = t * size;
        for j in 1..size {
            parent[base + j] = Some(base + (j - 1) / d);
        }
    }
    RootedForest::new(parent)
}

/// `U_{h,d}`: the closure of `d` disjoint complete `d`-ary trees of
/// vertex-height `h`. `U_{0,d}` is the empty graph.
pub fn u_graph(h: usize, d: usize) -> Result<Graph> {
    Graph::closure_of_rooted_forest(&u_forest(h, d)?)
}

/// Named graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `path n`: vertices `0..n` in order.
    Path,
    /// `cycle n`, `n >= 3`.
    Cycle,
    /// `complete n`.
    Complete,
    /// `grid rows cols`, numbered row-major.
    Grid,
    /// `star leaves`: centre 0 and leaves `1..=leaves`.
    Star,
    /// `binary_tree_closure h`: closure of a complete binary tree of
    /// vertex-height `h`, root first.
    BinaryTreeClosure,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Path,
        Family::Cycle,
        Family::Complete,
        Family::Grid,
        Family::Star,
        Family::BinaryTreeClosure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Grid => "grid",
            Family::Star => "star",
            Family::BinaryTreeClosure => "binary_tree_closure",
        }
    }

    fn arity(self) -> usize {
        if self == Family::Grid {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::input(format!("unknown family {s:?}")))
    }
}

/// Builds a member of a named family.
pub fn family(f: Family, params: &[usize]) -> Result<Graph> {
    if params.len() != f.arity() {
        return Err(Error::input(format!("{f} takes {} parameter(s)", f.arity())));
    }
    if params.contains(&0) {
        return Err(Error::input("size parameters must be positive"));
    }
    let n = params[0];
    match f {
        Family::Path => Graph::new(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()),
        Family::Cycle => {
            if n < 3 {
                return Err(Error::input("cycles need at least 3 vertices"));
            }
            Graph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
        }
        Family::Complete => Graph::complete(n),
        Family::Grid => {
            let (r, c) = (params[0], params[1]);
            let mut edges = Vec::new();
            for i in 0..r {
                for j in 0..c {
                    let v = i * c + j;
                    if j + 1 < c {
                        edges.push((v, v + 1));
                    }
                    if i + 1 < r {
                        edges.push((v, v + c));
                    }
                }
            }
            Graph::new(r * c, &edges)
        }
        Family::Star => Graph::new(n + 1, &(1..=n).map(|i| (0, i)).collect::<Vec<_>>()),
        Family::BinaryTreeClosure => {
            let size = tree_size(n, 2);
            if size > crate::MAX_VERTICES {
                return Err(Error::input("tree too large"));
            }
            let parent = (0..size)
                .map(|v| if v == 0 { None } else { Some((v - 1) / 2) })
                .collect();
            Graph::closure_of_rooted_forest(&RootedForest::new(parent)?)
        }
    }
}

/// Erdős–Rényi `G(n, p)`, deterministic per seed.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input("p must lie in [0, 1]"));
    }
    let mut g = Graph::empty(n)?;
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    g = g.with_edges(&edges);
    Ok(g)
}

/// Random recursive tree: vertex `v > 0` picks a uniform parent in `0..v`.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    let mut r = rng(seed);
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (r.gen_range(0..v), v)).collect();
    Graph::new(n, &edges)
}

/// Random rooted forest on `n` vertices: vertex `v` becomes a root with
/// probability `root_p`, otherwise it picks a uniform parent in `0..v`.
pub fn random_forest(n: usize, root_p: f64, seed: u64) -> Result<RootedForest> {
    let mut r = rng(seed);
    let parent = (0..n)
        .map(|v| {
            if v == 0 || r.gen::<f64>() < root_p {
                None
            } else {
                Some(r.gen_range(0..v))
            }
        })
        .collect();
    RootedForest::new(parent)
}

/// Random graph of treedepth at most `h`: a random rooted forest of
/// vertex-height at most `h` (vertex `v` joins a uniform earlier vertex of
/// depth below `h - 1`, or starts a new tree), whose tree edges are kept and
/// whose other ancestor pairs become edges with probability `p`.
pub fn random_treedepth_graph(n: usize, h: usize, p: f64, seed: u64) -> Result<Graph> {
    if h == 0 && n > 0 {
        return Err(Error::input("treedepth 0 allows only the empty graph"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input("p must lie in [0, 1]"));
    }
    let mut r = rng(seed);
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut depth: Vec<usize> = Vec::with_capacity(n);
    for v in 0..n {
        let open: Vec<usize> = (0..v).filter(|&u| depth[u] + 1 < h).collect();
        let pick = if open.is_empty() {
            None
        } else {
            Some(r.gen_range(0..=open.len()))
        };
        match pick {
            Some(i) if i < open.len() => {
                parent.push(Some(open[i]));
                depth.push(depth[open[i]] + 1);
            }
            _ => {
                parent.push(None);
                depth.push(0);
            }
        }
    }
    let mut edges = Vec::new();
    for v in 0..n {
        let mut a = parent[v];
        let mut first = true;
        while let Some(u) = a {
            if first || r.gen::<f64>() < p {
                edges.push((u, v));
            }
            first = false;
            a = parent[u];
        }
    }
    Graph::new(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::exact_treedepth;

    #[test]
    fn random_treedepth_graphs_respect_the_bound() {
        for seed in 0..40 {
            let h = 1 + (seed as usize % 3);
            let g = random_treedepth_graph(9, h, 0.5, seed).unwrap();
            assert!(exact_treedepth(&g).unwrap().0 <= h);
        }
    }

    #[test]
    fn u_graph_examples() {
        assert_eq!(u_graph(0, 5).unwrap().n(), 0);
        let u13 = u_graph(1, 3).unwrap();
        assert_eq!((u13.n(), u13.edge_count()), (3, 0));
        let u22 = u_graph(2, 2).unwrap();
        assert_eq!((u22.n(), u22.edge_count()), (6, 4));
        assert_eq!(u22.components().len(), 2);
        assert!(u_graph(1, 0).is_err());
    }

    #[test]
    fn u_graph_sizes_and_treedepth() {
        for h in 1..=4 {
            for d in 1..=3 {
                let g = u_graph(h, d).unwrap();
                let expect = if d == 1 { h } else { d * (d.pow(h as u32) - 1) / (d - 1) };
                assert_eq!(g.n(), expect);
                assert_eq!(g.components().len(), d);
                if g.n() <= 18 {
                    assert_eq!(exact_treedepth(&g).unwrap().0, h, "U_{{{h},{d}}}");
                }
            }
        }
    }

    #[test]
    fn u_graph_contains_lower_level() {
        // Deleting the roots leaves d^2 copies of U_{h-1,d}-trees; in
        // particular the children of the roots span an induced U_{h-1,d}
        // when restricted to the first d subtrees.
        for (h, d) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
            let g = u_graph(h, d).unwrap();
            let small = u_graph(h - 1, d).unwrap();
            let f = u_forest(h, d).unwrap();
            let kids = &f.children()[0];
            let keep: crate::VertexSet = kids.iter().flat_map(|&c| f.subtree(c)).collect();
            let (sub, _) = g.induced(keep);
            assert_eq!(sub.n(), small.n());
            assert_eq!(sub.edge_count(), small.edge_count());
        }
    }

    #[test]
    fn families() {
        let c5 = family(Family::Cycle, &[5]).unwrap();
        assert_eq!(c5.edge_count(), 5);
        let grid = family(Family::Grid, &[3, 3]).unwrap();
        assert_eq!((grid.n(), grid.edge_count()), (9, 12));
        assert_eq!(family(Family::Complete, &[4]).unwrap().edge_count(), 6);
        assert_eq!(family(Family::Star, &[5]).unwrap().edge_count(), 5);
        assert_eq!(family(Family::BinaryTreeClosure, &[3]).unwrap().edge_count(), 2 + 4 * 2);
        assert!("petersen".parse::<Family>().is_err());
        assert_eq!("grid".parse::<Family>().unwrap(), Family::Grid);
    }

    #[test]
    fn random_graphs() {
        assert_eq!(random_graph(5, 0.0, 9).unwrap().edge_count(), 0);
        assert_eq!(random_graph(5, 1.0, 9).unwrap(), Graph::complete(5).unwrap());
        assert_eq!(random_graph(8, 0.3, 42).unwrap(), random_graph(8, 0.3, 42).unwrap());
        let t = random_tree(12, 3).unwrap();
        assert!(t.is_connected());
        assert_eq!(t.edge_count(), 11);
    }
}
