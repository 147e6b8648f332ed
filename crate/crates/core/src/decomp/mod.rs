//! Tree-decompositions, rooted forests, and the exact width/depth kernels.

mod capture;
mod helly;
mod natural;
mod treedepth;
mod treewidth;

pub use capture::{capture_interfaces, mark_tree, Capture};
pub use helly::{helly_hit, helly_search, HellyOutcome};
pub use natural::{is_natural, make_natural};
pub use treedepth::{exact_treedepth, exact_treedepth_with};
pub use treewidth::{decomposition_from_ordering, exact_treewidth, exact_treewidth_with, DEFAULT_EXACT_BUDGET};

pub(crate) use capture::capture_unchecked;
pub(crate) use natural::make_natural_within;
pub(crate) use treewidth::exact_treewidth_within;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A tree plus one bag per tree node.
///
/// Tree nodes are plain indices `0..nodes`; they are not bounded by
/// [`crate::MAX_VERTICES`] because natural rewrites can duplicate subtrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TdJson", into = "TdJson")]
pub struct TreeDecomposition {
    nodes: usize,
    tree_edges: Vec<(usize, usize)>,
    bags: Vec<VertexSet>,
}

#[derive(Serialize, Deserialize)]
struct TdJson {
    nodes: usize,
    tree_edges: Vec<[usize; 2]>,
    bags: Vec<VertexSet>,
}

impl TryFrom<TdJson> for TreeDecomposition {
    type Error = String;

    fn try_from(j: TdJson) -> std::result::Result<Self, String> {
        TreeDecomposition::new(j.bags, j.tree_edges.iter().map(|e| (e[0], e[1])).collect()).map_err(|e| e.to_string())
    }
}

impl From<TreeDecomposition> for TdJson {
    fn from(td: TreeDecomposition) -> Self {
        TdJson {
            nodes: td.nodes,
            tree_edges: td.tree_edges.iter().map(|&(a, b)| [a, b]).collect(),
            bags: td.bags,
        }
    }
}

impl TreeDecomposition {
    /// Builds a decomposition after checking that the edges form a tree on
    /// `0..bags.len()`. Host-graph conditions are checked by
    /// [`TreeDecomposition::validate`].
    pub fn new(bags: Vec<VertexSet>, tree_edges: Vec<(usize, usize)>) -> Result<Self> {
        let nodes = bags.len();
        let mut edges: Vec<(usize, usize)> = tree_edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        if edges.iter().any(|&(a, b)| b >= nodes || a == b) {
            return Err(Error::input("tree edge out of range or a loop"));
        }
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("duplicate tree edge"));
        }
        if nodes > 0 && edges.len() != nodes - 1 {
            return Err(Error::input(format!(
                "a tree on {nodes} nodes needs {} edges, got {}",
                nodes - 1,
                edges.len()
            )));
        }
        let td = TreeDecomposition {
            nodes,
            tree_edges: edges,
            bags,
        };
        if nodes > 0 {
            let seen = td.component_of(0, &vec![false; nodes]);
            if seen.len() != nodes {
                return Err(Error::input("tree edges do not connect all nodes"));
            }
        }
        Ok(td)
    }

    pub fn single_bag(bag: VertexSet) -> Self {
        TreeDecomposition {
            nodes: 1,
            tree_edges: Vec::new(),
            bags: vec![bag],
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn bag(&self, x: usize) -> VertexSet {
        self.bags[x]
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    /// `max |bag| - 1`; `-1` for the decomposition with no nodes or only
    /// empty bags.
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    /// Nodes reachable from `start` without entering nodes marked `blocked`.
    fn component_of(&self, start: usize, blocked: &[bool]) -> Vec<usize> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![start];
        let mut out = Vec::new();
        seen[start] = true;
        while let Some(x) = stack.pop() {
            out.push(x);
            for &y in &adj[x] {
                if !seen[y] && !blocked[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Union of all bags.
    pub fn covered(&self) -> VertexSet {
        self.bags.iter().fold(VertexSet::EMPTY, |a, &b| a.union(b))
    }

    /// Checks the decomposition against `g`.
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        self.validate_within(g, g.vertex_set())
    }

    /// Checks the decomposition against `g[within]`.
    pub fn validate_within(&self, g: &Graph, within: VertexSet) -> std::result::Result<(), String> {
        if self.nodes == 0 {
            return if within.is_empty() {
                Ok(())
            } else {
                Err("decomposition has no nodes".into())
            };
        }
        for (x, b) in self.bags.iter().enumerate() {
            if !b.is_subset(within) {
                return Err(format!("bag {x} = {b:?} leaves the vertex set"));
            }
        }
        for u in within.iter() {
            for v in g.neighbors(u).intersection(within).iter() {
                if u < v && !self.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
                    return Err(format!("edge ({u},{v}) is in no bag"));
                }
            }
        }
        let adj = self.adjacency();
        for v in within.iter() {
            let holders: Vec<usize> = (0..self.nodes).filter(|&x| self.bags[x].contains(v)).collect();
            let Some(&start) = holders.first() else {
                return Err(format!("vertex {v} is in no bag"));
            };
            let mut seen = vec![false; self.nodes];
            let mut stack = vec![start];
            seen[start] = true;
            let mut count = 0;
            while let Some(x) = stack.pop() {
                count += 1;
                for &y in &adj[x] {
                    if !seen[y] && self.bags[y].contains(v) {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if count != holders.len() {
                return Err(format!("nodes holding vertex {v} do not form a subtree"));
            }
        }
        Ok(())
    }

    /// Parent pointers and a pre-order after rooting the tree at `root`.
    pub fn rooted(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let adj = self.adjacency();
        let mut parent = vec![None; self.nodes];
        let mut order = Vec::with_capacity(self.nodes);
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in adj[x].iter().rev() {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    stack.push(y);
                }
            }
        }
        (parent, order)
    }

    /// Maps every bag through `map` (used to move a decomposition of a
    /// compacted induced subgraph back to host ids).
    pub(crate) fn map_bags(&self, map: &[usize]) -> TreeDecomposition {
        TreeDecomposition {
            nodes: self.nodes,
            tree_edges: self.tree_edges.clone(),
            bags: self.bags.iter().map(|b| b.iter().map(|v| map[v]).collect()).collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(bags: Vec<VertexSet>, tree_edges: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = tree_edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        TreeDecomposition {
            nodes: bags.len(),
            tree_edges: edges,
            bags,
        }
    }
}

/// A rooted forest given by parent pointers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Option<usize>>", into = "Vec<Option<usize>>")]
pub struct RootedForest {
    parent: Vec<Option<usize>>,
}

impl TryFrom<Vec<Option<usize>>> for RootedForest {
    type Error = String;

    fn try_from(p: Vec<Option<usize>>) -> std::result::Result<Self, String> {
        RootedForest::new(p).map_err(|e| e.to_string())
    }
}

impl From<RootedForest> for Vec<Option<usize>> {
    fn from(f: RootedForest) -> Self {
        f.parent
    }
}

impl RootedForest {
    /// Rejects out-of-range parents and cycles.
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n || p == v {
                    return Err(Error::input(format!("bad parent {p} for vertex {v}")));
                }
            }
        }
        // Each walk towards a root must end within n steps.
        for v in 0..n {
            let mut cur = v;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > n {
                    return Err(Error::input(format!("parent pointers from {v} contain a cycle")));
                }
            }
        }
        Ok(RootedForest { parent })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.parent[v].is_none()).collect()
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for v in 0..self.len() {
            if let Some(p) = self.parent[v] {
                ch[p].push(v);
            }
        }
        ch
    }

    /// Number of vertices on the path from `v` up to its root.
    pub fn depth(&self, v: usize) -> usize {
        let mut d = 1;
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            d += 1;
            cur = p;
        }
        d
    }

    /// Maximum root-to-leaf vertex count; 0 for the empty forest.
    pub fn vertex_height(&self) -> usize {
        (0..self.len()).map(|v| self.depth(v)).max().unwrap_or(0)
    }

    /// `v` together with all its descendants.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let ch = self.children();
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(ch[x].iter().rev());
        }
        out.sort_unstable();
        out
    }
}
