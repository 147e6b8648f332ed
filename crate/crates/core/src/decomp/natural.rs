use std::collections::BTreeSet;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::TreeDecomposition;

const MAX_REWRITES: usize = 100_000;

/// Whether both sides of every tree edge induce connected subgraphs.
pub fn is_natural(g: &Graph, td: &TreeDecomposition) -> bool {
    let work = Work::from_td(td);
    work.find_bad(g).is_none()
}

/// Rewrites `td` into a natural decomposition of the connected graph `g`.
/// Every output bag is a subset of an input bag. Already natural inputs are
/// returned unchanged.
pub fn make_natural(g: &Graph, td: &TreeDecomposition) -> Result<TreeDecomposition> {
    make_natural_within(g, g.vertex_set(), td)
}

pub(crate) fn make_natural_within(g: &Graph, within: VertexSet, td: &TreeDecomposition) -> Result<TreeDecomposition> {
    if !g.is_connected_set(within) {
        return Err(Error::input("natural decompositions need a connected graph"));
    }
    td.validate_within(g, within).map_err(Error::input)?;
    let g = g.restrict(within);
    let mut work = Work::from_td(td);
    let mut rewrites = 0;
    while let Some((x, y, comps)) = work.find_bad(&g) {
        rewrites += 1;
        if rewrites > MAX_REWRITES {
            return Err(Error::BudgetExceeded {
                what: "natural decomposition rewrites",
                limit: MAX_REWRITES as u64,
            });
        }
        work.split(x, y, &comps);
        work.reduce();
    }
    let out = work.into_td();
    debug_assert!(out.validate_within(&g, within).is_ok());
    Ok(out)
}

/// Mutable tree with tombstoned nodes, compacted at the end.
struct Work {
    bags: Vec<Option<VertexSet>>,
    adj: Vec<BTreeSet<usize>>,
}

impl Work {
    fn from_td(td: &TreeDecomposition) -> Self {
        let mut adj = vec![BTreeSet::new(); td.node_count()];
        for &(a, b) in td.tree_edges() {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Work {
            bags: td.bags().iter().map(|&b| Some(b)).collect(),
            adj,
        }
    }

    /// Nodes on `y`'s side of the edge `xy`.
    fn side(&self, x: usize, y: usize) -> Vec<usize> {
        let mut seen = BTreeSet::from([x, y]);
        let mut stack = vec![y];
        let mut out = Vec::new();
        while let Some(z) = stack.pop() {
            out.push(z);
            for &w in &self.adj[z] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn union_of(&self, nodes: &[usize]) -> VertexSet {
        nodes
            .iter()
            .fold(VertexSet::EMPTY, |a, &z| a.union(self.bags[z].unwrap()))
    }

    /// First violating ordered pair, scanning edges in sorted order.
    fn find_bad(&self, g: &Graph) -> Option<(usize, usize, Vec<VertexSet>)> {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (a, nb) in self.adj.iter().enumerate() {
            if self.bags[a].is_none() {
                continue;
            }
            for &b in nb {
                if a < b {
                    edges.push((a, b));
                }
            }
        }
        for (a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                let side = self.side(x, y);
                let comps = g.components_within(self.union_of(&side));
                if comps.len() > 1 {
                    return Some((x, y, comps));
                }
            }
        }
        None
    }

    /// Replaces `y`'s side of `xy` by one copy per component, each copy's
    /// bags restricted to its component. Every edge leaving a component
    /// ends in `W_x` outside the side, so nothing else is needed.
    fn split(&mut self, x: usize, y: usize, comps: &[VertexSet]) {
        let side = self.side(x, y);
        let old_edges: Vec<(usize, usize)> = side
            .iter()
            .flat_map(|&z| self.adj[z].iter().map(move |&w| (z, w)))
            .filter(|&(z, w)| z < w && w != x)
            .collect();
        let old_bags: Vec<VertexSet> = side.iter().map(|&z| self.bags[z].unwrap()).collect();
        for &z in &side {
            for w in std::mem::take(&mut self.adj[z]) {
                self.adj[w].remove(&z);
            }
            self.bags[z] = None;
        }
        for &c in comps {
            let base = self.bags.len();
            let index = |z: usize| base + side.binary_search(&z).unwrap();
            for b in &old_bags {
                self.bags.push(Some(b.intersection(c)));
                self.adj.push(BTreeSet::new());
            }
            for &(z, w) in &old_edges {
                let (p, q) = (index(z), index(w));
                self.adj[p].insert(q);
                self.adj[q].insert(p);
            }
            let yc = index(y);
            self.adj[x].insert(yc);
            self.adj[yc].insert(x);
        }
    }

    /// Contracts every tree edge whose one bag is inside the other. Empty
    /// bags disappear this way.
    fn reduce(&mut self) {
        loop {
            let mut merged = false;
            'scan: for a in 0..self.bags.len() {
                let Some(ba) = self.bags[a] else { continue };
                for &b in &self.adj[a] {
                    let bb = self.bags[b].unwrap();
                    if ba.is_subset(bb) {
                        self.merge_into(a, b);
                        merged = true;
                        break 'scan;
                    }
                }
            }
            if !merged {
                return;
            }
        }
    }

    fn merge_into(&mut self, a: usize, b: usize) {
        let nb = std::mem::take(&mut self.adj[a]);
        for w in nb {
            self.adj[w].remove(&a);
            if w != b {
                self.adj[w].insert(b);
                self.adj[b].insert(w);
            }
        }
        self.bags[a] = None;
    }

    fn into_td(self) -> TreeDecomposition {
        let mut index = vec![usize::MAX; self.bags.len()];
        let mut bags = Vec::new();
        for (z, b) in self.bags.iter().enumerate() {
            if let Some(b) = b {
                index[z] = bags.len();
                bags.push(*b);
            }
        }
        let mut edges = Vec::new();
        for (a, nb) in self.adj.iter().enumerate() {
            for &b in nb {
                if a < b && index[a] != usize::MAX && index[b] != usize::MAX {
                    edges.push((index[a], index[b]));
                }
            }
        }
        TreeDecomposition::from_parts_unchecked(bags, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::exact_treewidth;
    use crate::generators::random_graph;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    fn dominated(out: &TreeDecomposition, input: &TreeDecomposition) -> bool {
        out.bags().iter().all(|b| input.bags().iter().any(|c| b.is_subset(*c)))
    }

    #[test]
    fn already_natural_is_unchanged() {
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let td = TreeDecomposition::new(vec![set(&[0, 1]), set(&[1, 2])], vec![(0, 1)]).unwrap();
        assert_eq!(make_natural(&p3, &td).unwrap(), td);
        let single = TreeDecomposition::single_bag(p3.vertex_set());
        assert_eq!(make_natural(&p3, &single).unwrap(), single);
    }

    #[test]
    fn bowtie_is_repaired() {
        // Two triangles sharing vertex 2; the leaf bag {0,3} joins vertices
        // from different triangles, so the far side of its edge is
        // disconnected.
        let g = Graph::new(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let td = TreeDecomposition::new(
            vec![set(&[0, 1, 2, 3]), set(&[2, 3, 4]), set(&[0, 3])],
            vec![(0, 1), (0, 2)],
        )
        .unwrap();
        td.validate(&g).unwrap();
        assert!(!is_natural(&g, &td));
        let out = make_natural(&g, &td).unwrap();
        out.validate(&g).unwrap();
        assert!(is_natural(&g, &out));
        assert!(dominated(&out, &td));
    }

    #[test]
    fn rejects_disconnected() {
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        let td = TreeDecomposition::single_bag(g.vertex_set());
        assert!(make_natural(&g, &td).is_err());
    }

    #[test]
    fn random_connected_graphs() {
        let mut checked = 0;
        for seed in 0..200 {
            let g = random_graph(9, 0.3, seed).unwrap();
            if !g.is_connected() {
                continue;
            }
            let (_, td) = exact_treewidth(&g).unwrap();
            let out = make_natural(&g, &td).unwrap();
            out.validate(&g).unwrap();
            assert!(is_natural(&g, &out), "seed {seed}");
            assert!(dominated(&out, &td));
            assert!(out.width() <= td.width());
            checked += 1;
        }
        assert!(checked > 20);
    }
}
