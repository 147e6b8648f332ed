use std::collections::HashMap;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::{RootedForest, DEFAULT_EXACT_BUDGET};

/// Exact treedepth with a witnessing forest whose closure contains `g`.
pub fn exact_treedepth(g: &Graph) -> Result<(usize, RootedForest)> {
    exact_treedepth_with(g, DEFAULT_EXACT_BUDGET)
}

pub fn exact_treedepth_with(g: &Graph, max_n: usize) -> Result<(usize, RootedForest)> {
    if g.n() > max_n {
        return Err(Error::BudgetExceeded {
            what: "exact treedepth vertex count",
            limit: max_n as u64,
        });
    }
    let mut solver = Td {
        g,
        memo: HashMap::new(),
    };
    let mut parent = vec![None; g.n()];
    let mut depth = 0;
    for c in g.components() {
        depth = depth.max(solver.td(c));
        solver.build(c, None, &mut parent);
    }
    Ok((depth, RootedForest::new(parent)?))
}

struct Td<'a> {
    g: &'a Graph,
    /// connected set -> (treedepth, best root)
    memo: HashMap<VertexSet, (usize, usize)>,
}

impl Td<'_> {
    fn td(&mut self, s: VertexSet) -> usize {
        if s.len() <= 1 {
            return s.len();
        }
        if let Some(&(d, _)) = self.memo.get(&s) {
            return d;
        }
        if self.g.is_clique(s) {
            let d = s.len();
            self.memo.insert(s, (d, s.min().unwrap()));
            return d;
        }
        let mut best = s.len();
        let mut arg = s.min().unwrap();
        // Try high-degree roots first; they tend to give the bound early.
        let mut cands: Vec<usize> = s.to_vec();
        cands.sort_by_key(|&v| (std::cmp::Reverse(self.g.neighbors(v).intersection(s).len()), v));
        for v in cands {
            let comps = self.g.components_within(s.without(v));
            let mut worst = 0;
            for c in comps {
                worst = worst.max(self.td(c));
                if worst + 1 >= best {
                    break;
                }
            }
            if worst + 1 < best {
                best = worst + 1;
                arg = v;
            }
        }
        self.memo.insert(s, (best, arg));
        best
    }

    fn build(&mut self, s: VertexSet, parent_of_root: Option<usize>, parent: &mut [Option<usize>]) {
        if s.is_empty() {
            return;
        }
        if s.len() == 1 {
            parent[s.min().unwrap()] = parent_of_root;
            return;
        }
        self.td(s);
        let root = self.memo[&s].1;
        parent[root] = parent_of_root;
        for c in self.g.components_within(s.without(root)) {
            self.build(c, Some(root), parent);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, random_graph, u_graph, Family};

    /// Brute force over all rooted forests is too large; instead recurse on
    /// every root choice without memo or pruning.
    fn naive(g: &Graph, s: VertexSet) -> usize {
        if s.is_empty() {
            return 0;
        }
        let comps = g.components_within(s);
        if comps.len() > 1 {
            return comps.into_iter().map(|c| naive(g, c)).max().unwrap();
        }
        s.iter().map(|v| 1 + naive(g, s.without(v))).min().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(exact_treedepth(&Graph::complete(4).unwrap()).unwrap().0, 4);
        assert_eq!(exact_treedepth(&family(Family::Path, &[3]).unwrap()).unwrap().0, 2);
        assert_eq!(exact_treedepth(&u_graph(2, 3).unwrap()).unwrap().0, 2);
        assert_eq!(exact_treedepth(&Graph::empty(0).unwrap()).unwrap().0, 0);
    }

    #[test]
    fn paths_are_logarithmic() {
        for n in 1..=15usize {
            let g = family(Family::Path, &[n]).unwrap();
            let (d, f) = exact_treedepth(&g).unwrap();
            let expect = (usize::BITS - n.leading_zeros()) as usize; // ceil(log2(n+1))
            assert_eq!(d, expect, "P_{n}");
            assert_eq!(f.vertex_height(), d);
            assert!(g.is_subgraph_of(&Graph::closure_of_rooted_forest(&f).unwrap()));
        }
    }

    #[test]
    fn matches_naive_recursion() {
        for seed in 0..40 {
            let g = random_graph(8, 0.35, seed).unwrap();
            let (d, f) = exact_treedepth(&g).unwrap();
            assert_eq!(d, naive(&g, g.vertex_set()), "seed {seed}");
            assert_eq!(f.vertex_height(), d);
            assert!(g.is_subgraph_of(&Graph::closure_of_rooted_forest(&f).unwrap()));
        }
    }
}
