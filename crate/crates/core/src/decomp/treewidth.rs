use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::TreeDecomposition;

/// Default vertex cap for the exponential-time exact kernels.
pub const DEFAULT_EXACT_BUDGET: usize = 18;

/// Exact treewidth with the default size cap. The empty graph has width -1.
pub fn exact_treewidth(g: &Graph) -> Result<(i64, TreeDecomposition)> {
    exact_treewidth_with(g, DEFAULT_EXACT_BUDGET)
}

pub fn exact_treewidth_with(g: &Graph, max_n: usize) -> Result<(i64, TreeDecomposition)> {
    exact_treewidth_within(g, g.vertex_set(), max_n)
}

/// Treewidth of `g[within]`; bags use host ids.
pub(crate) fn exact_treewidth_within(g: &Graph, within: VertexSet, max_n: usize) -> Result<(i64, TreeDecomposition)> {
    let (sub, map) = g.induced(within);
    let n = sub.n();
    if n > max_n {
        return Err(Error::BudgetExceeded {
            what: "exact treewidth vertex count",
            limit: max_n as u64,
        });
    }
    if n == 0 {
        return Ok((-1, TreeDecomposition::from_parts_unchecked(Vec::new(), Vec::new())));
    }
    let order = optimal_elimination_order(&sub);
    let td = decomposition_from_ordering(&sub, &order);
    Ok((td.width(), td.map_bags(&map)))
}

/// Vertices outside `s ∪ {v}` reachable from `v` through `s`.
fn q_set(g: &Graph, s: VertexSet, v: usize) -> VertexSet {
    let inside = g.reach(VertexSet::singleton(v), s.with(v));
    g.neighborhood(inside, g.vertex_set()).difference(s).without(v)
}

/// Held–Karp style DP: `TW(S) = min_{v∈S} max(TW(S−v), |Q(S−v, v)|)`, with
/// `v` eliminated last among `S`. Ties keep the smallest `v`.
fn optimal_elimination_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let size = 1usize << n;
    let mut tw = vec![0u8; size];
    let mut choice = vec![0u8; size];
    for s in 1..size {
        let set = VertexSet::from_bits(s as u128);
        let mut best = u8::MAX;
        let mut arg = 0;
        for v in set.iter() {
            let rest = set.without(v);
            let prev = if rest.is_empty() { 0 } else { tw[rest.bits() as usize] };
            if prev >= best {
                continue;
            }
            let val = prev.max(q_set(g, rest, v).len() as u8);
            if val < best {
                best = val;
                arg = v;
            }
        }
        tw[s] = best;
        choice[s] = arg as u8;
    }
    let mut rev = Vec::with_capacity(n);
    let mut s = size - 1;
    while s != 0 {
        let v = choice[s] as usize;
        rev.push(v);
        s &= !(1usize << v);
    }
    rev.reverse();
    rev
}

/// Tree-decomposition induced by an elimination ordering: node `i` holds
/// `order[i]` and its later neighbours in the filled graph, and hangs off the
/// node of the earliest such neighbour (or the last node when it has none).
pub fn decomposition_from_ordering(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = order.len();
    if n == 0 {
        return TreeDecomposition::from_parts_unchecked(Vec::new(), Vec::new());
    }
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let members: VertexSet = order.iter().collect();
    let mut fill: Vec<VertexSet> = (0..g.n()).map(|v| g.neighbors(v).intersection(members)).collect();
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut later = members;
    for (i, &v) in order.iter().enumerate() {
        later.remove(v);
        let up = fill[v].intersection(later);
        for u in up.iter() {
            fill[u] = fill[u].union(up.without(u));
        }
        bags.push(up.with(v));
        if i + 1 < n {
            let parent = up.iter().map(|u| pos[u]).min().unwrap_or(n - 1);
            edges.push((i, parent));
        }
    }
    TreeDecomposition::from_parts_unchecked(bags, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, Family};

    /// Branch-and-bound over elimination orderings, independent of the DP.
    fn bnb_treewidth(g: &Graph) -> i64 {
        fn rec(adj: &[VertexSet], alive: VertexSet, cur: i64, best: &mut i64) {
            if alive.is_empty() {
                *best = (*best).min(cur);
                return;
            }
            if cur >= *best {
                return;
            }
            for v in alive.iter() {
                let nb = adj[v].intersection(alive);
                let w = cur.max(nb.len() as i64);
                if w >= *best {
                    continue;
                }
                let mut next = adj.to_vec();
                for u in nb.iter() {
                    next[u] = next[u].union(nb.without(u));
                }
                rec(&next, alive.without(v), w, best);
            }
        }
        if g.n() == 0 {
            return -1;
        }
        let adj: Vec<VertexSet> = (0..g.n()).map(|v| g.neighbors(v)).collect();
        let mut best = g.n() as i64;
        rec(&adj, g.vertex_set(), 0, &mut best);
        best
    }

    #[test]
    fn closed_forms() {
        for n in 2..=10 {
            let (w, td) = exact_treewidth(&family(Family::Path, &[n]).unwrap()).unwrap();
            assert_eq!(w, 1);
            td.validate(&family(Family::Path, &[n]).unwrap()).unwrap();
            if n >= 3 {
                let c = family(Family::Cycle, &[n]).unwrap();
                let (w, td) = exact_treewidth(&c).unwrap();
                assert_eq!(w, 2, "C_{n}");
                td.validate(&c).unwrap();
            }
            let k = family(Family::Complete, &[n]).unwrap();
            assert_eq!(exact_treewidth(&k).unwrap().0, n as i64 - 1);
        }
        assert_eq!(exact_treewidth(&Graph::empty(0).unwrap()).unwrap().0, -1);
        assert_eq!(exact_treewidth(&Graph::empty(3).unwrap()).unwrap().0, 0);
    }

    #[test]
    fn grid_3x3_is_3() {
        let g = family(Family::Grid, &[3, 3]).unwrap();
        let (w, td) = exact_treewidth(&g).unwrap();
        assert_eq!(w, 3);
        assert_eq!(bnb_treewidth(&g), 3);
        td.validate(&g).unwrap();
    }

    #[test]
    fn agrees_with_branch_and_bound() {
        for seed in 0..60 {
            let g = crate::generators::random_graph(8, 0.4, seed).unwrap();
            let (w, td) = exact_treewidth(&g).unwrap();
            assert_eq!(w, bnb_treewidth(&g), "seed {seed}");
            td.validate(&g).unwrap();
            assert_eq!(td.width(), w);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::empty(20).unwrap();
        assert!(matches!(exact_treewidth(&g), Err(Error::BudgetExceeded { .. })));
    }
}
