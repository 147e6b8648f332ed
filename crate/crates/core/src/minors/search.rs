use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::model::{AttachedModel, JoinPattern, Model};

/// Limits for the exact minor search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Maximum number of candidate branch sets examined.
    pub node_budget: u64,
}

impl SearchConfig {
    pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: Self::DEFAULT_NODE_BUDGET,
        }
    }
}

/// A `pattern`-model in `host`, if one exists.
pub fn find_model(host: &Graph, pattern: &Graph) -> Result<Option<Model>> {
    find_model_with(host, pattern, &SearchConfig::default())
}

pub fn find_model_with(host: &Graph, pattern: &Graph, cfg: &SearchConfig) -> Result<Option<Model>> {
    find_model_within(host, host.vertex_set(), pattern, cfg)
}

/// A `pattern`-model in `host[within]`.
pub(crate) fn find_model_within(
    host: &Graph,
    within: VertexSet,
    pattern: &Graph,
    cfg: &SearchConfig,
) -> Result<Option<Model>> {
    let found = search(host, within, pattern, &[], cfg)?;
    let model = found.map(Model::new);
    if let Some(m) = &model {
        m.validate(&host.restrict(within), pattern).map_err(Error::cert)?;
    }
    Ok(model)
}

/// An `{R_1, ..., R_k}`-attached model of `K_a ⊕ H`. Root `i` is attached
/// to apex `i`, which loses no generality because apex vertices are twins.
pub fn find_attached_model(host: &Graph, pattern: &JoinPattern, roots: &[VertexSet]) -> Result<Option<AttachedModel>> {
    find_attached_model_with(host, pattern, roots, &SearchConfig::default())
}

pub fn find_attached_model_with(
    host: &Graph,
    pattern: &JoinPattern,
    roots: &[VertexSet],
    cfg: &SearchConfig,
) -> Result<Option<AttachedModel>> {
    find_attached_within(host, host.vertex_set(), pattern, roots, cfg)
}

/// Attached search restricted to `within ∪ ⋃roots`.
pub(crate) fn find_attached_within(
    host: &Graph,
    within: VertexSet,
    pattern: &JoinPattern,
    roots: &[VertexSet],
    cfg: &SearchConfig,
) -> Result<Option<AttachedModel>> {
    let k = roots.len();
    if pattern.a < k {
        return Err(Error::input("more root sets than apex vertices"));
    }
    let mut all = VertexSet::EMPTY;
    for &r in roots {
        host.check_set(r)?;
        if r.is_empty() {
            return Err(Error::input("root sets must be non-empty"));
        }
        if r.intersects(all) {
            return Err(Error::input("root sets must be disjoint"));
        }
        all = all.union(r);
    }
    let pg = pattern.graph()?;
    let keep = within.difference(all).union(all);
    let (work, origin) = host.identify(roots, keep);
    let rho: Vec<usize> = roots
        .iter()
        .map(|r| origin.iter().position(|o| o == r).expect("root class"))
        .collect();
    // One pendant per root, hanging off its apex and pinned to the root.
    let p = pg.n();
    let mut extended = pg.pad(k)?;
    let pendants: Vec<(usize, usize)> = (0..k).map(|i| (i, p + i)).collect();
    extended = extended.with_edges(&pendants);
    let pinned: Vec<(usize, VertexSet)> = (0..k).map(|i| (p + i, VertexSet::singleton(rho[i]))).collect();
    let Some(sets) = search(&work, work.vertex_set(), &extended, &pinned, cfg)? else {
        return Ok(None);
    };
    let model = Model::new(sets[..p].to_vec()).expand(&origin);
    let out = AttachedModel {
        model,
        roots: roots.to_vec(),
        attachment: (0..k).collect(),
    };
    out.validate(&host.restrict(keep), pattern).map_err(Error::cert)?;
    Ok(Some(out))
}

/// Core backtracking search. `pinned` fixes the branch sets of some
/// pattern vertices. Returns branch sets indexed by pattern vertex.
pub(crate) fn search(
    host: &Graph,
    within: VertexSet,
    pattern: &Graph,
    pinned: &[(usize, VertexSet)],
    cfg: &SearchConfig,
) -> Result<Option<Vec<VertexSet>>> {
    let p = pattern.n();
    if p == 0 {
        return Ok(Some(Vec::new()));
    }
    let sub = host.restrict(within);
    if p > within.len() || pattern.edge_count() > sub.edge_count() {
        return Ok(None);
    }
    let pat_adj: Vec<VertexSet> = (0..p).map(|x| pattern.neighbors(x)).collect();
    let mut assigned = vec![VertexSet::EMPTY; p];
    let mut used = VertexSet::EMPTY;
    let mut is_pinned = VertexSet::EMPTY;
    for &(x, b) in pinned {
        if b.is_empty() || !b.is_subset(within) || b.intersects(used) || !sub.is_connected_set(b) {
            return Ok(None);
        }
        assigned[x] = b;
        used = used.union(b);
        is_pinned.insert(x);
    }
    for &(x, _) in pinned {
        for y in pat_adj[x].intersection(is_pinned).iter() {
            if !sub.neighborhood(assigned[x], within).intersects(assigned[y]) {
                return Ok(None);
            }
        }
    }
    let order = processing_order(&pat_adj, is_pinned);
    let twin_prev = twin_predecessors(&pat_adj, &order, is_pinned);
    let mut s = Search {
        g: &sub,
        pat_adj,
        order,
        twin_prev,
        assigned,
        frontier: vec![VertexSet::EMPTY; p],
        nodes: 0,
        budget: cfg.node_budget,
    };
    for &(x, b) in pinned {
        s.frontier[x] = sub.neighborhood(b, within);
    }
    let start = pinned.len();
    let unused = within.difference(used);
    if !s.feasible(start, unused) {
        return Ok(None);
    }
    if s.place(start, unused)? {
        Ok(Some(s.assigned))
    } else {
        Ok(None)
    }
}

/// Pinned vertices first, then repeatedly the vertex with most placed
/// neighbours, then highest degree, then lowest id. The order depends on
/// the pattern alone.
fn processing_order(pat_adj: &[VertexSet], pinned: VertexSet) -> Vec<usize> {
    let p = pat_adj.len();
    let mut order: Vec<usize> = pinned.to_vec();
    let mut placed = pinned;
    while order.len() < p {
        let next = (0..p)
            .filter(|&x| !placed.contains(x))
            .max_by_key(|&x| {
                (
                    pat_adj[x].intersection(placed).len(),
                    pat_adj[x].len(),
                    std::cmp::Reverse(x),
                )
            })
            .unwrap();
        order.push(next);
        placed.insert(next);
    }
    order
}

/// For each pattern vertex, the previous vertex in processing order from
/// the same twin class. Twin classes are closed neighbourhood classes of
/// size at least two, then open neighbourhood classes among the rest.
/// Vertices in one class are interchangeable, so their branch sets may be
/// required to have increasing minima in processing order.
fn twin_predecessors(pat_adj: &[VertexSet], order: &[usize], pinned: VertexSet) -> Vec<Option<usize>> {
    let p = pat_adj.len();
    let mut class = vec![usize::MAX; p];
    let free: Vec<usize> = (0..p).filter(|&x| !pinned.contains(x)).collect();
    let mut next_id = 0;
    for closed in [true, false] {
        let key = |x: usize| if closed { pat_adj[x].with(x) } else { pat_adj[x] };
        for &x in &free {
            if class[x] != usize::MAX {
                continue;
            }
            let mates: Vec<usize> = free
                .iter()
                .copied()
                .filter(|&y| class[y] == usize::MAX && key(y) == key(x))
                .collect();
            if mates.len() >= 2 || !closed {
                for y in mates {
                    class[y] = next_id;
                }
                next_id += 1;
            }
        }
    }
    let mut last = vec![None; next_id];
    let mut prev = vec![None; p];
    for &x in order {
        if class[x] == usize::MAX {
            continue;
        }
        prev[x] = last[class[x]];
        last[class[x]] = Some(x);
    }
    prev
}

struct Search<'a> {
    g: &'a Graph,
    pat_adj: Vec<VertexSet>,
    order: Vec<usize>,
    twin_prev: Vec<Option<usize>>,
    assigned: Vec<VertexSet>,
    /// `N(B_x)` for placed `x`.
    frontier: Vec<VertexSet>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn placed_set(&self, idx: usize) -> VertexSet {
        self.order[..idx].iter().collect()
    }

    fn place(&mut self, idx: usize, unused: VertexSet) -> Result<bool> {
        if idx == self.order.len() {
            return Ok(true);
        }
        let y = self.order[idx];
        let placed = self.placed_set(idx);
        let placed_nbrs = self.pat_adj[y].intersection(placed);
        let closed = self.pat_adj[y].difference(placed).is_empty();
        let remaining_after = self.order.len() - idx - 1;
        let limit = unused.len() - remaining_after;
        let mut allowed = unused;
        if let Some(t) = self.twin_prev[y] {
            let m = self.assigned[t].min().unwrap();
            allowed = allowed.difference(VertexSet::full(m + 1));
        }
        let anchors = match placed_nbrs
            .iter()
            .map(|q| self.frontier[q].intersection(allowed))
            .min_by_key(|f| f.len())
        {
            Some(f) => f,
            None => allowed,
        };
        let ctx = Grow {
            y,
            idx,
            unused,
            allowed,
            placed_nbrs,
            closed,
            limit,
        };
        let mut banned = VertexSet::EMPTY;
        for a in anchors.iter() {
            if self.grow(&ctx, VertexSet::singleton(a), banned)? {
                return Ok(true);
            }
            banned.insert(a);
        }
        Ok(false)
    }

    fn grow(&mut self, ctx: &Grow, s: VertexSet, banned: VertexSet) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                what: "minor search nodes",
                limit: self.budget,
            });
        }
        let touches = ctx.placed_nbrs.iter().all(|q| self.frontier[q].intersects(s));
        if touches {
            let rest = ctx.unused.difference(s);
            self.assigned[ctx.y] = s;
            self.frontier[ctx.y] = self.g.neighborhood(s, self.g.vertex_set());
            if self.feasible(ctx.idx + 1, rest) && self.place(ctx.idx + 1, rest)? {
                return Ok(true);
            }
            self.assigned[ctx.y] = VertexSet::EMPTY;
            // A closed vertex only needs a minimal set; supersets of a
            // working set cannot help.
            if ctx.closed {
                return Ok(false);
            }
        }
        if s.len() >= ctx.limit {
            return Ok(false);
        }
        let cand = self.g.neighborhood(s, ctx.allowed).difference(banned);
        let mut excl = banned;
        for v in cand.iter() {
            if self.grow(ctx, s.with(v), excl)? {
                return Ok(true);
            }
            excl.insert(v);
        }
        Ok(false)
    }

    /// Necessary conditions for extending the first `idx` placements with
    /// the vertices `unused`.
    fn feasible(&self, idx: usize, unused: VertexSet) -> bool {
        let remaining = self.order.len() - idx;
        if unused.len() < remaining {
            return false;
        }
        if remaining == 0 {
            return true;
        }
        let placed = self.placed_set(idx);
        // Each placed vertex needs a distinct free neighbour per unplaced
        // pattern neighbour.
        for q in placed.iter() {
            let need = self.pat_adj[q].difference(placed).len();
            if need > 0 && self.frontier[q].intersection(unused).len() < need {
                return false;
            }
        }
        // Each unplaced vertex must fit into a single free component that
        // touches all of its placed neighbours.
        let comps = self.g.components_within(unused);
        for &w in &self.order[idx..] {
            let nb = self.pat_adj[w].intersection(placed);
            if nb.is_empty() {
                continue;
            }
            let ok = comps.iter().any(|&c| nb.iter().all(|q| self.frontier[q].intersects(c)));
            if !ok {
                return false;
            }
        }
        true
    }
}

struct Grow {
    y: usize,
    idx: usize,
    unused: VertexSet,
    allowed: VertexSet,
    placed_nbrs: VertexSet,
    closed: bool,
    limit: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, random_graph, u_graph, Family};

    /// Exhaustive oracle: assign every host vertex to a pattern vertex or
    /// to nothing and test the resulting family.
    pub(crate) fn oracle_has_minor(host: &Graph, pattern: &Graph) -> bool {
        let (n, p) = (host.n(), pattern.n());
        if p == 0 {
            return true;
        }
        let total = (p + 1).pow(n as u32);
        (0..total).any(|mut code| {
            let mut sets = vec![VertexSet::EMPTY; p];
            for v in 0..n {
                let c = code % (p + 1);
                code /= p + 1;
                if c < p {
                    sets[c].insert(v);
                }
            }
            Model::new(sets).validate(host, pattern).is_ok()
        })
    }

    #[test]
    fn examples() {
        let c5 = family(Family::Cycle, &[5]).unwrap();
        let k3 = Graph::complete(3).unwrap();
        let m = find_model(&c5, &k3).unwrap().unwrap();
        m.validate(&c5, &k3).unwrap();
        assert!(find_model(&family(Family::Path, &[4]).unwrap(), &k3).unwrap().is_none());
        let k4 = Graph::complete(4).unwrap();
        assert!(find_model(&k4, &Graph::complete(5).unwrap()).unwrap().is_none());
        assert!(find_model(&family(Family::Grid, &[3, 3]).unwrap(), &k4)
            .unwrap()
            .is_some());
    }

    #[test]
    fn attached_examples() {
        let p4 = family(Family::Path, &[4]).unwrap();
        let pat = JoinPattern::new(1, Graph::empty(1).unwrap());
        let m = find_attached_model(&p4, &pat, &[VertexSet::singleton(0)])
            .unwrap()
            .unwrap();
        assert_eq!(m.model.branch(0), VertexSet::singleton(1));
        assert_eq!(m.attachment, vec![0]);

        let star = family(Family::Star, &[3]).unwrap();
        let pat = JoinPattern::new(1, u_graph(1, 2).unwrap());
        assert!(find_attached_model(&star, &pat, &[VertexSet::singleton(0)])
            .unwrap()
            .is_none());

        let pat = JoinPattern::new(1, Graph::empty(1).unwrap());
        let free = find_attached_model(&p4, &pat, &[]).unwrap().unwrap();
        free.validate(&p4, &pat).unwrap();

        let too_many = [VertexSet::singleton(0), VertexSet::singleton(3)];
        assert!(find_attached_model(&p4, &pat, &too_many).is_err());
    }

    #[test]
    fn budget_is_reported() {
        let g = family(Family::Grid, &[4, 4]).unwrap();
        let cfg = SearchConfig { node_budget: 10 };
        let r = find_model_with(&g, &Graph::complete(5).unwrap(), &cfg);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn agrees_with_oracle_on_random_pairs() {
        let patterns = [
            Graph::complete(3).unwrap(),
            Graph::complete(4).unwrap(),
            family(Family::Cycle, &[4]).unwrap(),
            family(Family::Star, &[3]).unwrap(),
            u_graph(2, 2).unwrap().induced(VertexSet::full(4)).0,
            Graph::new(4, &[(0, 1), (2, 3)]).unwrap(),
            Graph::empty(3).unwrap(),
        ];
        for seed in 0..120 {
            let host = random_graph(6, 0.4, seed).unwrap();
            for pat in &patterns {
                let got = find_model(&host, pat).unwrap();
                assert_eq!(got.is_some(), oracle_has_minor(&host, pat), "seed {seed} {pat:?}");
            }
        }
    }
}
