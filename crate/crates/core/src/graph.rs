//! Immutable simple undirected graphs on dense vertex ids.
//!
//! Adjacency is a per-vertex [`VertexSet`], so neighbor iteration is sorted
//! and set intersection is a single machine operation. Graphs are capped at
//! [`MAX_VERTICES`] vertices.

use serde::{Deserialize, Serialize};

use crate::bitset::{VertexSet, MAX_VERTICES};
use crate::decomp::RootedForest;
use crate::error::{Error, Result};

/// Serialized as `{"n": n, "edges": [[u, v], ...]}` with `u < v`, sorted.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    adj: Vec<VertexSet>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = String;

    fn try_from(j: GraphJson) -> std::result::Result<Self, String> {
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(j.n, &edges).map_err(|e| e.to_string())
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// A sequence of distinct vertices; consecutive entries are expected to be
/// adjacent in whatever host graph the path is interpreted against.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        self.0.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::input(format!(
                "graph has {n} vertices; at most {MAX_VERTICES} are supported"
            )));
        }
        Ok(Graph {
            adj: vec![VertexSet::EMPTY; n],
        })
    }

    /// Builds a graph, rejecting self-loops, out-of-range ids and duplicate
    /// edges.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            if g.adj[u].contains(v) {
                return Err(Error::input(format!("duplicate edge ({u},{v})")));
            }
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    /// Builds a graph from edges, silently merging duplicates. Used by
    /// internal constructions that union edge sets.
    pub(crate) fn from_edges_lossy(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        assert!(n <= MAX_VERTICES, "graph exceeds {MAX_VERTICES} vertices");
        let mut adj = vec![VertexSet::EMPTY; n];
        for (u, v) in edges {
            if u != v {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        Graph { adj }
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        let all = VertexSet::full(n);
        for v in 0..n {
            g.adj[v] = all.without(v);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::input(format!("vertex {v} out of range for n={}", self.n())))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_set(&self, s: VertexSet) -> Result<()> {
        if !s.is_subset(self.vertex_set()) {
            Err(Error::input(format!("vertex set {s:?} not within 0..{}", self.n())))
        } else {
            Ok(())
        }
    }

    /// `N(S) \ S`, restricted to `within`.
    pub fn neighborhood(&self, s: VertexSet, within: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for v in s.iter() {
            out = out.union(self.adj[v]);
        }
        out.difference(s).intersection(within)
    }

    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| s.without(v).is_subset(self.adj[v]))
    }

    /// Copy of the graph with every pair inside each of `cliques` joined.
    pub fn with_cliques(&self, cliques: &[VertexSet]) -> Graph {
        let mut adj = self.adj.clone();
        for &c in cliques {
            for v in c.iter() {
                adj[v] = adj[v].union(c.without(v));
            }
        }
        Graph { adj }
    }

    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Graph {
        let mut adj = self.adj.clone();
        for &(u, v) in edges {
            if u != v {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        Graph { adj }
    }

    /// Same vertex ids, only edges with both ends in `keep`.
    pub fn restrict(&self, keep: VertexSet) -> Graph {
        let adj = (0..self.n())
            .map(|v| {
                if keep.contains(v) {
                    self.adj[v].intersection(keep)
                } else {
                    VertexSet::EMPTY
                }
            })
            .collect();
        Graph { adj }
    }

    /// Vertices reachable from `start` inside `within` (which must contain
    /// `start`).
    pub fn reach(&self, start: VertexSet, within: VertexSet) -> VertexSet {
        let mut seen = start.intersection(within);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(self.adj[v]);
            }
            next = next.intersection(within).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    pub fn is_connected_set(&self, s: VertexSet) -> bool {
        match s.min() {
            None => true,
            Some(v) => self.reach(VertexSet::singleton(v), s) == s,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_set(self.vertex_set())
    }

    /// Components of `G[within]`, ordered by smallest member.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut rest = within;
        let mut out = Vec::new();
        while let Some(v) = rest.min() {
            let c = self.reach(VertexSet::singleton(v), rest);
            rest = rest.difference(c);
            out.push(c);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(self.vertex_set())
    }

    /// BFS layers from `sources` inside `within`: `layers[i]` holds the
    /// vertices at distance exactly `i`.
    pub fn bfs_layers(&self, sources: VertexSet, within: VertexSet) -> Vec<VertexSet> {
        let mut seen = sources.intersection(within);
        let mut layers = Vec::new();
        let mut frontier = seen;
        while !frontier.is_empty() {
            layers.push(frontier);
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(self.adj[v]);
            }
            next = next.intersection(within).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        layers
    }

    /// Shortest-path edge counts from `source`; `None` marks unreachable
    /// vertices.
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(source)?;
        Ok(self.distances_within(source, self.vertex_set()))
    }

    pub(crate) fn distances_within(&self, source: usize, within: VertexSet) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        for (i, layer) in self
            .bfs_layers(VertexSet::singleton(source), within)
            .into_iter()
            .enumerate()
        {
            for v in layer.iter() {
                dist[v] = Some(i);
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.distance_within(u, v, self.vertex_set())
    }

    pub(crate) fn distance_within(&self, u: usize, v: usize, within: VertexSet) -> Option<usize> {
        self.bfs_layers(VertexSet::singleton(u), within)
            .iter()
            .position(|l| l.contains(v))
    }

    /// Closed `r`-ball around `v`.
    pub fn ball(&self, v: usize, r: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.ball_within(v, r, self.vertex_set()))
    }

    pub(crate) fn ball_within(&self, v: usize, r: usize, within: VertexSet) -> VertexSet {
        self.bfs_layers(VertexSet::singleton(v), within)
            .into_iter()
            .take(r + 1)
            .fold(VertexSet::EMPTY, VertexSet::union)
    }

    /// A shortest `from`–`to` path inside `within`. Among shortest paths the
    /// one obtained by always stepping back to the smallest-id predecessor
    /// is returned, so the answer is deterministic.
    pub fn geodesic_within(&self, from: usize, to: usize, within: VertexSet) -> Option<Path> {
        let layers = self.bfs_layers(VertexSet::singleton(from), within);
        let d = layers.iter().position(|l| l.contains(to))?;
        let mut rev = vec![to];
        let mut cur = to;
        for i in (0..d).rev() {
            cur = self.adj[cur].intersection(layers[i]).min().expect("bfs parent");
            rev.push(cur);
        }
        rev.reverse();
        Some(Path(rev))
    }

    /// Shortest path from the set `from` to the set `to` inside `within`,
    /// starting at the smallest-id vertex of `from` that attains the minimum
    /// distance.
    pub fn geodesic_between_sets(&self, from: VertexSet, to: VertexSet, within: VertexSet) -> Option<Path> {
        let layers = self.bfs_layers(from, within);
        let d = layers.iter().position(|l| l.intersects(to))?;
        let target = layers[d].intersection(to).min()?;
        let mut rev = vec![target];
        let mut cur = target;
        for i in (0..d).rev() {
            cur = self.adj[cur].intersection(layers[i]).min().expect("bfs parent");
            rev.push(cur);
        }
        rev.reverse();
        Some(Path(rev))
    }

    /// Errors unless `p` is a non-empty sequence of distinct, consecutively
    /// adjacent vertices of this graph.
    pub fn check_path(&self, p: &Path) -> Result<()> {
        if p.0.is_empty() {
            return Err(Error::input("empty vertex sequence is not a path"));
        }
        let mut seen = VertexSet::EMPTY;
        for &v in &p.0 {
            self.check_vertex(v)?;
            if seen.contains(v) {
                return Err(Error::input(format!("vertex {v} repeated in path")));
            }
            seen.insert(v);
        }
        for w in p.0.windows(2) {
            if !self.has_edge(w[0], w[1]) {
                return Err(Error::input(format!("({},{}) is not an edge", w[0], w[1])));
            }
        }
        Ok(())
    }

    /// Whether `p` is a shortest path between its endpoints.
    pub fn is_geodesic(&self, p: &Path) -> Result<bool> {
        self.check_path(p)?;
        let (s, t) = (p.0[0], *p.0.last().unwrap());
        Ok(self.distance(s, t) == Some(p.len()))
    }

    /// Join: disjoint union plus all edges across. `g2`'s ids are shifted
    /// by `g1.n()`.
    pub fn join(g1: &Graph, g2: &Graph) -> Result<Graph> {
        let (n1, n2) = (g1.n(), g2.n());
        let mut g = Graph::empty(n1 + n2)?;
        let left = VertexSet::full(n1);
        let right = VertexSet::from_bits(VertexSet::full(n2).bits() << n1);
        for v in 0..n1 {
            g.adj[v] = g1.adj[v].union(right);
        }
        for v in 0..n2 {
            g.adj[n1 + v] = VertexSet::from_bits(g2.adj[v].bits() << n1).union(left);
        }
        Ok(g)
    }

    /// Disjoint union; `g2`'s ids are shifted by `g1.n()`.
    pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Result<Graph> {
        let n1 = g1.n();
        let mut g = Graph::empty(n1 + g2.n())?;
        g.adj[..n1].copy_from_slice(&g1.adj);
        for v in 0..g2.n() {
            g.adj[n1 + v] = VertexSet::from_bits(g2.adj[v].bits() << n1);
        }
        Ok(g)
    }

    /// Edge `vw` iff one of `v`, `w` is a strict descendant of the other.
    pub fn closure_of_rooted_forest(f: &RootedForest) -> Result<Graph> {
        let n = f.len();
        let mut g = Graph::empty(n)?;
        for v in 0..n {
            let mut cur = f.parent(v);
            while let Some(a) = cur {
                g.adj[v].insert(a);
                g.adj[a].insert(v);
                cur = f.parent(a);
            }
        }
        Ok(g)
    }

    /// Quotient by a partition of the vertex set: one vertex per part, an
    /// edge whenever some edge of `self` crosses the two parts.
    pub fn quotient(&self, parts: &[VertexSet]) -> Result<Graph> {
        let owner = self.part_owner(parts)?;
        let mut q = Graph::empty(parts.len())?;
        for (u, v) in self.edges() {
            let (a, b) = (owner[u], owner[v]);
            if a != b {
                q.adj[a].insert(b);
                q.adj[b].insert(a);
            }
        }
        Ok(q)
    }

    /// Maps each vertex to the index of its part, checking that `parts`
    /// partition the vertex set.
    pub fn part_owner(&self, parts: &[VertexSet]) -> Result<Vec<usize>> {
        let mut owner = vec![usize::MAX; self.n()];
        for (i, p) in parts.iter().enumerate() {
            for v in p.iter() {
                if v >= self.n() {
                    return Err(Error::input(format!("part {i} contains out-of-range vertex {v}")));
                }
                if owner[v] != usize::MAX {
                    return Err(Error::input(format!("vertex {v} lies in parts {} and {i}", owner[v])));
                }
                owner[v] = i;
            }
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::input(format!("vertex {v} is in no part")));
        }
        Ok(owner)
    }

    /// Contracts the connected set `s` to a single vertex. Returns the new
    /// graph and `remap[old] = new`. The contracted vertex takes the
    /// position of the smallest member of `s`; other ids keep their order.
    pub fn contract_set(&self, s: VertexSet) -> Result<(Graph, Vec<usize>)> {
        self.check_set(s)?;
        if s.is_empty() {
            return Err(Error::input("cannot contract an empty set"));
        }
        if !self.is_connected_set(s) {
            return Err(Error::input(format!("{s:?} does not induce a connected subgraph")));
        }
        let (g, origin) = self.identify(&[s], self.vertex_set());
        let mut remap = vec![0; self.n()];
        for (new, o) in origin.iter().enumerate() {
            for old in o.iter() {
                remap[old] = new;
            }
        }
        Ok((g, remap))
    }

    /// Identifies each of the disjoint `groups` into a single vertex and
    /// keeps only vertices in `keep` (a group is kept when it meets `keep`).
    /// New ids follow the order of the smallest original member.
    /// `origin[new]` is the set of original vertices merged into `new`.
    pub fn identify(&self, groups: &[VertexSet], keep: VertexSet) -> (Graph, Vec<VertexSet>) {
        let mut rep = vec![usize::MAX; self.n()];
        let mut classes: Vec<VertexSet> = Vec::new();
        let grouped = groups.iter().fold(VertexSet::EMPTY, |a, &b| a.union(b));
        for &gset in groups {
            if gset.intersects(keep) {
                classes.push(gset);
            }
        }
        for v in keep.difference(grouped).iter() {
            classes.push(VertexSet::singleton(v));
        }
        classes.sort_by_key(|c| VertexSet::min(*c));
        for (i, c) in classes.iter().enumerate() {
            for v in c.iter() {
                rep[v] = i;
            }
        }
        let mut adj = vec![VertexSet::EMPTY; classes.len()];
        for (u, v) in self.edges() {
            let (a, b) = (rep[u], rep[v]);
            if a != usize::MAX && b != usize::MAX && a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        (Graph { adj }, classes)
    }

    /// Induced subgraph on `keep`, compacted to ids `0..|keep|` in
    /// increasing original order. `map[new] = old`.
    pub fn induced(&self, keep: VertexSet) -> (Graph, Vec<usize>) {
        let map = keep.to_vec();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| self.adj[v].intersection(keep).iter().map(|w| index[w]).collect())
            .collect();
        (Graph { adj }, map)
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut adj = vec![VertexSet::EMPTY; self.n()];
        for v in 0..self.n() {
            adj[perm[v]] = self.adj[v].iter().map(|w| perm[w]).collect();
        }
        Graph { adj }
    }

    /// Copy with `extra` isolated vertices appended.
    pub fn pad(&self, extra: usize) -> Result<Graph> {
        let mut g = Graph::empty(self.n() + extra)?;
        g.adj[..self.n()].copy_from_slice(&self.adj);
        Ok(g)
    }

    /// Whether every edge of `self` is an edge of `other` (ids shared).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() <= other.n() && (0..self.n()).all(|v| self.adj[v].is_subset(other.adj[v]))
    }

    /// Smallest `k` such that every subgraph has a vertex of degree ≤ `k`.
    pub fn degeneracy(&self) -> usize {
        let mut alive = self.vertex_set();
        let mut best = 0;
        while let Some(v) = alive.iter().min_by_key(|&v| (self.adj[v].intersection(alive).len(), v)) {
            best = best.max(self.adj[v].intersection(alive).len());
            alive.remove(v);
        }
        best
    }
}
