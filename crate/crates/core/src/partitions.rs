//! H-partitions, layerings, product embeddings and the `U_{h,d}` lower-bound
//! witnesses.

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::generators::{u_forest, u_graph};
use crate::graph::{Graph, Path};

/// The `A`/`B` split of one part: `A` is small, `B` is covered by the
/// vertex sets of the listed geodesics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbSplit {
    pub a: VertexSet,
    pub b: VertexSet,
    pub geodesics: Vec<Path>,
    /// The supergraph the geodesics live in, when it is not simply the
    /// suffix graph of the ordering. Ids below `G.n()` are `G`'s vertices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host_plus: Option<Graph>,
}

/// A partition of `V(G)` indexed by the vertices of `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPartition {
    pub h: Graph,
    pub parts: Vec<VertexSet>,
    /// Rank of every `H`-vertex (rank 0 comes first), when ordered.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ab: Option<Vec<AbSplit>>,
}

impl HPartition {
    /// The quotient partition: `H = G / parts`.
    pub fn quotient_of(g: &Graph, parts: Vec<VertexSet>) -> Result<Self> {
        let h = g.quotient(&parts)?;
        Ok(HPartition {
            h,
            parts,
            order: None,
            ab: None,
        })
    }

    pub fn width(&self) -> usize {
        self.parts.iter().map(|p| p.len()).max().unwrap_or(0)
    }

    /// `H`-vertices sorted by rank.
    pub fn sequence(&self) -> Option<Vec<usize>> {
        let rank = self.order.as_ref()?;
        let mut seq = vec![0; rank.len()];
        for (x, &r) in rank.iter().enumerate() {
            seq[r] = x;
        }
        Some(seq)
    }

    /// Part index of every vertex of `g`.
    pub fn owner(&self, n: usize) -> Vec<usize> {
        let mut own = vec![usize::MAX; n];
        for (x, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                if v < n {
                    own[v] = x;
                }
            }
        }
        own
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPartitionReport {
    pub valid: bool,
    pub width: usize,
    pub problems: Vec<String>,
}

/// Checks the partition invariants, the optional ordering and the shape of
/// the optional `A`/`B` splits.
pub fn verify_hpartition(g: &Graph, hp: &HPartition) -> HPartitionReport {
    let mut problems = Vec::new();
    if hp.parts.len() != hp.h.n() {
        problems.push(format!("{} parts for {} H-vertices", hp.parts.len(), hp.h.n()));
    }
    let mut seen = VertexSet::EMPTY;
    for (x, &p) in hp.parts.iter().enumerate() {
        if !p.is_subset(g.vertex_set()) {
            problems.push(format!("part {x} leaves V(G)"));
        }
        if p.intersects(seen) {
            problems.push(format!("part {x} overlaps an earlier part"));
        }
        seen = seen.union(p);
    }
    if seen != g.vertex_set() {
        problems.push("parts do not cover V(G)".into());
    }
    if problems.is_empty() {
        let own = hp.owner(g.n());
        for (u, v) in g.edges() {
            let (x, y) = (own[u], own[v]);
            if x != y && !hp.h.has_edge(x, y) {
                problems.push(format!("edge {u}-{v} joins parts {x},{y} but {x}{y} is not in H"));
            }
        }
    }
    if let Some(rank) = &hp.order {
        let mut sorted = rank.clone();
        sorted.sort_unstable();
        if sorted != (0..hp.h.n()).collect::<Vec<_>>() {
            problems.push("order is not a permutation of V(H)".into());
        }
    }
    if let Some(ab) = &hp.ab {
        if ab.len() != hp.parts.len() {
            problems.push("one A/B split per part is required".into());
        } else {
            for (x, s) in ab.iter().enumerate() {
                if s.a.intersects(s.b) || s.a.union(s.b) != hp.parts[x] {
                    problems.push(format!("A/B split of part {x} does not partition it"));
                }
            }
        }
    }
    HPartitionReport {
        valid: problems.is_empty(),
        width: hp.width(),
        problems,
    }
}

/// `H ⊠ K_c`, with `(x, i)` numbered `x * c + i`.
pub fn strong_product_with_clique(h: &Graph, c: usize) -> Result<Graph> {
    let n = h.n() * c;
    let mut edges = Vec::new();
    for x in 0..h.n() {
        for y in x..h.n() {
            if x != y && !h.has_edge(x, y) {
                continue;
            }
            for i in 0..c {
                for j in 0..c {
                    let (a, b) = (x * c + i, y * c + j);
                    if a < b {
                        edges.push((a, b));
                    }
                }
            }
        }
    }
    Graph::new(n, &edges)
}

/// Injection `v -> (x, i)` of `G` into `H ⊠ K_c`, numbering each part's
/// vertices in increasing order. `None` when the width exceeds `c`.
pub fn product_embed(g: &Graph, hp: &HPartition, c: usize) -> Option<Vec<(usize, usize)>> {
    if hp.width() > c {
        return None;
    }
    let mut map = vec![(0, 0); g.n()];
    for (x, p) in hp.parts.iter().enumerate() {
        for (i, v) in p.iter().enumerate() {
            map[v] = (x, i);
        }
    }
    Some(map)
}

/// Checks that `map` is injective and sends edges of `G` to edges of
/// `H ⊠ K_c`.
pub fn check_product_embedding(g: &Graph, h: &Graph, c: usize, map: &[(usize, usize)]) -> bool {
    if map.len() != g.n() || map.iter().any(|&(x, i)| x >= h.n() || i >= c) {
        return false;
    }
    let Ok(prod) = strong_product_with_clique(h, c) else {
        return false;
    };
    let idx: Vec<usize> = map.iter().map(|&(x, i)| x * c + i).collect();
    let distinct: std::collections::BTreeSet<usize> = idx.iter().copied().collect();
    distinct.len() == idx.len() && g.edges().iter().all(|&(u, v)| prod.has_edge(idx[u], idx[v]))
}

/// Ordered layers `L_0, L_1, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layering {
    pub layers: Vec<VertexSet>,
}

impl Layering {
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        let mut seen = VertexSet::EMPTY;
        let mut index = vec![usize::MAX; g.n()];
        for (i, &l) in self.layers.iter().enumerate() {
            if l.intersects(seen) || !l.is_subset(g.vertex_set()) {
                return Err(format!("layer {i} overlaps another layer or leaves V(G)"));
            }
            seen = seen.union(l);
            for v in l.iter() {
                index[v] = i;
            }
        }
        if seen != g.vertex_set() {
            return Err("layers do not cover V(G)".into());
        }
        for (u, v) in g.edges() {
            if index[u].abs_diff(index[v]) > 1 {
                return Err(format!("edge {u}-{v} skips a layer"));
            }
        }
        Ok(())
    }
}

/// BFS layering from `roots`; components without a root are started at
/// their smallest vertex.
pub fn bfs_layering(g: &Graph, roots: VertexSet) -> Result<Layering> {
    g.check_set(roots)?;
    let mut sources = roots;
    for c in g.components() {
        if !c.intersects(roots) {
            sources.insert(c.min().unwrap());
        }
    }
    Ok(Layering {
        layers: g.bfs_layers(sources, g.vertex_set()),
    })
}

/// Root-to-leaf descent in tree 0 of `U_{h,d}`: from each vertex, step to
/// the smallest child whose subtree avoids the current part. Needs every
/// part to meet tree 0 in at most `d` vertices.
fn uhd_descent(h: usize, d: usize, own: &[usize]) -> Result<Vec<usize>> {
    let forest = u_forest(h, d)?;
    let children = forest.children();
    let mut u = 0;
    let mut out = vec![own[0]];
    for _ in 1..h {
        let x = *out.last().unwrap();
        let next = children[u]
            .iter()
            .copied()
            .find(|&c| forest.subtree(c).iter().all(|&w| own[w] != x))
            .ok_or_else(|| Error::cert("no child subtree avoids the current part"))?;
        u = next;
        out.push(own[u]);
    }
    Ok(out)
}

/// Every partition of `0..n` into blocks of at most `max` vertices, each
/// listed with blocks in order of their smallest vertex.
pub fn bounded_set_partitions(n: usize, max: usize) -> Result<Vec<Vec<VertexSet>>> {
    if n > 12 || max == 0 {
        return Err(Error::input("enumeration needs n <= 12 and max >= 1"));
    }
    let mut out = Vec::new();
    let mut blocks = Vec::new();
    extend_partition(0, n, max, &mut blocks, &mut out);
    Ok(out)
}

fn extend_partition(v: usize, n: usize, max: usize, blocks: &mut Vec<VertexSet>, out: &mut Vec<Vec<VertexSet>>) {
    if v == n {
        out.push(blocks.clone());
        return;
    }
    for i in 0..blocks.len() {
        if blocks[i].len() < max {
            blocks[i].insert(v);
            extend_partition(v + 1, n, max, blocks, out);
            blocks[i].remove(v);
        }
    }
    blocks.push(VertexSet::singleton(v));
    extend_partition(v + 1, n, max, blocks, out);
    blocks.pop();
}

/// A random partition of `0..n` into blocks of at most `max` vertices:
/// a seeded shuffle cut into consecutive runs of random length.
pub fn random_bounded_partition(n: usize, max: usize, seed: u64) -> Result<Vec<VertexSet>> {
    use rand::seq::SliceRandom;
    use rand::Rng;
    if max == 0 || n > crate::MAX_VERTICES {
        return Err(Error::input("need max >= 1 and n within the vertex cap"));
    }
    let mut r = crate::generators::rng(seed);
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(&mut r);
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let len = r.gen_range(1..=max).min(n - i);
        out.push(vs[i..i + len].iter().copied().collect());
        i += len;
    }
    Ok(out)
}

/// A clique `x_1, ..., x_h` of `H` from an `H`-partition of `U_{h,d}` of
/// width at most `d`.
pub fn uhd_clique_witness(h: usize, d: usize, hp: &HPartition) -> Result<Vec<usize>> {
    if h == 0 {
        return Ok(Vec::new());
    }
    let g = u_graph(h, d)?;
    let report = verify_hpartition(&g, hp);
    if !report.valid {
        return Err(Error::input(format!(
            "not an H-partition: {}",
            report.problems.join("; ")
        )));
    }
    if report.width > d {
        return Err(Error::precondition(
            format!("width {} exceeds d = {d}", report.width),
            None,
        ));
    }
    let clique = uhd_descent(h, d, &hp.owner(g.n()))?;
    check_clique(&hp.h, &clique)?;
    Ok(clique)
}

fn check_clique(h: &Graph, xs: &[usize]) -> Result<()> {
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i + 1..] {
            if a == b || !h.has_edge(a, b) {
                return Err(Error::cert("descent did not produce a clique"));
            }
        }
    }
    Ok(())
}

/// Verdict of [`layered_lower_bound_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredReport {
    pub valid: bool,
    pub reason: Option<String>,
    /// A cell `(x, layer)` holding more than `c` vertices.
    pub cell: Option<(usize, usize)>,
    pub witness: Option<Vec<usize>>,
}

/// For an `H`-partition and layering of `U_{h,3c}` with at most `c`
/// vertices per (part, layer) cell: every component has radius one, so it
/// spans at most three layers and each part meets it in at most `3c`
/// vertices; the descent in tree 0 then yields `K_h` in `H`.
pub fn layered_lower_bound_check(h: usize, c: usize, hp: &HPartition, layering: &Layering) -> Result<LayeredReport> {
    let d = 3 * c;
    let g = u_graph(h, d)?;
    let invalid = |reason: String, cell| LayeredReport {
        valid: false,
        reason: Some(reason),
        cell,
        witness: None,
    };
    if let Err(e) = layering.validate(&g) {
        return Ok(invalid(format!("layering: {e}"), None));
    }
    let report = verify_hpartition(&g, hp);
    if !report.valid {
        return Ok(invalid(format!("partition: {}", report.problems.join("; ")), None));
    }
    for (x, &p) in hp.parts.iter().enumerate() {
        for (i, &l) in layering.layers.iter().enumerate() {
            if p.intersection(l).len() > c {
                return Ok(invalid(
                    format!("part {x} has more than {c} vertices in layer {i}"),
                    Some((x, i)),
                ));
            }
        }
    }
    for comp in g.components() {
        let spanned = layering.layers.iter().filter(|l| l.intersects(comp)).count();
        if spanned > 3 {
            return Ok(invalid(
                "a radius-one component spans more than three layers".into(),
                None,
            ));
        }
        if let Some(p) = hp.parts.iter().find(|p| p.intersection(comp).len() > d) {
            return Err(Error::cert(format!("part {p:?} exceeds 3c inside one component")));
        }
    }
    if h == 0 {
        return Ok(LayeredReport {
            valid: true,
            reason: None,
            cell: None,
            witness: Some(Vec::new()),
        });
    }
    let clique = uhd_descent(h, d, &hp.owner(g.n()))?;
    check_clique(&hp.h, &clique)?;
    Ok(LayeredReport {
        valid: true,
        reason: None,
        cell: None,
        witness: Some(clique),
    })
}
