use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::decomp::{
    capture_unchecked, exact_treewidth_within, helly_search, make_natural_within, HellyOutcome, DEFAULT_EXACT_BUDGET,
};
use crate::error::{Error, Result};
use crate::generators::u_graph;
use crate::graph::Graph;
use crate::minors::{find_attached_within, AttachedModel, JoinPattern, Model, SearchConfig};
use crate::partitions::{verify_hpartition, HPartition};

use super::chordal::chordal_partition;
use super::cuts::cut_decomposition;
use super::pigeonhole::pigeonhole_assemble;

/// How the torso is partitioned when `h = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseStrategy {
    /// Every torso vertex is its own part; `H^0` is the torso.
    #[default]
    Singleton,
    /// A chordal partition of the torso.
    Chordal,
}

impl BaseStrategy {
    pub fn name(self) -> &'static str {
        match self {
            BaseStrategy::Singleton => "singleton",
            BaseStrategy::Chordal => "chordal",
        }
    }
}

/// Knobs shared by the recursive constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructOptions {
    pub search: SearchConfig,
    pub strategy: BaseStrategy,
    /// Process peripheries on the rayon pool. Output is identical either way.
    pub parallel: bool,
    /// Cap on the number of recursive instances.
    pub max_instances: u64,
    /// Vertex cap for exact treewidth calls.
    pub exact_n: usize,
}

impl ConstructOptions {
    pub const DEFAULT_MAX_INSTANCES: u64 = 100_000;
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            search: SearchConfig::default(),
            strategy: BaseStrategy::default(),
            parallel: false,
            max_instances: Self::DEFAULT_MAX_INSTANCES,
            exact_n: DEFAULT_EXACT_BUDGET,
        }
    }
}

/// An H-partition whose first `roots.len()` H-vertices carry the root sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainPartition {
    pub partition: HPartition,
    pub roots: Vec<usize>,
    pub strategy: BaseStrategy,
}

pub(crate) struct Ctx<'a> {
    pub opts: &'a ConstructOptions,
    count: AtomicU64,
}

impl<'a> Ctx<'a> {
    pub fn new(opts: &'a ConstructOptions) -> Self {
        Ctx {
            opts,
            count: AtomicU64::new(0),
        }
    }

    pub fn enter(&self) -> Result<()> {
        let seen = self.count.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if seen > self.opts.max_instances {
            return Err(Error::BudgetExceeded {
                what: "recursive instances",
                limit: self.opts.max_instances,
            });
        }
        Ok(())
    }
}

/// An H-partition of a `K_k ⊕ U_{h,d}`-minor-free graph of treewidth below
/// `t` in which the root sets are parts forming a clique of `H`.
///
/// The recursion splits off components, rules out many disjoint attached
/// models of `K_{k+1} ⊕ U_{h−1,d}` (assembling a forbidden minor if they
/// exist), hits the rest with few bags of a natural tree-decomposition,
/// cuts the remainder into a torso and peripheries, and glues the partial
/// answers by clique-sums.
pub fn main_partition(
    h: usize,
    d: usize,
    k: usize,
    t: usize,
    g: &Graph,
    root_sets: &[VertexSet],
    opts: &ConstructOptions,
) -> Result<MainPartition> {
    if h == 0 || d == 0 || t == 0 {
        return Err(Error::input("need h, d, t >= 1"));
    }
    check_root_sets(g, root_sets, k, 2)?;
    let (tw, _) = exact_treewidth_within(g, g.vertex_set(), opts.exact_n)?;
    if tw >= t as i64 {
        return Err(Error::precondition(
            format!("treewidth {tw} is not below t = {t}"),
            None,
        ));
    }
    let ctx = Ctx::new(opts);
    let sol = solve(&ctx, h, d, k, g, root_sets)?;
    let partition = HPartition {
        h: sol.h,
        parts: sol.parts,
        order: None,
        ab: None,
    };
    let report = verify_hpartition(g, &partition);
    if !report.valid {
        return Err(Error::cert(report.problems.join("; ")));
    }
    let roots: Vec<usize> = (0..root_sets.len()).collect();
    for &x in &roots {
        if partition.parts[x] != root_sets[x] {
            return Err(Error::cert("root set is not its own part"));
        }
    }
    if !partition.h.is_clique(roots.iter().collect()) {
        return Err(Error::cert("root parts do not form a clique"));
    }
    Ok(MainPartition {
        partition,
        roots,
        strategy: opts.strategy,
    })
}

pub(crate) fn check_root_sets(g: &Graph, root_sets: &[VertexSet], k: usize, max_size: usize) -> Result<()> {
    if root_sets.len() > k {
        return Err(Error::input(format!("{} root sets but k = {k}", root_sets.len())));
    }
    let mut seen = VertexSet::EMPTY;
    for &r in root_sets {
        g.check_set(r)?;
        if r.is_empty() || r.len() > max_size {
            return Err(Error::input(format!("root sets need 1 to {max_size} vertices")));
        }
        if r.intersects(seen) {
            return Err(Error::input("root sets must be disjoint"));
        }
        seen = seen.union(r);
    }
    Ok(())
}

struct Sol {
    h: Graph,
    parts: Vec<VertexSet>,
}

fn solve(ctx: &Ctx<'_>, h: usize, d: usize, k: usize, g: &Graph, given: &[VertexSet]) -> Result<Sol> {
    ctx.enter()?;
    let all_roots = union_all(given);
    let rest = g.vertex_set().difference(all_roots);
    let ell = given.len();
    if (h, k) == (1, 0) {
        if g.n() >= d {
            let witness = Model::new(g.vertex_set().iter().take(d).map(VertexSet::singleton).collect());
            return Err(Error::precondition(
                format!("the graph has {d} vertices, a U_{{1,{d}}} minor"),
                Some(witness),
            ));
        }
        if g.n() == 0 {
            return Ok(Sol {
                h: Graph::empty(0)?,
                parts: Vec::new(),
            });
        }
        return Ok(Sol {
            h: Graph::complete(1)?,
            parts: vec![g.vertex_set()],
        });
    }
    if rest.len() < k {
        let mut parts = given.to_vec();
        if !rest.is_empty() {
            parts.push(rest);
        }
        return Ok(Sol {
            h: Graph::complete(parts.len())?,
            parts,
        });
    }
    let mut roots = given.to_vec();
    roots.extend(rest.iter().take(k - ell).map(VertexSet::singleton));
    let all_roots = union_all(&roots);
    let rest = g.vertex_set().difference(all_roots);
    if rest.is_empty() {
        return Ok(Sol {
            h: Graph::complete(roots.len())?,
            parts: roots,
        });
    }
    let comps = g.components_within(rest);
    let sol = if comps.len() > 1 {
        disconnected(ctx, h, d, k, g, &roots, &comps)?
    } else {
        connected(ctx, h, d, k, g, &roots, rest)?
    };
    Ok(sol)
}

fn union_all(sets: &[VertexSet]) -> VertexSet {
    sets.iter().fold(VertexSet::EMPTY, |a, &b| a.union(b))
}

/// Maps every set through `origin`.
fn expand_set(s: VertexSet, origin: &[VertexSet]) -> VertexSet {
    s.iter().fold(VertexSet::EMPTY, |a, v| a.union(origin[v]))
}

/// Ids whose origin lies inside `s`.
fn classes_in(origin: &[VertexSet], s: VertexSet) -> VertexSet {
    origin
        .iter()
        .enumerate()
        .filter(|(_, o)| !o.is_empty() && o.is_subset(s))
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn singleton_origin(map: &[usize]) -> Vec<VertexSet> {
    map.iter().map(|&v| VertexSet::singleton(v)).collect()
}

/// Carries a minor model found in `sub` (whose vertex `v` stands for
/// `origin[v]` of `g`) back to `g`. The model is dropped when it does not
/// survive the lift.
pub(crate) fn lift_error(err: Error, sub: &Graph, origin: &[VertexSet], g: &Graph) -> Error {
    match err {
        Error::PreconditionViolated { reason, evidence } => {
            let lifted = evidence.and_then(|m| {
                let big = m.expand(origin);
                let mut pattern = Graph::empty(m.len()).ok()?;
                for a in 0..m.len() {
                    for b in a + 1..m.len() {
                        if sub.neighborhood(m.branch(a), sub.vertex_set()).intersects(m.branch(b)) {
                            pattern = pattern.with_edges(&[(a, b)]);
                        }
                    }
                }
                big.validate(g, &pattern).ok()?;
                Some(big)
            });
            Error::precondition(reason, lifted)
        }
        other => other,
    }
}

fn disconnected(
    ctx: &Ctx<'_>,
    h: usize,
    d: usize,
    k: usize,
    g: &Graph,
    roots: &[VertexSet],
    comps: &[VertexSet],
) -> Result<Sol> {
    let all_roots = union_all(roots);
    let run = |&comp: &VertexSet| -> Result<(Sol, Vec<usize>)> {
        let (sub, map) = g.induced(comp.union(all_roots));
        let origin = singleton_origin(&map);
        let sub_roots: Vec<VertexSet> = roots.iter().map(|&r| classes_in(&origin, r)).collect();
        let sol = solve(ctx, h, d, k, &sub, &sub_roots).map_err(|e| lift_error(e, &sub, &origin, g))?;
        Ok((sol, map))
    };
    let children: Vec<(Sol, Vec<usize>)> = if ctx.opts.parallel {
        comps.par_iter().map(run).collect::<Result<_>>()?
    } else {
        comps.iter().map(run).collect::<Result<_>>()?
    };
    let mut parts = roots.to_vec();
    let mut edges = Vec::new();
    for j in 0..k {
        for i in j + 1..k {
            edges.push((j, i));
        }
    }
    for (sol, map) in children {
        let base = parts.len();
        let place = |v: usize| if v < k { v } else { base + v - k };
        for (u, v) in sol.h.edges() {
            edges.push((place(u), place(v)));
        }
        for p in &sol.parts[k..] {
            parts.push(p.iter().map(|v| map[v]).collect());
        }
    }
    Ok(Sol {
        h: Graph::from_edges_lossy(parts.len(), edges),
        parts,
    })
}

fn connected(
    ctx: &Ctx<'_>,
    h: usize,
    d: usize,
    k: usize,
    g: &Graph,
    roots: &[VertexSet],
    rest: VertexSet,
) -> Result<Sol> {
    let opts = ctx.opts;
    let (_, td) = exact_treewidth_within(g, rest, opts.exact_n)?;
    let td = make_natural_within(g, rest, &td)?;

    // Attached models of K_{k+1} ⊕ U_{h−1,d}: many disjoint ones combine
    // into the excluded minor, few are hit by few bags.
    let small = JoinPattern::new(k + 1, u_graph(h - 1, d)?);
    let mut found: Vec<AttachedModel> = Vec::new();
    let spread = (d - 1).saturating_mul(1 << k).saturating_add(1);
    let outcome = helly_search(&td, spread, |alive| {
        let hit = find_attached_within(g, alive, &small, roots, &opts.search)?;
        Ok(hit.map(|m| {
            let vs = m.model.vertices();
            found.push(m);
            vs
        }))
    })?;
    let nodes = match outcome {
        HellyOutcome::DisjointFamily(members) => {
            let models: Vec<AttachedModel> = members
                .iter()
                .map(|&s| {
                    found
                        .iter()
                        .find(|m| m.model.vertices() == s)
                        .cloned()
                        .expect("member was found")
                })
                .collect();
            let model = pigeonhole_assemble(g, h, d, roots, &models)?;
            return Err(Error::precondition(
                format!(
                    "{} disjoint attached models combine into K_{k} + U_{{{h},{d}}}",
                    models.len()
                ),
                Some(model),
            ));
        }
        HellyOutcome::HittingBags(nodes) if nodes.is_empty() => {
            let v = rest.min().expect("rest is non-empty");
            vec![(0..td.node_count())
                .find(|&x| td.bag(x).contains(v))
                .expect("v is covered")]
        }
        HellyOutcome::HittingBags(nodes) => nodes,
    };
    let x = capture_unchecked(&td, &nodes)?.x;

    // G': G − X with each root set identified to one vertex.
    let (gp, origin) = g.identify(roots, g.vertex_set().difference(x));
    let r_ids: Vec<usize> = roots
        .iter()
        .map(|r| origin.iter().position(|o| o == r).expect("root class"))
        .collect();
    let r_set: VertexSet = r_ids.iter().copied().collect();
    let cd =
        cut_decomposition(&gp, r_set, k + 1, h - 1, d, &opts.search).map_err(|e| lift_error(e, &gp, &origin, g))?;

    // H^0 on the torso.
    let torso_core = cd.core.difference(r_set);
    let (torso, tmap) = cd.torso.induced(torso_core);
    let torso_origin: Vec<VertexSet> = tmap.iter().map(|&v| origin[v]).collect();
    let h0 = if h == 1 {
        match opts.strategy {
            BaseStrategy::Singleton => Sol {
                h: torso.clone(),
                parts: (0..torso.n()).map(VertexSet::singleton).collect(),
            },
            BaseStrategy::Chordal => {
                let hp = chordal_partition(&torso, 2 * k + 1).map_err(|e| lift_error(e, &torso, &torso_origin, g))?;
                Sol {
                    h: hp.h,
                    parts: hp.parts,
                }
            }
        }
    } else {
        solve(ctx, h - 1, d + 2 * k, 2 * k + 1, &torso, &[]).map_err(|e| lift_error(e, &torso, &torso_origin, g))?
    };
    let h0_parts: Vec<VertexSet> = h0.parts.iter().map(|&p| expand_set(p, &torso_origin)).collect();
    let mut owner0 = vec![usize::MAX; g.n()];
    for (w, p) in h0_parts.iter().enumerate() {
        for v in p.iter() {
            owner0[v] = w;
        }
    }

    // Peripheries.
    let rest_out = rest.difference(x);
    let run = |p: &super::cuts::Periphery| -> Result<(Sol, Vec<usize>, Vec<VertexSet>)> {
        let ci = expand_set(p.component, &origin);
        let di = g.reach(ci, rest_out);
        let rim = g.neighborhood(di, g.vertex_set());
        let xcomps: Vec<VertexSet> = g
            .components_within(rest.difference(di))
            .into_iter()
            .filter(|c| c.intersects(rim))
            .collect();
        if xcomps.len() > 2 {
            return Err(Error::cert(format!(
                "a periphery sees {} outer components",
                xcomps.len()
            )));
        }
        let mut family: Vec<VertexSet> = Vec::new();
        let mut targets: Vec<usize> = Vec::new();
        for (j, &r) in r_ids.iter().enumerate() {
            if p.interface.contains(r) {
                family.push(roots[j]);
                targets.push(j);
            }
        }
        for u in p.interface.difference(r_set).iter() {
            family.push(origin[u]);
            targets.push(k + 1 + owner0[origin[u].min().expect("non-empty")]);
        }
        let xs = union_all(&xcomps);
        let keep = ci.union(union_all(&family)).union(xs);
        let (gi, gi_origin) = g.identify(&xcomps, keep);
        let mut sub_roots: Vec<VertexSet> = family.iter().map(|&s| classes_in(&gi_origin, s)).collect();
        if !xcomps.is_empty() {
            sub_roots.push(
                xcomps
                    .iter()
                    .map(|c| gi_origin.iter().position(|o| o == c).expect("class"))
                    .collect(),
            );
            targets.push(k);
        }
        let sol = solve(ctx, h, d, k, &gi, &sub_roots).map_err(|e| lift_error(e, &gi, &gi_origin, g))?;
        Ok((sol, targets, gi_origin))
    };
    let children: Vec<(Sol, Vec<usize>, Vec<VertexSet>)> = if opts.parallel {
        cd.peripheries.par_iter().map(run).collect::<Result<_>>()?
    } else {
        cd.peripheries.iter().map(run).collect::<Result<_>>()?
    };

    // Clique-sum reassembly.
    let mut parts: Vec<VertexSet> = roots.to_vec();
    parts.push(x);
    parts.extend(h0_parts);
    let mut edges = Vec::new();
    for a in 0..=k {
        for b in a + 1..parts.len() {
            edges.push((a, b));
        }
    }
    for (u, v) in h0.h.edges() {
        edges.push((k + 1 + u, k + 1 + v));
    }
    for (sol, targets, gi_origin) in children {
        let base = parts.len();
        let r = targets.len();
        let place = |v: usize| if v < r { targets[v] } else { base + v - r };
        for (u, v) in sol.h.edges() {
            let (a, b) = (place(u), place(v));
            if a != b {
                edges.push((a, b));
            }
        }
        for p in &sol.parts[r..] {
            parts.push(expand_set(*p, &gi_origin));
        }
    }
    Ok(Sol {
        h: Graph::from_edges_lossy(parts.len(), edges),
        parts,
    })
}
