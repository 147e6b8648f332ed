use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::decomp::{exact_treewidth_within, helly_search, HellyOutcome};
use crate::error::{Error, Result};
use crate::generators::u_graph;
use crate::graph::{Graph, Path};
use crate::minors::{find_attached_within, AttachedModel, JoinPattern, Model};
use crate::partitions::{AbSplit, HPartition};
use crate::wcol::{binomial, wcol_of_ordering, Ordering};

use super::chordal::chordal_partition;
use super::cuts::cut_decomposition;
use super::inductive::{check_root_sets, lift_error, singleton_origin, ConstructOptions, Ctx};
use super::params::{eps_impl, tau};
use super::pigeonhole::pigeonhole_assemble;

/// An ordered H-partition with `A`/`B` splits. H-vertex `i` has rank `i`,
/// the first `roots.len()` of them carry the given roots. `t` is one more
/// than the treewidth of the input graph and sizes the `A` sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WcolPartition {
    pub partition: HPartition,
    pub roots: Vec<usize>,
    pub t: usize,
}

/// The vertex ordering induced by an ordered partition and how it fares
/// against the weak coloring bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WcolOrderReport {
    pub ordering: Ordering,
    pub r: usize,
    pub measured: usize,
    pub bound: u128,
    pub holds: bool,
}

/// An ordered H-partition of a `K_k ⊕ U_{h,d}`-minor-free graph whose
/// parts each split into a small set `A` and a union `B` of few
/// subgeodesics of the graph induced by `B` and the later parts.
///
/// The hitting set of the attached-model family is the union of at most
/// `d − 1` bags of an exact tree-decomposition, made connected with
/// shortest paths in `G − R`; the rest follows the inductive partition.
pub fn wcol_partition(
    h: usize,
    d: usize,
    k: usize,
    g: &Graph,
    roots: &[usize],
    opts: &ConstructOptions,
) -> Result<WcolPartition> {
    if h == 0 || d == 0 {
        return Err(Error::input("need h, d >= 1"));
    }
    let root_sets: Vec<VertexSet> = roots.iter().map(|&r| VertexSet::singleton(r)).collect();
    for &r in roots {
        g.check_vertex(r)?;
    }
    check_root_sets(g, &root_sets, k, 1)?;
    let (tw, _) = exact_treewidth_within(g, g.vertex_set(), opts.exact_n)?;
    let t = (tw + 1).max(1) as usize;
    let ctx = Ctx::new(opts);
    let sol = solve(&ctx, h, d, k, g, roots)?;
    let n = sol.parts.len();
    Ok(WcolPartition {
        partition: HPartition {
            h: sol.h,
            parts: sol.parts,
            order: Some((0..n).collect()),
            ab: Some(sol.ab),
        },
        roots: (0..roots.len()).collect(),
        t,
    })
}

/// Orders vertices by part rank, `A` before `B` inside a part, ids
/// ascending otherwise, and compares `wcol_r` of that ordering with
/// `2·ε(h,d,0)·(2r+1)·C(τ(h,0)+r, τ(h,0))` (with the implementation ε).
pub fn wcol_order(g: &Graph, hp: &HPartition, h: usize, d: usize, t: usize, r: usize) -> Result<WcolOrderReport> {
    let (Some(seq), Some(ab)) = (hp.sequence(), hp.ab.as_ref()) else {
        return Err(Error::input("the partition has no ordering or no A/B splits"));
    };
    if ab.len() != hp.parts.len() {
        return Err(Error::input("one A/B split per part is required"));
    }
    let mut order = Vec::with_capacity(g.n());
    for x in seq {
        let (a, b) = (ab[x].a, ab[x].b);
        if a.union(b) != hp.parts[x] || a.intersects(b) {
            return Err(Error::input(format!("A/B split of part {x} is not a partition of it")));
        }
        order.extend(a.iter());
        order.extend(b.iter());
    }
    if order.len() != g.n() {
        return Err(Error::input("parts do not cover the graph"));
    }
    let ordering = Ordering::from_sequence(&order)?;
    let measured = wcol_of_ordering(g, &ordering, r)?;
    let th = tau(h, 0).max(0) as u64;
    let bound = 2u128
        .saturating_mul(eps_impl(h, d, 0, t))
        .saturating_mul(2 * r as u128 + 1)
        .saturating_mul(binomial(th + r as u64, th));
    Ok(WcolOrderReport {
        ordering,
        r,
        measured,
        bound,
        holds: measured as u128 <= bound,
    })
}

/// A solved periphery: solution, clique-sum targets, origin map, lifted
/// host and the vertices it covers.
type Child = (Sol, Vec<usize>, Vec<Option<usize>>, Graph, VertexSet);

struct Sol {
    h: Graph,
    parts: Vec<VertexSet>,
    ab: Vec<AbSplit>,
}

fn plain(a: VertexSet) -> AbSplit {
    AbSplit {
        a,
        b: VertexSet::EMPTY,
        geodesics: Vec::new(),
        host_plus: None,
    }
}

fn solve(ctx: &Ctx<'_>, h: usize, d: usize, k: usize, g: &Graph, given: &[usize]) -> Result<Sol> {
    ctx.enter()?;
    let r_set: VertexSet = given.iter().copied().collect();
    let rest = g.vertex_set().difference(r_set);
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
                ab: Vec::new(),
            });
        }
        return Ok(Sol {
            h: Graph::complete(1)?,
            parts: vec![g.vertex_set()],
            ab: vec![plain(g.vertex_set())],
        });
    }
    if rest.len() <= k {
        let mut parts: Vec<VertexSet> = given.iter().map(|&r| VertexSet::singleton(r)).collect();
        if !rest.is_empty() {
            parts.push(rest);
        }
        let ab = parts.iter().map(|&p| plain(p)).collect();
        return Ok(Sol {
            h: Graph::complete(parts.len())?,
            parts,
            ab,
        });
    }
    let mut roots = given.to_vec();
    roots.extend(rest.iter().take(k - ell));
    let r_set: VertexSet = roots.iter().copied().collect();
    let rest = g.vertex_set().difference(r_set);
    let comps = g.components_within(rest);
    if comps.len() > 1 {
        disconnected(ctx, h, d, k, g, &roots, &comps)
    } else {
        connected(ctx, h, d, k, g, &roots, rest)
    }
}

/// Moves a split of a child instance to the parent. `map[v]` is the parent
/// id of child vertex `v` (`None` for contracted vertices, which may not
/// occur in certificates). Extra host vertices are renumbered past
/// `parent_n`, and the edges of `add` join the host.
fn lift_split(
    split: &AbSplit,
    child: &Graph,
    suffix: VertexSet,
    map: &[Option<usize>],
    parent_n: usize,
    add: &[(usize, usize)],
) -> Result<AbSplit> {
    let id = |v: usize| -> Result<usize> {
        if v < child.n() {
            map[v].ok_or_else(|| Error::cert("a contracted vertex occurs in a certificate"))
        } else {
            Ok(parent_n + v - child.n())
        }
    };
    let set = |s: VertexSet| -> Result<VertexSet> { s.iter().map(id).collect() };
    let host_plus = if split.geodesics.is_empty() {
        None
    } else {
        let host = split.host_plus.clone().unwrap_or_else(|| child.restrict(suffix));
        let mut edges = Vec::with_capacity(host.edge_count() + add.len());
        for (u, v) in host.edges() {
            edges.push((id(u)?, id(v)?));
        }
        edges.extend_from_slice(add);
        Some(Graph::from_edges_lossy(parent_n + host.n() - child.n(), edges))
    };
    let geodesics = split
        .geodesics
        .iter()
        .map(|p| p.0.iter().map(|&v| id(v)).collect::<Result<Vec<_>>>().map(Path))
        .collect::<Result<Vec<_>>>()?;
    Ok(AbSplit {
        a: set(split.a)?,
        b: set(split.b)?,
        geodesics,
        host_plus,
    })
}

/// `B` of part `x` together with every later part.
fn suffix_of(parts: &[VertexSet], ab: &[AbSplit], x: usize) -> VertexSet {
    parts[x + 1..].iter().fold(ab[x].b, |a, &p| a.union(p))
}

fn edges_of(g: &Graph, keep: VertexSet) -> Vec<(usize, usize)> {
    g.restrict(keep).edges()
}

fn disconnected(
    ctx: &Ctx<'_>,
    h: usize,
    d: usize,
    k: usize,
    g: &Graph,
    roots: &[usize],
    comps: &[VertexSet],
) -> Result<Sol> {
    let r_set: VertexSet = roots.iter().copied().collect();
    let run = |&comp: &VertexSet| -> Result<(Sol, Vec<usize>, Graph)> {
        let (sub, map) = g.induced(comp.union(r_set));
        let sub_roots: Vec<usize> = roots
            .iter()
            .map(|r| map.iter().position(|v| v == r).expect("root kept"))
            .collect();
        let origin = singleton_origin(&map);
        let sol = solve(ctx, h, d, k, &sub, &sub_roots).map_err(|e| lift_error(e, &sub, &origin, g))?;
        Ok((sol, map, sub))
    };
    let children: Vec<(Sol, Vec<usize>, Graph)> = if ctx.opts.parallel {
        comps.par_iter().map(run).collect::<Result<_>>()?
    } else {
        comps.iter().map(run).collect::<Result<_>>()?
    };
    let mut parts: Vec<VertexSet> = roots.iter().map(|&r| VertexSet::singleton(r)).collect();
    let mut ab: Vec<AbSplit> = parts.iter().map(|&p| plain(p)).collect();
    let mut edges = Vec::new();
    for j in 0..k {
        for i in j + 1..k {
            edges.push((j, i));
        }
    }
    for ((sol, map, sub), &comp) in children.iter().zip(comps) {
        let base = parts.len();
        let place = |v: usize| if v < k { v } else { base + v - k };
        for (u, v) in sol.h.edges() {
            edges.push((place(u), place(v)));
        }
        let cmap: Vec<Option<usize>> = map.iter().map(|&v| Some(v)).collect();
        let outside = edges_of(g, g.vertex_set().difference(comp.union(r_set)));
        for x in k..sol.parts.len() {
            parts.push(sol.parts[x].iter().map(|v| map[v]).collect());
            let suffix = suffix_of(&sol.parts, &sol.ab, x);
            ab.push(lift_split(&sol.ab[x], sub, suffix, &cmap, g.n(), &outside)?);
        }
    }
    Ok(Sol {
        h: Graph::from_edges_lossy(parts.len(), edges),
        parts,
        ab,
    })
}

fn connected(ctx: &Ctx<'_>, h: usize, d: usize, k: usize, g: &Graph, roots: &[usize], rest: VertexSet) -> Result<Sol> {
    let opts = ctx.opts;
    let r_set: VertexSet = roots.iter().copied().collect();
    let root_sets: Vec<VertexSet> = roots.iter().map(|&r| VertexSet::singleton(r)).collect();
    let (_, td) = exact_treewidth_within(g, rest, opts.exact_n)?;

    let small = JoinPattern::new(k + 1, u_graph(h - 1, d)?);
    let mut found: Vec<AttachedModel> = Vec::new();
    let outcome = helly_search(&td, d, |alive| {
        let hit = find_attached_within(g, alive, &small, &root_sets, &opts.search)?;
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
            let model = pigeonhole_assemble(g, h, d, &root_sets, &models)?;
            return Err(Error::precondition(
                format!("{d} disjoint attached models combine into K_{k} + U_{{{h},{d}}}"),
                Some(model),
            ));
        }
        HellyOutcome::HittingBags(nodes) => nodes,
    };

    // The new part X = A ∪ B: bags plus connecting geodesics of G − R.
    let a = nodes.iter().fold(VertexSet::EMPTY, |s, &x| s.union(td.bag(x)));
    let mut geodesics = Vec::new();
    let mut x = a;
    if a.is_empty() {
        let v = rest.min().expect("rest is non-empty");
        geodesics.push(Path(vec![v]));
        x = VertexSet::singleton(v);
    }
    loop {
        let comps = g.components_within(x);
        if comps.len() <= 1 {
            break;
        }
        let p = g
            .geodesic_between_sets(comps[0], x.difference(comps[0]), rest)
            .expect("G − R is connected");
        x = x.union(p.vertices());
        geodesics.push(p);
    }
    let z_split = AbSplit {
        a,
        b: x.difference(a),
        host_plus: if geodesics.is_empty() {
            None
        } else {
            Some(g.restrict(rest))
        },
        geodesics,
    };

    // Cut G − X around the roots.
    let (gx, mx) = g.induced(g.vertex_set().difference(x));
    let gx_origin = singleton_origin(&mx);
    let pos = |v: usize| mx.iter().position(|&w| w == v).expect("vertex kept");
    let rx: VertexSet = roots.iter().map(|&r| pos(r)).collect();
    let cd =
        cut_decomposition(&gx, rx, k + 1, h - 1, d, &opts.search).map_err(|e| lift_error(e, &gx, &gx_origin, g))?;

    // H^0 on the torso.
    let (torso, tmap) = cd.torso.induced(cd.core.difference(rx));
    let t_to_g: Vec<usize> = tmap.iter().map(|&v| mx[v]).collect();
    let t_origin = singleton_origin(&t_to_g);
    let h0 = if h == 1 {
        let hp = chordal_partition(&torso, 2 * k + 1).map_err(|e| lift_error(e, &torso, &t_origin, g))?;
        let seq = hp.sequence().expect("chordal partitions are ordered");
        let ab = hp.ab.expect("chordal partitions carry splits");
        let mut rank = vec![0; seq.len()];
        for (i, &y) in seq.iter().enumerate() {
            rank[y] = i;
        }
        Sol {
            h: hp.h.relabel(&rank),
            parts: seq.iter().map(|&y| hp.parts[y]).collect(),
            ab: seq.iter().map(|&y| ab[y].clone()).collect(),
        }
    } else {
        solve(ctx, h - 1, d + 2 * k, 2 * k + 1, &torso, &[]).map_err(|e| lift_error(e, &torso, &t_origin, g))?
    };
    let outer: VertexSet = cd
        .peripheries
        .iter()
        .fold(VertexSet::EMPTY, |s, p| s.union(p.component))
        .iter()
        .map(|v| mx[v])
        .collect();
    let outer_edges = edges_of(g, outer);
    let t_map: Vec<Option<usize>> = t_to_g.iter().map(|&v| Some(v)).collect();
    let mut h0_parts = Vec::with_capacity(h0.parts.len());
    let mut h0_ab = Vec::with_capacity(h0.parts.len());
    for y in 0..h0.parts.len() {
        let part: VertexSet = h0.parts[y].iter().map(|v| t_to_g[v]).collect();
        let suffix = suffix_of(&h0.parts, &h0.ab, y);
        let suffix_g: VertexSet = suffix.iter().map(|v| t_to_g[v]).collect();
        let mut add = outer_edges.clone();
        for u in outer.iter() {
            for w in g.neighbors(u).intersection(suffix_g).iter() {
                add.push((u, w));
            }
        }
        h0_ab.push(lift_split(&h0.ab[y], &torso, suffix, &t_map, g.n(), &add)?);
        h0_parts.push(part);
    }
    let mut owner0 = vec![usize::MAX; g.n()];
    for (w, p) in h0_parts.iter().enumerate() {
        for v in p.iter() {
            owner0[v] = w;
        }
    }

    // Peripheries: G[C^i ∪ N^i ∪ X] with X contracted.
    let run = |p: &super::cuts::Periphery| -> Result<Child> {
        let ci: VertexSet = p.component.iter().map(|v| mx[v]).collect();
        let ni: VertexSet = p.interface.iter().map(|v| mx[v]).collect();
        let (gi, gi_origin) = g.identify(&[x], ci.union(ni).union(x));
        let at = |v: usize| gi_origin.iter().position(|o| o.contains(v)).expect("kept");
        let mut sub_roots = Vec::new();
        let mut targets = Vec::new();
        for (j, &r) in roots.iter().enumerate() {
            if ni.contains(r) {
                sub_roots.push(at(r));
                targets.push(j);
            }
        }
        for u in ni.difference(r_set).iter() {
            sub_roots.push(at(u));
            targets.push(k + 1 + owner0[u]);
        }
        sub_roots.push(at(x.min().expect("X is non-empty")));
        targets.push(k);
        let sol = solve(ctx, h, d, k, &gi, &sub_roots).map_err(|e| lift_error(e, &gi, &gi_origin, g))?;
        let map: Vec<Option<usize>> = gi_origin
            .iter()
            .map(|o| if o.len() == 1 { VertexSet::min(*o) } else { None })
            .collect();
        Ok((sol, targets, map, gi, ci.union(ni)))
    };
    let children: Vec<_> = if opts.parallel {
        cd.peripheries.par_iter().map(run).collect::<Result<_>>()?
    } else {
        cd.peripheries.iter().map(run).collect::<Result<_>>()?
    };

    // Clique-sum reassembly in the order roots, z, H^0, H^1, ..., H^m.
    let mut parts: Vec<VertexSet> = roots.iter().map(|&r| VertexSet::singleton(r)).collect();
    let mut ab: Vec<AbSplit> = parts.iter().map(|&p| plain(p)).collect();
    parts.push(x);
    ab.push(z_split);
    parts.extend(h0_parts);
    ab.extend(h0_ab);
    let mut edges = Vec::new();
    for a in 0..=k {
        for b in a + 1..parts.len() {
            edges.push((a, b));
        }
    }
    for (u, v) in h0.h.edges() {
        edges.push((k + 1 + u, k + 1 + v));
    }
    for (sol, targets, map, gi, seen) in children {
        let base = parts.len();
        let r = targets.len();
        let place = |v: usize| if v < r { targets[v] } else { base + v - r };
        for (u, v) in sol.h.edges() {
            let (a, b) = (place(u), place(v));
            if a != b {
                edges.push((a, b));
            }
        }
        let others = edges_of(g, g.vertex_set().difference(seen.union(x).union(r_set)));
        for y in r..sol.parts.len() {
            let suffix = suffix_of(&sol.parts, &sol.ab, y);
            let lifted = lift_split(&sol.ab[y], &gi, suffix, &map, g.n(), &others)?;
            parts.push(lifted.a.union(lifted.b));
            ab.push(lifted);
        }
    }
    Ok(Sol {
        h: Graph::from_edges_lossy(parts.len(), edges),
        parts,
        ab,
    })
}
