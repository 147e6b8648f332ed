use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::decomp::{decomposition_from_ordering, exact_treewidth_with};
use crate::graph::Graph;
use crate::partitions::{verify_hpartition, HPartition};

use super::inductive::BaseStrategy;
use super::params::{c_param, eps_impl, singleton_tw_bound, tau};

/// Which construction produced a partition, with its parameters. Bounds are
/// recomputed from these, never read from the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "snake_case")]
pub enum CertKind {
    Chordal {
        t: usize,
    },
    Main {
        h: usize,
        d: usize,
        k: usize,
        t: usize,
        strategy: BaseStrategy,
    },
    Wcol {
        h: usize,
        d: usize,
        k: usize,
        t: usize,
    },
}

/// A self-contained claim: `partition` is a valid output of `kind` on
/// `graph`, with `roots[j]` the part of H-vertex `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub kind: CertKind,
    pub graph: Graph,
    pub roots: Vec<VertexSet>,
    pub partition: HPartition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub checks: Vec<Check>,
}

impl CertReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }
}

/// Exact treewidth of `H` up to this many vertices; above it a min-fill
/// elimination gives an upper bound.
const EXACT_H: usize = 20;

/// Runs every checker that applies to the certificate's kind.
pub fn certify(cert: &PartitionCertificate) -> CertReport {
    let mut rep = CertReport { checks: Vec::new() };
    let g = &cert.graph;
    let hp = &cert.partition;
    let hv = verify_hpartition(g, hp);
    rep.push("partition", hv.valid, hv.problems.join("; "));
    if !hv.valid {
        return rep;
    }

    let tw_bound = match cert.kind {
        CertKind::Chordal { t } => t as i64 - 2,
        CertKind::Main { h, k, t, strategy, .. } => match strategy {
            BaseStrategy::Singleton => singleton_tw_bound(h, k, t),
            BaseStrategy::Chordal => tau(h, k),
        },
        CertKind::Wcol { h, k, .. } => tau(h, k),
    };
    let (tw, exact) = treewidth_upper(&hp.h);
    let kind = if exact { "exact" } else { "min-fill upper bound" };
    rep.push(
        "treewidth",
        tw <= tw_bound,
        format!("tw(H) = {tw} ({kind}), bound {tw_bound}"),
    );

    match cert.kind {
        CertKind::Main {
            h, d, k, t, strategy, ..
        } => match strategy {
            BaseStrategy::Singleton => {
                let bound = c_param(h, d, k).saturating_mul(t as u128);
                rep.push(
                    "width",
                    hp.width() as u128 <= bound,
                    format!("width {}, bound {bound}", hp.width()),
                );
            }
            BaseStrategy::Chordal => rep.push(
                "width",
                true,
                format!("width {} (not bounded by the chordal base strategy)", hp.width()),
            ),
        },
        CertKind::Wcol { t, .. } => match exact_treewidth_with(g, EXACT_H) {
            Ok((tw_g, _)) => {
                let want = (tw_g + 1).max(1) as usize;
                rep.push("t", want == t, format!("t = {t}, tw(G) + 1 = {want}"));
            }
            Err(e) => rep.push("t", false, e.to_string()),
        },
        CertKind::Chordal { .. } => {}
    }

    let root_ok = cert.roots.len() <= hp.parts.len()
        && cert.roots.iter().enumerate().all(|(j, &r)| hp.parts[j] == r)
        && hp.h.is_clique((0..cert.roots.len()).collect());
    rep.push("roots", root_ok, format!("{} root parts", cert.roots.len()));
    if let CertKind::Wcol { .. } = cert.kind {
        let singletons = cert.roots.iter().all(|r| r.len() == 1);
        rep.push("root_singletons", singletons, "");
    }

    if let CertKind::Chordal { .. } = cert.kind {
        let bad: Vec<usize> = (0..hp.parts.len())
            .filter(|&x| !g.is_connected_set(hp.parts[x]))
            .collect();
        rep.push("connected_parts", bad.is_empty(), format!("disconnected parts {bad:?}"));
    }

    let eps = match cert.kind {
        CertKind::Chordal { t } => Some((t as u128).saturating_sub(3).max(1)),
        CertKind::Wcol { h, d, k, t } => Some(eps_impl(h, d, k, t)),
        CertKind::Main { .. } => None,
    };
    if let Some(eps) = eps {
        check_ordered(&mut rep, g, hp, cert.roots.len(), eps);
    }
    rep
}

fn check_ordered(rep: &mut CertReport, g: &Graph, hp: &HPartition, skip: usize, eps: u128) {
    let Some(seq) = hp.sequence() else {
        rep.push("elimination", false, "no ordering");
        return;
    };
    let rank = hp.order.as_ref().expect("sequence implies order");
    let bad: Vec<usize> = (0..hp.h.n())
        .filter(|&x| {
            let back: VertexSet = hp.h.neighbors(x).iter().filter(|&y| rank[y] < rank[x]).collect();
            !hp.h.is_clique(back)
        })
        .collect();
    rep.push(
        "elimination",
        bad.is_empty(),
        format!("vertices with a non-clique back-neighbourhood {bad:?}"),
    );
    let root_first = (0..skip).all(|j| rank[j] == j);
    rep.push("root_ranks", root_first, "roots come first");

    let Some(ab) = hp.ab.as_ref() else {
        rep.push("ab_split", false, "no A/B splits");
        return;
    };
    if ab.len() != hp.parts.len() {
        rep.push("ab_split", false, "one split per part is required");
        return;
    }
    let mut problems = Vec::new();
    let mut later = VertexSet::EMPTY;
    for &x in seq.iter().rev() {
        let s = &ab[x];
        let part = hp.parts[x];
        let is_root = rank[x] < skip;
        if s.a.union(s.b) != part || s.a.intersects(s.b) {
            problems.push(format!("part {x}: A and B do not partition the part"));
        }
        if !is_root && (s.a.len() as u128 > eps || s.geodesics.len() as u128 > eps) {
            problems.push(format!(
                "part {x}: |A| = {} and {} geodesics, bound {eps}",
                s.a.len(),
                s.geodesics.len()
            ));
        }
        let covered = s.geodesics.iter().fold(VertexSet::EMPTY, |a, p| a.union(p.vertices()));
        if !s.b.is_subset(covered) {
            problems.push(format!("part {x}: B is not covered by its geodesics"));
        }
        let suffix = s.b.union(later);
        let suffix_graph = g.restrict(suffix);
        let host = s.host_plus.as_ref().unwrap_or(&suffix_graph);
        if host.n() < g.n() || !suffix_graph.edges().iter().all(|&(u, v)| host.has_edge(u, v)) {
            problems.push(format!("part {x}: host does not contain the suffix graph"));
        }
        for (i, p) in s.geodesics.iter().enumerate() {
            if s.host_plus.is_none() && !p.vertices().is_subset(suffix) {
                problems.push(format!("part {x}: geodesic {i} leaves the suffix graph"));
                continue;
            }
            match host.is_geodesic(p) {
                Ok(true) => {}
                Ok(false) => problems.push(format!("part {x}: path {i} is not a geodesic of its host")),
                Err(e) => problems.push(format!("part {x}: path {i}: {e}")),
            }
        }
        later = later.union(part);
    }
    rep.push("ab_split", problems.is_empty(), problems.join("; "));
}

/// Treewidth of `h`, exact when small. The flag says whether it is exact.
pub(crate) fn treewidth_upper(h: &Graph) -> (i64, bool) {
    if let Ok((tw, _)) = exact_treewidth_with(h, EXACT_H) {
        return (tw, true);
    }
    let mut order = Vec::with_capacity(h.n());
    let mut work = h.clone();
    let mut left = h.vertex_set();
    while !left.is_empty() {
        let fill = |v: usize| {
            let nb = work.neighbors(v).intersection(left);
            let mut missing = 0;
            for a in nb.iter() {
                missing += nb.difference(work.neighbors(a)).without(a).len();
            }
            missing
        };
        let v = left.iter().min_by_key(|&v| (fill(v), v)).expect("non-empty");
        let nb = work.neighbors(v).intersection(left);
        work = work.with_cliques(&[nb]);
        left.remove(v);
        order.push(v);
    }
    (decomposition_from_ordering(h, &order).width(), false)
}
