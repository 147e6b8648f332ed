use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};

use super::model::{Linkage, Separation};

/// Outcome of [`menger`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MengerOutcome {
    Linkage(Linkage),
    Separation(Separation),
}

/// `k` disjoint `S`–`T` paths, or a separation of order below `k` with
/// `S ⊆ A` and `T ⊆ B`.
pub fn menger(g: &Graph, s: VertexSet, t: VertexSet, k: usize) -> Result<MengerOutcome> {
    g.check_set(s)?;
    g.check_set(t)?;
    let cut = vertex_cut(g, g.vertex_set(), s, t, VertexSet::EMPTY, k);
    let out = match cut {
        Cut::Linked(paths) => {
            let l = Linkage { paths };
            l.validate(g, s, t).map_err(Error::cert)?;
            MengerOutcome::Linkage(l)
        }
        Cut::Separated(first) => {
            // Prefer a cut of the same order that avoids S and T, so the
            // separator sits strictly between them when possible.
            let inner = s.union(t).difference(s.intersection(t));
            let sep = match vertex_cut(g, g.vertex_set(), s, t, inner, first.order() + 1) {
                Cut::Separated(sep) if sep.order() == first.order() => sep,
                _ => first,
            };
            sep.validate(g).map_err(Error::cert)?;
            if !s.is_subset(sep.a) || !t.is_subset(sep.b) || sep.order() >= k {
                return Err(Error::cert("separation does not split S from T"));
            }
            MengerOutcome::Separation(sep)
        }
    };
    Ok(out)
}

pub(crate) enum Cut {
    /// `limit` disjoint paths (only meaningful without protected vertices).
    Linked(Vec<Path>),
    /// A separation of `g[within]` of order below `limit`.
    Separated(Separation),
}

const INF: i32 = i32::MAX / 4;

struct Net {
    head: Vec<usize>,
    cap: Vec<i32>,
    adj: Vec<Vec<usize>>,
}

impl Net {
    fn new(nodes: usize) -> Self {
        Net {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i32) {
        self.adj[u].push(self.head.len());
        self.head.push(v);
        self.cap.push(c);
        self.adj[v].push(self.head.len());
        self.head.push(u);
        self.cap.push(0);
    }

    /// Nodes reachable from `src` in the residual network, plus BFS parents
    /// (edge ids).
    fn bfs(&self, src: usize) -> (Vec<bool>, Vec<usize>) {
        let mut seen = vec![false; self.adj.len()];
        let mut via = vec![usize::MAX; self.adj.len()];
        seen[src] = true;
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    via[v] = e;
                    q.push_back(v);
                }
            }
        }
        (seen, via)
    }
}

/// Vertex-capacitated max flow from `s` to `t` inside `within`, stopping
/// at `limit`. Vertices in `protected` cannot be cut. Returns either
/// `limit` disjoint paths, each trimmed to run from its last `S` vertex to
/// its first `T` vertex, or the separation read off the residual network.
pub(crate) fn vertex_cut(
    g: &Graph,
    within: VertexSet,
    s: VertexSet,
    t: VertexSet,
    protected: VertexSet,
    limit: usize,
) -> Cut {
    let s = s.intersection(within);
    let t = t.intersection(within);
    let n = g.n();
    let (src, sink) = (2 * n, 2 * n + 1);
    let mut net = Net::new(2 * n + 2);
    for v in within.iter() {
        net.add(2 * v, 2 * v + 1, if protected.contains(v) { INF } else { 1 });
        for w in g.neighbors(v).intersection(within).iter() {
            net.add(2 * v + 1, 2 * w, INF);
        }
    }
    for v in s.iter() {
        net.add(src, 2 * v, INF);
    }
    for v in t.iter() {
        net.add(2 * v + 1, sink, INF);
    }
    let mut flow = 0;
    while flow < limit {
        let (seen, via) = net.bfs(src);
        if !seen[sink] {
            break;
        }
        let mut x = sink;
        while x != src {
            let e = via[x];
            net.cap[e] -= 1;
            net.cap[e ^ 1] += 1;
            x = net.head[e ^ 1];
        }
        flow += 1;
    }
    if flow == limit {
        return Cut::Linked(extract_paths(&mut net, n, s, t, limit));
    }
    let (seen, _) = net.bfs(src);
    let side_a: VertexSet = within.iter().filter(|&v| seen[2 * v]).collect();
    let cut: VertexSet = side_a.iter().filter(|&v| !seen[2 * v + 1]).collect();
    let side_b = within.difference(side_a).union(cut);
    debug_assert_eq!(cut.len(), flow);
    Cut::Separated(Separation { a: side_a, b: side_b })
}

fn extract_paths(net: &mut Net, n: usize, s: VertexSet, t: VertexSet, count: usize) -> Vec<Path> {
    let (src, sink) = (2 * n, 2 * n + 1);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut walk = Vec::new();
        let mut x = src;
        while x != sink {
            // Forward edges carry flow when their reverse has residual > 0.
            let e = *net.adj[x]
                .iter()
                .find(|&&e| e % 2 == 0 && net.cap[e ^ 1] > 0)
                .expect("flow conservation");
            net.cap[e ^ 1] -= 1;
            x = net.head[e];
            if x < 2 * n && x % 2 == 0 {
                walk.push(x / 2);
            }
        }
        let first_t = walk.iter().position(|&v| t.contains(v)).expect("path ends in T");
        let last_s = walk[..=first_t]
            .iter()
            .rposition(|&v| s.contains(v))
            .expect("path starts in S");
        out.push(Path(walk[last_s..=first_t].to_vec()));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, Family};

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    #[test]
    fn c4_linkage() {
        let g = family(Family::Cycle, &[4]).unwrap();
        match menger(&g, set(&[0, 1]), set(&[2, 3]), 2).unwrap() {
            MengerOutcome::Linkage(l) => {
                assert_eq!(l.order(), 2);
                assert!(l.paths.iter().all(|p| p.len() == 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn p3_separation() {
        let g = family(Family::Path, &[3]).unwrap();
        match menger(&g, set(&[0]), set(&[2]), 2).unwrap() {
            MengerOutcome::Separation(sep) => {
                assert_eq!(
                    sep,
                    Separation {
                        a: set(&[0, 1]),
                        b: set(&[1, 2])
                    }
                );
                assert_eq!(sep.order(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn k5_single_path() {
        let g = Graph::complete(5).unwrap();
        match menger(&g, set(&[0]), set(&[4]), 1).unwrap() {
            MengerOutcome::Linkage(l) => assert_eq!(l.paths, vec![Path(vec![0, 4])]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shared_vertex_is_a_trivial_path() {
        let g = family(Family::Path, &[3]).unwrap();
        match menger(&g, set(&[1]), set(&[1, 2]), 1).unwrap() {
            MengerOutcome::Linkage(l) => assert_eq!(l.paths, vec![Path(vec![1])]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn protected_vertices_are_never_cut() {
        // 0 - 1 - 2 with 2 protected: the cut must be {0} or {1}.
        let g = family(Family::Path, &[3]).unwrap();
        match vertex_cut(&g, g.vertex_set(), set(&[0]), set(&[2]), set(&[2]), 2) {
            Cut::Separated(sep) => {
                assert_eq!(sep.order(), 1);
                assert!(!sep.a.contains(2));
            }
            Cut::Linked(_) => panic!("no two disjoint paths exist"),
        }
    }
}
