//! Weak reachability and weak coloring numbers.
//!
//! `WReach_r[G, σ, v]` is the set of `w` for which some path from `v` to
//! `w` of length at most `r` has `w` as its σ-minimum. `WReach_0[v] = {v}`.

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};

/// Default vertex cap for [`wcol_exact`].
pub const DEFAULT_WCOL_BUDGET: usize = 10;

/// A linear order of `V(G)` stored as ranks: `rank[v] = 0` is the σ-minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Ordering {
    rank: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Ordering {
    type Error = String;

    fn try_from(rank: Vec<usize>) -> std::result::Result<Self, String> {
        Ordering::from_rank(rank).map_err(|e| e.to_string())
    }
}

impl From<Ordering> for Vec<usize> {
    fn from(o: Ordering) -> Self {
        o.rank
    }
}

impl Ordering {
    pub fn identity(n: usize) -> Self {
        Ordering { rank: (0..n).collect() }
    }

    pub fn from_rank(rank: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; rank.len()];
        for &r in &rank {
            if r >= rank.len() || std::mem::replace(&mut seen[r], true) {
                return Err(Error::input("ranks must form a permutation"));
            }
        }
        Ok(Ordering { rank })
    }

    /// From the vertices listed smallest first.
    pub fn from_sequence(seq: &[usize]) -> Result<Self> {
        let mut rank = vec![usize::MAX; seq.len()];
        for (i, &v) in seq.iter().enumerate() {
            if v >= seq.len() || rank[v] != usize::MAX {
                return Err(Error::input("sequence must list every vertex once"));
            }
            rank[v] = i;
        }
        Ok(Ordering { rank })
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.rank.len()];
        for (v, &r) in self.rank.iter().enumerate() {
            seq[r] = v;
        }
        seq
    }

    /// Vertices ranked at least `rank(w)`.
    fn at_or_after(&self, w: usize) -> VertexSet {
        let r = self.rank[w];
        (0..self.rank.len()).filter(|&u| self.rank[u] >= r).collect()
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.rank.len() != g.n() {
            return Err(Error::input("ordering size differs from the graph"));
        }
        Ok(())
    }
}

/// `WReach_r[G, σ, v]`.
pub fn wreach(g: &Graph, sigma: &Ordering, v: usize, r: usize) -> Result<VertexSet> {
    sigma.check(g)?;
    g.check_vertex(v)?;
    Ok((0..g.n())
        .filter(|&w| sigma.rank(w) <= sigma.rank(v))
        .filter(|&w| g.distance_within(w, v, sigma.at_or_after(w)).is_some_and(|d| d <= r))
        .collect())
}

/// `|WReach_r[G, σ, v]|` for every `v`.
pub fn wreach_sizes(g: &Graph, sigma: &Ordering, r: usize) -> Result<Vec<usize>> {
    sigma.check(g)?;
    let mut size = vec![0; g.n()];
    for w in 0..g.n() {
        for v in g.ball_within(w, r, sigma.at_or_after(w)).iter() {
            size[v] += 1;
        }
    }
    Ok(size)
}

/// `wcol_r(G, σ)`; 0 on the empty graph.
pub fn wcol_of_ordering(g: &Graph, sigma: &Ordering, r: usize) -> Result<usize> {
    Ok(wreach_sizes(g, sigma, r)?.into_iter().max().unwrap_or(0))
}

/// Exact `wcol_r(G)` with an optimal ordering, for at most
/// [`DEFAULT_WCOL_BUDGET`] vertices.
pub fn wcol_exact(g: &Graph, r: usize) -> Result<(usize, Ordering)> {
    wcol_exact_with(g, r, DEFAULT_WCOL_BUDGET)
}

/// Branch and bound over ordering prefixes. Placing `w` next adds one to
/// every vertex of the `r`-ball of `w` in `G[unplaced ∪ {w}]`, so the
/// running maximum is a lower bound for every completion.
pub fn wcol_exact_with(g: &Graph, r: usize, max_n: usize) -> Result<(usize, Ordering)> {
    let n = g.n();
    if n > max_n {
        return Err(Error::BudgetExceeded {
            what: "exact wcol vertex count",
            limit: max_n as u64,
        });
    }
    if n == 0 {
        return Ok((0, Ordering::identity(0)));
    }
    let greedy = greedy_order(g, r);
    let mut bb = Bb {
        g,
        r,
        best: wcol_of_ordering(g, &Ordering::from_sequence(&greedy)?, r)?,
        best_seq: greedy,
        seq: Vec::with_capacity(n),
    };
    bb.rec(g.vertex_set(), &mut vec![0; n], 0);
    Ok((bb.best, Ordering::from_sequence(&bb.best_seq)?))
}

/// Front-first greedy: place the vertex whose placement raises the running
/// maximum least (ties by id).
fn greedy_order(g: &Graph, r: usize) -> Vec<usize> {
    let mut unplaced = g.vertex_set();
    let mut cnt = vec![0; g.n()];
    let mut seq = Vec::new();
    while !unplaced.is_empty() {
        let w = unplaced
            .iter()
            .min_by_key(|&w| g.ball_within(w, r, unplaced).iter().map(|v| cnt[v] + 1).max().unwrap())
            .unwrap();
        for v in g.ball_within(w, r, unplaced).iter() {
            cnt[v] += 1;
        }
        unplaced.remove(w);
        seq.push(w);
    }
    seq
}

struct Bb<'a> {
    g: &'a Graph,
    r: usize,
    best: usize,
    best_seq: Vec<usize>,
    seq: Vec<usize>,
}

impl Bb<'_> {
    fn rec(&mut self, unplaced: VertexSet, cnt: &mut [usize], cur: usize) {
        if unplaced.is_empty() {
            if cur < self.best {
                self.best = cur;
                self.best_seq = self.seq.clone();
            }
            return;
        }
        for w in unplaced.iter() {
            let ball = self.g.ball_within(w, self.r, unplaced);
            let next = ball.iter().map(|v| cnt[v] + 1).max().unwrap().max(cur);
            if next >= self.best {
                continue;
            }
            for v in ball.iter() {
                cnt[v] += 1;
            }
            self.seq.push(w);
            self.rec(unplaced.without(w), cnt, next);
            self.seq.pop();
            for v in ball.iter() {
                cnt[v] -= 1;
            }
        }
    }
}

/// `C(n, k)`, saturating.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationReport {
    /// Every vertex's earlier neighbourhood is a clique of size at most `t`.
    pub back_cliques_ok: bool,
    /// `C(r + t, t)`.
    pub bound: u128,
    /// `wcol_r(G, σ)`.
    pub measured: usize,
}

impl EliminationReport {
    /// The bound must hold whenever its hypothesis does.
    pub fn holds(&self) -> bool {
        !self.back_cliques_ok || self.measured as u128 <= self.bound
    }
}

/// Checks the hypothesis and conclusion of the elimination-ordering bound
/// `wcol_r(G, σ) <= C(r + t, t)`.
pub fn verify_elimination_bound(g: &Graph, sigma: &Ordering, t: usize, r: usize) -> Result<EliminationReport> {
    sigma.check(g)?;
    let back_cliques_ok = (0..g.n()).all(|v| {
        let back: VertexSet = g
            .neighbors(v)
            .iter()
            .filter(|&u| sigma.rank(u) < sigma.rank(v))
            .collect();
        back.len() <= t && g.is_clique(back)
    });
    Ok(EliminationReport {
        back_cliques_ok,
        bound: binomial((r + t) as u64, t as u64),
        measured: wcol_of_ordering(g, sigma, r)?,
    })
}

/// A vertex set `covered` lying on a geodesic of a supergraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgeodesicCertificate {
    pub host_plus: Graph,
    pub geodesic: Path,
    pub covered: VertexSet,
}

impl SubgeodesicCertificate {
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        if self.host_plus.n() < g.n() {
            return Err("the supergraph is missing vertices".into());
        }
        if let Some((u, v)) = g.edges().into_iter().find(|&(u, v)| !self.host_plus.has_edge(u, v)) {
            return Err(format!("edge {u}-{v} is missing from the supergraph"));
        }
        match self.host_plus.is_geodesic(&self.geodesic) {
            Ok(true) => {}
            Ok(false) => return Err("the path is not a geodesic of the supergraph".into()),
            Err(e) => return Err(e.to_string()),
        }
        if !self
            .covered
            .is_subset(self.geodesic.vertices().intersection(g.vertex_set()))
        {
            return Err("covered vertices must lie on the geodesic and in G".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallReport {
    /// `2r + 1`.
    pub bound: usize,
    /// `max_v |N^r[v] ∩ S|`.
    pub max: usize,
    /// A vertex attaining the maximum.
    pub argmax: Option<usize>,
    pub per_vertex: Vec<usize>,
}

impl BallReport {
    pub fn ok(&self) -> bool {
        self.max <= self.bound
    }
}

/// Measures `|N^r_G[v] ∩ S|` for every `v`.
pub fn ball_geodesic_check(g: &Graph, cert: &SubgeodesicCertificate, r: usize) -> Result<BallReport> {
    cert.validate(g).map_err(Error::input)?;
    let per_vertex: Vec<usize> = (0..g.n())
        .map(|v| g.ball_within(v, r, g.vertex_set()).intersection(cert.covered).len())
        .collect();
    let max = per_vertex.iter().copied().max().unwrap_or(0);
    Ok(BallReport {
        bound: 2 * r + 1,
        max,
        argmax: per_vertex.iter().position(|&x| x == max).filter(|_| g.n() > 0),
        per_vertex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, random_graph, Family};

    #[test]
    fn wreach_examples() {
        let p5 = family(Family::Path, &[5]).unwrap();
        let id = Ordering::identity(5);
        assert_eq!(wreach(&p5, &id, 4, 2).unwrap(), VertexSet::from_iter([2, 3, 4]));
        assert_eq!(wreach(&p5, &id, 0, 3).unwrap(), VertexSet::singleton(0));
        assert_eq!(wreach(&p5, &id, 3, 0).unwrap(), VertexSet::singleton(3));
        let k4 = Graph::complete(4).unwrap();
        let sigma = Ordering::from_sequence(&[2, 0, 3, 1]).unwrap();
        assert_eq!(wreach(&k4, &sigma, 1, 1).unwrap().len(), 4);
    }

    #[test]
    fn wcol_examples() {
        let p5 = family(Family::Path, &[5]).unwrap();
        assert_eq!(wcol_of_ordering(&p5, &Ordering::identity(5), 2).unwrap(), 3);
        assert_eq!(
            wcol_of_ordering(&Graph::empty(0).unwrap(), &Ordering::identity(0), 2).unwrap(),
            0
        );
        for n in 1..=6 {
            let k = Graph::complete(n).unwrap();
            assert_eq!(wcol_of_ordering(&k, &Ordering::identity(n), 1).unwrap(), n);
        }
        assert_eq!(wcol_exact(&p5, 2).unwrap().0, 3);
        assert_eq!(wcol_exact(&family(Family::Cycle, &[5]).unwrap(), 1).unwrap().0, 3);
        for r in 0..4 {
            assert_eq!(wcol_exact(&Graph::empty(1).unwrap(), r).unwrap().0, 1);
        }
    }

    #[test]
    fn exact_ordering_attains_value() {
        for seed in 0..30 {
            let g = random_graph(7, 0.4, seed).unwrap();
            for r in 1..=3 {
                let (v, o) = wcol_exact(&g, r).unwrap();
                assert_eq!(wcol_of_ordering(&g, &o, r).unwrap(), v);
            }
        }
    }

    #[test]
    fn wcol_1_is_degeneracy_plus_one() {
        for seed in 0..40 {
            let g = random_graph(9, 0.35, seed).unwrap();
            assert_eq!(wcol_exact(&g, 1).unwrap().0, g.degeneracy() + 1);
        }
    }

    #[test]
    fn elimination_examples() {
        let k4 = Graph::complete(4).unwrap();
        let rep = verify_elimination_bound(&k4, &Ordering::identity(4), 3, 1).unwrap();
        assert_eq!((rep.back_cliques_ok, rep.bound, rep.measured), (true, 4, 4));
        let c4 = family(Family::Cycle, &[4]).unwrap();
        let rep = verify_elimination_bound(&c4, &Ordering::from_sequence(&[0, 2, 1, 3]).unwrap(), 1, 1).unwrap();
        assert!(!rep.back_cliques_ok);
        assert_eq!(binomial(6, 3), 20);
    }

    #[test]
    fn ball_examples() {
        let p9 = family(Family::Path, &[9]).unwrap();
        let cert = SubgeodesicCertificate {
            host_plus: p9.clone(),
            geodesic: Path((0..9).collect()),
            covered: p9.vertex_set(),
        };
        assert_eq!(ball_geodesic_check(&p9, &cert, 1).unwrap().max, 3);
        let c6 = family(Family::Cycle, &[6]).unwrap();
        let cert = SubgeodesicCertificate {
            host_plus: c6.clone(),
            geodesic: Path(vec![0, 1, 2, 3]),
            covered: VertexSet::from_iter([0, 1, 2, 3]),
        };
        let rep = ball_geodesic_check(&c6, &cert, 2).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.per_vertex[1], 4);
        let bad = SubgeodesicCertificate {
            host_plus: c6.clone(),
            geodesic: Path(vec![0, 1, 2, 3, 4]),
            covered: VertexSet::singleton(0),
        };
        assert!(ball_geodesic_check(&c6, &bad, 1).is_err());
    }
}
