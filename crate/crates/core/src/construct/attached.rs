use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::minors::{
    find_attached_within, find_model_within, vertex_cut, AttachedModel, Cut, JoinPattern, Model, SearchConfig,
    Separation,
};

/// Outcome of [`attached_or_separation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dichotomy {
    /// An `R`-attached model of `pattern = K_{a−k} ⊕ H′`, where `H′` is the
    /// subgraph of `H` induced by `kept`.
    Attached {
        pattern: JoinPattern,
        kept: VertexSet,
        attached: AttachedModel,
    },
    /// A separation of order at most `k − 1` with `R ⊆ A` and the branch
    /// set of apex `apex` inside `B − A`.
    Separated { separation: Separation, apex: usize },
}

/// Given a model of `K_a ⊕ H` in `g` with a clique added on `roots`,
/// returns either an attached model of `K_{a−k} ⊕ H′` with `H′` missing at
/// most `2k` vertices of `H`, or a small separation cutting some apex
/// branch set away from the roots.
///
/// Each apex branch set is tried in order with a minimum vertex cut; when
/// none is small, attached models are searched with `|V(H) − V(H′)|`
/// increasing.
pub fn attached_or_separation(
    g: &Graph,
    roots: VertexSet,
    pattern: &JoinPattern,
    model: &Model,
    cfg: &SearchConfig,
) -> Result<Dichotomy> {
    dichotomy_within(g, g.vertex_set(), roots, pattern, model, cfg)
}

pub(crate) fn dichotomy_within(
    g: &Graph,
    within: VertexSet,
    roots: VertexSet,
    pattern: &JoinPattern,
    model: &Model,
    cfg: &SearchConfig,
) -> Result<Dichotomy> {
    g.check_set(roots)?;
    let k = roots.len();
    if pattern.a < 2 * k {
        return Err(Error::input(format!("need a >= 2k, got a = {} and k = {k}", pattern.a)));
    }
    if !roots.is_subset(within) {
        return Err(Error::input("roots must lie in the graph"));
    }
    let host = g.restrict(within).with_cliques(&[roots]);
    model.validate(&host, &pattern.graph()?).map_err(Error::input)?;
    for z in 0..pattern.a {
        let bz = model.branch(z);
        if bz.intersects(roots) {
            continue;
        }
        if let Cut::Separated(sep) = vertex_cut(g, within, roots, bz, bz, k) {
            sep.validate_within(g, within).map_err(Error::cert)?;
            if !roots.is_subset(sep.a) || !bz.is_subset(sep.b.difference(sep.a)) {
                return Err(Error::cert("cut does not separate the roots from the apex"));
            }
            return Ok(Dichotomy::Separated {
                separation: sep,
                apex: z,
            });
        }
    }
    let root_sets: Vec<VertexSet> = roots.iter().map(VertexSet::singleton).collect();
    let rest = &pattern.rest;
    for removed in 0..=(2 * k).min(rest.n()) {
        for drop in combinations(rest.n(), removed) {
            let kept = rest.vertex_set().difference(drop.iter().collect());
            let (sub, _) = rest.induced(kept);
            let smaller = JoinPattern::new(pattern.a - k, sub);
            if let Some(attached) = find_attached_within(g, within.difference(roots), &smaller, &root_sets, cfg)? {
                return Ok(Dichotomy::Attached {
                    pattern: smaller,
                    kept,
                    attached,
                });
            }
        }
    }
    Err(Error::cert("neither a small separation nor an attached model exists"))
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] < n - r + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// A separation whose separator carries an attached clique model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedCliques {
    pub separation: Separation,
    /// `K_ℓ` model in `B` attached to the separator vertices in increasing
    /// order, `ℓ` being the order of the separation.
    pub attached: AttachedModel,
}

impl RootedCliques {
    pub fn order(&self) -> usize {
        self.separation.order()
    }

    pub fn validate(&self, g: &Graph, roots: VertexSet) -> std::result::Result<(), String> {
        self.validate_within(g, g.vertex_set(), roots)
    }

    pub(crate) fn validate_within(
        &self,
        g: &Graph,
        within: VertexSet,
        roots: VertexSet,
    ) -> std::result::Result<(), String> {
        let sep = &self.separation;
        sep.validate_within(g, within)?;
        if !roots.is_subset(sep.a) {
            return Err("the roots are not on the A side".into());
        }
        let l = sep.order();
        if l == 0 || l > roots.len() {
            return Err(format!("order {l} is outside 1..={}", roots.len()));
        }
        let expect: Vec<VertexSet> = sep.separator().iter().map(VertexSet::singleton).collect();
        if self.attached.roots != expect {
            return Err("the clique is not attached to the separator".into());
        }
        let pattern = JoinPattern::new(l, Graph::empty(0).map_err(|e| e.to_string())?);
        self.attached.validate(&g.restrict(sep.b), &pattern)
    }
}

/// For a connected `g` with `K_{2k}` a minor of `g` plus a clique on the
/// `k` roots: a separation `(A, B)` of some order `ℓ ∈ 1..=k` with the roots
/// in `A` and a `K_ℓ` model in `B` attached to `A ∩ B`.
pub fn rooted_clique_separation(g: &Graph, roots: VertexSet, cfg: &SearchConfig) -> Result<RootedCliques> {
    if !g.is_connected() {
        return Err(Error::input("the graph must be connected"));
    }
    rooted_cliques_within(g, g.vertex_set(), roots, cfg)
}

pub(crate) fn rooted_cliques_within(
    g: &Graph,
    within: VertexSet,
    roots: VertexSet,
    cfg: &SearchConfig,
) -> Result<RootedCliques> {
    g.check_set(roots)?;
    if roots.is_empty() || !roots.is_subset(within) {
        return Err(Error::input("roots must be a non-empty subset of the graph"));
    }
    let (a, b, attached) = rooted_step(g, within, roots, cfg)?;
    let out = RootedCliques {
        separation: Separation { a, b },
        attached,
    };
    out.validate_within(g, within, roots).map_err(Error::cert)?;
    Ok(out)
}

fn rooted_step(
    g: &Graph,
    within: VertexSet,
    roots: VertexSet,
    cfg: &SearchConfig,
) -> Result<(VertexSet, VertexSet, AttachedModel)> {
    let k = roots.len();
    if k == 1 {
        let r = roots.min().unwrap();
        let Some(v) = g.neighbors(r).intersection(within).min() else {
            return Err(Error::precondition("K_2 is not a minor of the rooted graph", None));
        };
        let attached = AttachedModel {
            model: Model::new(vec![VertexSet::singleton(v)]),
            roots: vec![roots],
            attachment: vec![0],
        };
        return Ok((roots, within, attached));
    }
    let host = g.restrict(within).with_cliques(&[roots]);
    let clique = Graph::complete(2 * k)?;
    let Some(model) = find_model_within(&host, within, &clique, cfg)? else {
        return Err(Error::precondition(
            format!("K_{} is not a minor of the rooted graph", 2 * k),
            None,
        ));
    };
    let pattern = JoinPattern::new(2 * k, Graph::empty(0)?);
    match dichotomy_within(g, within, roots, &pattern, &model, cfg)? {
        Dichotomy::Attached { attached, .. } => Ok((roots, within, attached)),
        Dichotomy::Separated { separation, apex } => {
            let (c, d) = (separation.a, separation.b);
            let e = g.reach(model.branch(apex), d);
            let inner = c.intersection(e);
            let (a2, b2, attached) = rooted_step(g, e, inner, cfg)?;
            Ok((c.union(d.difference(e)).union(a2), b2, attached))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, Family};

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn complete_graph_gives_an_attached_model() {
        let g = Graph::complete(5).unwrap();
        let pattern = JoinPattern::new(2, Graph::empty(1).unwrap());
        let model = Model::new(vec![set(&[1]), set(&[2]), set(&[3])]);
        match attached_or_separation(&g, set(&[0]), &pattern, &model, &cfg()).unwrap() {
            Dichotomy::Attached {
                pattern: p,
                attached,
                kept,
            } => {
                assert_eq!(p.a, 1);
                assert_eq!(kept, set(&[0]));
                attached.validate(&g, &p).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cut_vertex_separates() {
        // Triangles {0,1,2} and {2,3,4}; root 0, K_2 model in the second.
        let g = Graph::new(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let pattern = JoinPattern::new(2, Graph::empty(0).unwrap());
        let model = Model::new(vec![set(&[3]), set(&[4])]);
        match attached_or_separation(&g, set(&[0]), &pattern, &model, &cfg()).unwrap() {
            Dichotomy::Separated { separation, apex } => {
                assert_eq!(separation.order(), 0);
                assert!(model.branch(apex).is_subset(separation.b.difference(separation.a)));
            }
            Dichotomy::Attached { attached, pattern, .. } => attached.validate(&g, &pattern).unwrap(),
        }
    }

    #[test]
    fn no_roots_keeps_everything() {
        let g = family(Family::Cycle, &[4]).unwrap();
        let pattern = JoinPattern::new(1, Graph::new(2, &[(0, 1)]).unwrap());
        let model = Model::new(vec![set(&[0]), set(&[1]), set(&[2, 3])]);
        match attached_or_separation(&g, VertexSet::EMPTY, &pattern, &model, &cfg()).unwrap() {
            Dichotomy::Attached { pattern: p, kept, .. } => {
                assert_eq!(p, pattern);
                assert_eq!(kept, set(&[0, 1]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_small_a() {
        let g = Graph::complete(4).unwrap();
        let pattern = JoinPattern::new(1, Graph::empty(0).unwrap());
        let model = Model::new(vec![set(&[3])]);
        assert!(attached_or_separation(&g, set(&[0]), &pattern, &model, &cfg()).is_err());
    }

    #[test]
    fn rooted_base_case() {
        let g = Graph::complete(4).unwrap();
        let rc = rooted_clique_separation(&g, set(&[0]), &cfg()).unwrap();
        assert_eq!(
            rc.separation,
            Separation {
                a: set(&[0]),
                b: set(&[0, 1, 2, 3])
            }
        );
        assert_eq!(rc.attached.model.branch_sets, vec![set(&[1])]);
        let p3 = family(Family::Path, &[3]).unwrap();
        let rc = rooted_clique_separation(&p3, set(&[0]), &cfg()).unwrap();
        assert_eq!(rc.attached.model.branch_sets, vec![set(&[1])]);
    }

    #[test]
    fn rooted_k6_with_pendant_roots() {
        // K_6 on 0..6, roots 6 and 7 hanging off 0.
        let mut edges: Vec<(usize, usize)> = Graph::complete(6).unwrap().edges();
        edges.extend([(6, 0), (7, 0)]);
        let g = Graph::new(8, &edges).unwrap();
        let roots = set(&[6, 7]);
        let rc = rooted_clique_separation(&g, roots, &cfg()).unwrap();
        rc.validate(&g, roots).unwrap();
        assert_eq!(rc.order(), 1);
    }

    #[test]
    fn rooted_k6_two_attachments() {
        let mut edges: Vec<(usize, usize)> = Graph::complete(6).unwrap().edges();
        edges.extend([(6, 0), (7, 1)]);
        let g = Graph::new(8, &edges).unwrap();
        let roots = set(&[6, 7]);
        let rc = rooted_clique_separation(&g, roots, &cfg()).unwrap();
        rc.validate(&g, roots).unwrap();
        assert_eq!(rc.order(), 2);
    }
}
