use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::generators::u_graph;
use crate::graph::Graph;
use crate::minors::{
    find_attached_within, find_model_within, vertex_cut, AttachedModel, Cut, JoinPattern, Model, SearchConfig,
};

use super::attached::rooted_cliques_within;

/// One component `C^i` of `G − C` with its neighbourhood `N^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Periphery {
    pub component: VertexSet,
    pub interface: VertexSet,
    /// `K_{|N^i|}` model in `G[C^i ∪ N^i]` attached to the interface
    /// vertices in increasing order.
    pub attached: AttachedModel,
}

/// The core `C`, its peripheries, and the torso `C^0`: `G[C − R]` plus a
/// clique on every `N^i − R`. The torso keeps the ids of `G`; vertices
/// outside `C − R` are isolated in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutDecomposition {
    pub core: VertexSet,
    pub peripheries: Vec<Periphery>,
    pub torso: Graph,
}

impl CutDecomposition {
    /// Checks everything except the minor-freeness of the torso.
    pub fn validate(&self, g: &Graph, roots: VertexSet) -> std::result::Result<(), String> {
        let k = roots.len();
        if !roots.is_subset(self.core) || !self.core.is_subset(g.vertex_set()) {
            return Err("the core must contain the roots and lie in the graph".into());
        }
        let comps = g.components_within(g.vertex_set().difference(self.core));
        if comps.len() != self.peripheries.len() {
            return Err("peripheries are not the components outside the core".into());
        }
        let mut cliques = Vec::new();
        for (p, &c) in self.peripheries.iter().zip(&comps) {
            if p.component != c || p.interface != g.neighborhood(c, g.vertex_set()) {
                return Err("periphery does not match its component".into());
            }
            if p.interface.len() + 1 > k.max(1) {
                return Err(format!(
                    "interface of size {} exceeds k - 1 = {}",
                    p.interface.len(),
                    k as i64 - 1
                ));
            }
            let root_sets: Vec<VertexSet> = p.interface.iter().map(VertexSet::singleton).collect();
            if p.attached.roots != root_sets {
                return Err("attached clique does not use the interface as roots".into());
            }
            let pattern = JoinPattern::new(p.interface.len(), Graph::empty(0).map_err(|e| e.to_string())?);
            p.attached.validate(&g.restrict(c.union(p.interface)), &pattern)?;
            cliques.push(p.interface.difference(roots));
        }
        let expect = g.restrict(self.core.difference(roots)).with_cliques(&cliques);
        if expect != self.torso {
            return Err("torso is not the core minus the roots with completed interfaces".into());
        }
        Ok(())
    }
}

/// Decomposes a graph without an `R`-attached model of `K_a ⊕ U_{h,d}`
/// into a core whose torso excludes `K_{a+k} ⊕ U_{h,d+2k}` and
/// peripheries hanging off at most `k − 1` core vertices each.
///
/// While the working graph minus `R` still holds the larger pattern, an
/// apex branch set that a cut of order below `k` separates from `R` is
/// located; the component `D` beyond the cut is either dropped outright
/// (when it has no neighbours) or shrunk to the far side `W` of a rooted
/// clique separation, and `W` is replaced by a clique on its neighbourhood.
pub fn cut_decomposition(
    g: &Graph,
    roots: VertexSet,
    a: usize,
    h: usize,
    d: usize,
    cfg: &SearchConfig,
) -> Result<CutDecomposition> {
    g.check_set(roots)?;
    let k = roots.len();
    if a < k || d == 0 {
        return Err(Error::input("need a >= k and d >= 1"));
    }
    let mut work = g.clone();
    let mut alive = g.vertex_set();
    if k > 0 {
        let big = JoinPattern::new(a + k, u_graph(h, d + 2 * k)?).graph()?;
        while let Some(model) = find_model_within(&work, alive.difference(roots), &big, cfg)? {
            let Some((sep, apex)) = (0..a + k).find_map(|z| {
                let bz = model.branch(z);
                match vertex_cut(&work, alive, roots, bz, bz, k) {
                    Cut::Separated(sep) => Some((sep, z)),
                    Cut::Linked(_) => None,
                }
            }) else {
                return Err(attached_evidence(g, roots, a, h, d, cfg)?);
            };
            let beyond = work.reach(model.branch(apex), sep.b.difference(sep.a));
            let rim = work.neighborhood(beyond, alive);
            if rim.is_empty() {
                alive = alive.difference(beyond);
                continue;
            }
            let rc = rooted_cliques_within(&work, beyond.union(rim), rim, cfg)?;
            let far = work.reach(
                rc.attached.model.vertices(),
                rc.separation.b.difference(rc.separation.a),
            );
            let iface = work.neighborhood(far, alive);
            work = work.with_cliques(&[iface]);
            alive = alive.difference(far);
        }
    }
    let core = alive;
    let mut peripheries = Vec::new();
    let mut cliques = Vec::new();
    for comp in g.components_within(g.vertex_set().difference(core)) {
        let iface = g.neighborhood(comp, g.vertex_set());
        if iface.len() + 1 > k.max(1) {
            return Err(Error::cert(format!("interface of size {} exceeds k - 1", iface.len())));
        }
        let root_sets: Vec<VertexSet> = iface.iter().map(VertexSet::singleton).collect();
        let pattern = JoinPattern::new(iface.len(), Graph::empty(0)?);
        let attached = if iface.is_empty() {
            AttachedModel {
                model: Model::new(Vec::new()),
                roots: Vec::new(),
                attachment: Vec::new(),
            }
        } else {
            find_attached_within(g, comp, &pattern, &root_sets, cfg)?
                .ok_or_else(|| Error::cert("periphery without an attached clique"))?
        };
        cliques.push(iface.difference(roots));
        peripheries.push(Periphery {
            component: comp,
            interface: iface,
            attached,
        });
    }
    let torso = g.restrict(core.difference(roots)).with_cliques(&cliques);
    let out = CutDecomposition {
        core,
        peripheries,
        torso,
    };
    out.validate(g, roots).map_err(Error::cert)?;
    Ok(out)
}

/// The error raised when no cut exists, carrying the attached model that
/// must then exist if the search finds it.
fn attached_evidence(g: &Graph, roots: VertexSet, a: usize, h: usize, d: usize, cfg: &SearchConfig) -> Result<Error> {
    let pattern = JoinPattern::new(a, u_graph(h, d)?);
    let root_sets: Vec<VertexSet> = roots.iter().map(VertexSet::singleton).collect();
    let within = g.vertex_set().difference(roots);
    Ok(match find_attached_within(g, within, &pattern, &root_sets, cfg)? {
        Some(found) => Error::precondition(
            format!("the graph has an R-attached model of K_{a} + U_{{{h},{d}}}"),
            Some(found.model),
        ),
        None => Error::cert("no separation found and no attached model exists"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, Family};
    use crate::minors::find_model;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn no_roots_keeps_the_whole_graph() {
        let g = family(Family::Star, &[5]).unwrap();
        let cd = cut_decomposition(&g, VertexSet::EMPTY, 1, 2, 2, &cfg()).unwrap();
        assert_eq!(cd.core, g.vertex_set());
        assert!(cd.peripheries.is_empty());
        assert_eq!(cd.torso, g);
    }

    #[test]
    fn peels_a_dense_block() {
        // Root 0 on a path 0-1-2, and a K_5 hanging off vertex 2 via 2-3.
        let mut edges = vec![(0, 1), (1, 2), (2, 3)];
        for u in 3..8 {
            for v in u + 1..8 {
                edges.push((u, v));
            }
        }
        let g = Graph::new(8, &edges).unwrap();
        let roots = set(&[0, 1]);
        // No {0,1}-attached K_3 exists: the path is a bottleneck at 2.
        let cd = cut_decomposition(&g, roots, 3, 0, 1, &cfg()).unwrap();
        cd.validate(&g, roots).unwrap();
        assert!(!cd.peripheries.is_empty());
        assert!(cd.peripheries.iter().all(|p| p.interface.len() <= 1));
        let big = Graph::complete(5).unwrap();
        assert!(find_model(&cd.torso, &big).unwrap().is_none());
    }
}
