use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::Result;
use crate::graph::{Graph, Path};

/// Branch sets indexed by pattern vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Model {
    pub branch_sets: Vec<VertexSet>,
}

impl Model {
    pub fn new(branch_sets: Vec<VertexSet>) -> Self {
        Model { branch_sets }
    }

    pub fn branch(&self, x: usize) -> VertexSet {
        self.branch_sets[x]
    }

    pub fn len(&self) -> usize {
        self.branch_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branch_sets.is_empty()
    }

    /// Union of all branch sets.
    pub fn vertices(&self) -> VertexSet {
        self.branch_sets.iter().fold(VertexSet::EMPTY, |a, &b| a.union(b))
    }

    /// Checks that this is a `pattern`-model in `host`.
    pub fn validate(&self, host: &Graph, pattern: &Graph) -> std::result::Result<(), String> {
        if self.branch_sets.len() != pattern.n() {
            return Err(format!(
                "{} branch sets for a pattern on {} vertices",
                self.branch_sets.len(),
                pattern.n()
            ));
        }
        let mut seen = VertexSet::EMPTY;
        for (x, &b) in self.branch_sets.iter().enumerate() {
            if b.is_empty() {
                return Err(format!("branch set {x} is empty"));
            }
            if !b.is_subset(host.vertex_set()) {
                return Err(format!("branch set {x} leaves the host"));
            }
            if !host.is_connected_set(b) {
                return Err(format!("branch set {x} is disconnected"));
            }
            if b.intersects(seen) {
                return Err(format!("branch set {x} overlaps an earlier one"));
            }
            seen = seen.union(b);
        }
        for (x, y) in pattern.edges() {
            if !host
                .neighborhood(self.branch_sets[x], host.vertex_set())
                .intersects(self.branch_sets[y])
            {
                return Err(format!("no host edge for pattern edge {x}-{y}"));
            }
        }
        Ok(())
    }

    /// Replaces every vertex `v` by the set `origin[v]`.
    pub(crate) fn expand(&self, origin: &[VertexSet]) -> Model {
        Model::new(
            self.branch_sets
                .iter()
                .map(|b| b.iter().fold(VertexSet::EMPTY, |a, v| a.union(origin[v])))
                .collect(),
        )
    }
}

/// The pattern `K_a ⊕ rest`: apex vertices are `0..a`, the vertices of
/// `rest` follow shifted by `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinPattern {
    pub a: usize,
    pub rest: Graph,
}

impl JoinPattern {
    pub fn new(a: usize, rest: Graph) -> Self {
        JoinPattern { a, rest }
    }

    pub fn graph(&self) -> Result<Graph> {
        Graph::join(&Graph::complete(self.a)?, &self.rest)
    }

    pub fn n(&self) -> usize {
        self.a + self.rest.n()
    }
}

/// A model of `K_a ⊕ H` avoiding the root sets, with apex `attachment[i]`
/// touching root set `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachedModel {
    pub model: Model,
    pub roots: Vec<VertexSet>,
    pub attachment: Vec<usize>,
}

impl AttachedModel {
    pub fn validate(&self, host: &Graph, pattern: &JoinPattern) -> std::result::Result<(), String> {
        let pg = pattern.graph().map_err(|e| e.to_string())?;
        self.model.validate(host, &pg)?;
        if self.attachment.len() != self.roots.len() {
            return Err("one attachment per root set is required".into());
        }
        let all_roots = self.roots.iter().fold(VertexSet::EMPTY, |a, &b| a.union(b));
        if self.model.vertices().intersects(all_roots) {
            return Err("the model meets a root set".into());
        }
        let mut used = VertexSet::EMPTY;
        for (i, (&r, &v)) in self.roots.iter().zip(&self.attachment).enumerate() {
            if v >= pattern.a {
                return Err(format!("root {i} is attached to a non-apex vertex"));
            }
            if used.contains(v) {
                return Err(format!("apex {v} is attached twice"));
            }
            used.insert(v);
            if !host.neighborhood(r, host.vertex_set()).intersects(self.model.branch(v)) {
                return Err(format!("apex {v} does not touch root set {i}"));
            }
        }
        Ok(())
    }
}

/// A separation `(A, B)`: `A ∪ B = V` with no edge between `A - B` and
/// `B - A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub a: VertexSet,
    pub b: VertexSet,
}

impl Separation {
    pub fn order(&self) -> usize {
        self.a.intersection(self.b).len()
    }

    pub fn separator(&self) -> VertexSet {
        self.a.intersection(self.b)
    }

    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        self.validate_within(g, g.vertex_set())
    }

    /// Checks the separation in `g[within]`.
    pub fn validate_within(&self, g: &Graph, within: VertexSet) -> std::result::Result<(), String> {
        if self.a.union(self.b) != within {
            return Err("sides do not cover the graph".into());
        }
        let only_a = self.a.difference(self.b);
        let only_b = self.b.difference(self.a);
        if g.neighborhood(only_a, within).intersects(only_b) {
            return Err("an edge crosses the separation".into());
        }
        Ok(())
    }
}

/// Vertex-disjoint `S`–`T` paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linkage {
    pub paths: Vec<Path>,
}

impl Linkage {
    pub fn order(&self) -> usize {
        self.paths.len()
    }

    pub fn validate(&self, g: &Graph, s: VertexSet, t: VertexSet) -> std::result::Result<(), String> {
        let ends = s.union(t);
        let mut seen = VertexSet::EMPTY;
        for (i, p) in self.paths.iter().enumerate() {
            g.check_path(p).map_err(|e| format!("path {i}: {e}"))?;
            let vs = p.vertices();
            if vs.intersects(seen) {
                return Err(format!("path {i} meets an earlier path"));
            }
            seen = seen.union(vs);
            if !s.contains(p.0[0]) || !t.contains(*p.0.last().unwrap()) {
                return Err(format!("path {i} does not run from S to T"));
            }
            if p.0.len() > 2 && p.0[1..p.0.len() - 1].iter().any(|&v| ends.contains(v)) {
                return Err(format!("path {i} has an internal vertex in S or T"));
            }
        }
        Ok(())
    }
}
