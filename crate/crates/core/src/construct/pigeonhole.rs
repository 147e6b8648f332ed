use std::collections::BTreeMap;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::generators::{tree_size, u_graph};
use crate::graph::Graph;
use crate::minors::{AttachedModel, JoinPattern, Model};

/// Combines disjoint `{R_1, ..., R_k}`-attached models of
/// `K_{k+1} ⊕ U_{h−1,d}` into a model of `K_k ⊕ U_{h,d}`.
///
/// Each model is labelled by the vertex `s_j ∈ R_j` (smallest first) its
/// `j`-th attached apex touches. The first label shared by `d` models wins;
/// apex `j` of the result is `s_j` plus the `j`-th attached apex of each of
/// them, and model `i`'s free apex roots tree `i` of `U_{h,d}` above its copy
/// of `U_{h−1,d}`. With at least `(d−1)2^k + 1` models some label is always
/// shared `d` times.
pub fn pigeonhole_assemble(
    g: &Graph,
    h: usize,
    d: usize,
    roots: &[VertexSet],
    models: &[AttachedModel],
) -> Result<Model> {
    if h == 0 || d == 0 {
        return Err(Error::input("need h, d >= 1"));
    }
    let k = roots.len();
    let small = JoinPattern::new(k + 1, u_graph(h - 1, d)?);
    let mut used = VertexSet::EMPTY;
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut first_seen: Vec<Vec<usize>> = Vec::new();
    for (i, m) in models.iter().enumerate() {
        if m.roots != roots {
            return Err(Error::input(format!("model {i} uses different root sets")));
        }
        m.validate(g, &small)
            .map_err(|e| Error::input(format!("model {i}: {e}")))?;
        if m.model.vertices().intersects(used) {
            return Err(Error::input(format!("model {i} overlaps an earlier one")));
        }
        used = used.union(m.model.vertices());
        let label: Vec<usize> = (0..k)
            .map(|j| {
                let touch = g.neighborhood(m.model.branch(m.attachment[j]), g.vertex_set());
                roots[j]
                    .intersection(touch)
                    .min()
                    .expect("attached apex touches its root set")
            })
            .collect();
        let entry = groups.entry(label.clone()).or_default();
        if entry.is_empty() {
            first_seen.push(label);
        }
        entry.push(i);
    }
    let Some(label) = first_seen.into_iter().find(|l| groups[l].len() >= d) else {
        return Err(Error::input(format!("no {d} models share their root vertices")));
    };
    let chosen = &groups[&label][..d];
    let big_size = tree_size(h, d);
    let small_size = tree_size(h - 1, d);
    let mut sets = vec![VertexSet::EMPTY; k + d * big_size];
    for (set, &r) in sets.iter_mut().zip(&label[..k]) {
        *set = VertexSet::singleton(r);
    }
    for (tree, &i) in chosen.iter().enumerate() {
        let m = &models[i];
        for (set, &a) in sets.iter_mut().zip(&m.attachment[..k]) {
            *set = set.union(m.model.branch(a));
        }
        let free = (0..=k).find(|x| !m.attachment.contains(x)).expect("one apex is free");
        let base = k + tree * big_size;
        sets[base] = m.model.branch(free);
        for child in 0..d {
            for q in 0..small_size {
                let from = k + 1 + child * small_size + q;
                sets[base + lift_heap(child + 1, q, d)] = m.model.branch(from);
            }
        }
    }
    let out = Model::new(sets);
    let pattern = JoinPattern::new(k, u_graph(h, d)?).graph()?;
    out.validate(g, &pattern).map_err(Error::cert)?;
    Ok(out)
}

/// Heap index, in a `d`-ary tree, of node `q` of the subtree under the
/// root's child number `first` (1-based).
fn lift_heap(first: usize, q: usize, d: usize) -> usize {
    let mut digits = Vec::new();
    let mut q = q;
    while q > 0 {
        digits.push((q - 1) % d + 1);
        q = (q - 1) / d;
    }
    digits.push(first);
    digits.iter().rev().fold(0, |p, &x| p * d + x)
}
