use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::{RootedForest, TreeDecomposition};

/// A set `X` grown from a few bags so that every component of `G - X` sees
/// `X` only through at most two of the chosen bags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capture {
    /// Chosen tree nodes, sorted.
    pub nodes: Vec<usize>,
    /// Union of their bags.
    pub x: VertexSet,
}

/// Grows the bags at `y_nodes` into at most `2m - 1` bags (tree rooted at
/// node 0).
pub fn capture_interfaces(g: &Graph, td: &TreeDecomposition, y_nodes: &[usize]) -> Result<Capture> {
    td.validate(g).map_err(Error::input)?;
    capture_unchecked(td, y_nodes)
}

pub(crate) fn capture_unchecked(td: &TreeDecomposition, y_nodes: &[usize]) -> Result<Capture> {
    if y_nodes.iter().any(|&y| y >= td.node_count()) {
        return Err(Error::input("tree node out of range"));
    }
    let (parent, _) = td.rooted(0);
    let tree = RootedForest::new(parent)?;
    let nodes = mark_tree(&tree, y_nodes)?;
    let x = nodes.iter().fold(VertexSet::EMPTY, |a, &z| a.union(td.bag(z)));
    Ok(Capture { nodes, x })
}

/// Marks a superset `V` of `u_set` with `|V| <= 2|U| - 1` such that the
/// component of `t - V` holding the root touches at most one marked node
/// and every other component at most two.
pub fn mark_tree(t: &RootedForest, u_set: &[usize]) -> Result<Vec<usize>> {
    if u_set.is_empty() {
        return Err(Error::input("the marked set must be non-empty"));
    }
    if u_set.iter().any(|&u| u >= t.len()) {
        return Err(Error::input("node out of range"));
    }
    let roots = t.roots();
    if roots.len() != 1 {
        return Err(Error::input("expected a single rooted tree"));
    }
    let children = t.children();
    let mut in_u = vec![false; t.len()];
    for &u in u_set {
        in_u[u] = true;
    }
    // Whether each subtree meets U, computed bottom-up.
    let mut order = vec![roots[0]];
    let mut i = 0;
    while i < order.len() {
        order.extend(children[order[i]].iter().copied());
        i += 1;
    }
    let mut hits = in_u.clone();
    for &x in order.iter().rev() {
        if let Some(p) = t.parent(x) {
            hits[p] |= hits[x];
        }
    }
    let mut out = Vec::new();
    let mut stack = vec![roots[0]];
    while let Some(r) = stack.pop() {
        let live: Vec<usize> = children[r].iter().copied().filter(|&c| hits[c]).collect();
        if live.len() != 1 || in_u[r] {
            out.push(r);
        }
        stack.extend(live);
    }
    out.sort_unstable();
    Ok(out)
}
