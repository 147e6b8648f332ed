use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Clique-sum of `h1` and `h2` along `f`, given as pairs `(x2, x1)` mapping
/// a clique of `h2` into the clique `clique1` of `h1` (not necessarily
/// injectively). Vertices of `h1` keep their ids; the unmapped vertices of
/// `h2` follow in increasing order.
pub fn clique_sum(h1: &Graph, clique1: VertexSet, h2: &Graph, f: &[(usize, usize)]) -> Result<Graph> {
    h1.check_set(clique1)?;
    if !h1.is_clique(clique1) {
        return Err(Error::input("clique1 is not a clique"));
    }
    let mut map = vec![usize::MAX; h2.n()];
    let mut clique2 = VertexSet::EMPTY;
    for &(x2, x1) in f {
        h2.check_vertex(x2)?;
        if !clique1.contains(x1) {
            return Err(Error::input(format!("{x1} is not in clique1")));
        }
        if clique2.contains(x2) {
            return Err(Error::input(format!("{x2} is mapped twice")));
        }
        clique2.insert(x2);
        map[x2] = x1;
    }
    if !h2.is_clique(clique2) {
        return Err(Error::input("the domain of f is not a clique"));
    }
    let mut next = h1.n();
    for m in map.iter_mut().filter(|m| **m == usize::MAX) {
        *m = next;
        next += 1;
    }
    let mut edges = h1.edges();
    edges.extend(
        h2.edges()
            .into_iter()
            .map(|(u, v)| (map[u], map[v]))
            .filter(|(u, v)| u != v),
    );
    let mut out = h1.pad(next - h1.n())?;
    out = out.with_edges(&edges);
    Ok(out)
}
