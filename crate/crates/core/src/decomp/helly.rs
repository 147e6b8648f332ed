use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::TreeDecomposition;

/// The two outcomes of the Helly dichotomy for subtrees of a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HellyOutcome {
    /// `d` pairwise disjoint family members.
    DisjointFamily(Vec<VertexSet>),
    /// At most `d - 1` tree nodes whose bags meet every member.
    HittingBags(Vec<usize>),
}

/// Either `d` disjoint members of `fam` or at most `d - 1` bags hitting all
/// of them.
pub fn helly_hit(g: &Graph, td: &TreeDecomposition, fam: &[VertexSet], d: usize) -> Result<HellyOutcome> {
    td.validate(g).map_err(Error::input)?;
    for &m in fam {
        g.check_set(m)?;
        if m.is_empty() || !g.is_connected_set(m) {
            return Err(Error::input("family members must be non-empty and connected"));
        }
    }
    helly_search(td, d, |alive| Ok(fam.iter().copied().find(|m| m.is_subset(alive))))
}

/// Helly search against a membership oracle: `find(s)` returns some family
/// member contained in `s`, if any. The family must consist of connected
/// sets of a graph that `td` decomposes.
///
/// The tree is rooted at node 0. Each round descends to a node whose
/// subtree still contains a live member while none of its children's
/// subtrees do; every live member inside that subtree meets its bag. The
/// bag is taken and the subtree's vertices are retired.
pub fn helly_search<F>(td: &TreeDecomposition, d: usize, mut find: F) -> Result<HellyOutcome>
where
    F: FnMut(VertexSet) -> Result<Option<VertexSet>>,
{
    if d == 0 {
        return Err(Error::input("d must be positive"));
    }
    let mut alive = td.covered();
    if td.node_count() == 0 {
        return match find(alive)? {
            None => Ok(HellyOutcome::HittingBags(Vec::new())),
            Some(_) => Err(Error::input("family member outside the decomposition")),
        };
    }
    let (parent, order) = td.rooted(0);
    let mut children = vec![Vec::new(); td.node_count()];
    for &x in &order {
        if let Some(p) = parent[x] {
            children[p].push(x);
        }
    }
    let mut below = td.bags().to_vec();
    for &x in order.iter().rev() {
        if let Some(p) = parent[x] {
            below[p] = below[p].union(below[x]);
        }
    }
    let mut members = Vec::new();
    let mut nodes = Vec::new();
    let Some(mut found) = find(alive)? else {
        return Ok(HellyOutcome::HittingBags(nodes));
    };
    loop {
        let mut x = 0;
        'descend: loop {
            for &c in &children[x] {
                if let Some(m) = find(below[c].intersection(alive))? {
                    found = m;
                    x = c;
                    continue 'descend;
                }
            }
            break;
        }
        members.push(found);
        nodes.push(x);
        if members.len() == d {
            return Ok(HellyOutcome::DisjointFamily(members));
        }
        alive = alive.difference(below[x]);
        match find(alive)? {
            Some(m) => found = m,
            None => return Ok(HellyOutcome::HittingBags(nodes)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, Family};

    fn path_decomposition(n: usize) -> TreeDecomposition {
        let bags = (0..n - 1).map(|i| VertexSet::from_iter([i, i + 1])).collect();
        let edges = (0..n - 2).map(|i| (i, i + 1)).collect();
        TreeDecomposition::new(bags, edges).unwrap()
    }

    #[test]
    fn disjoint_edges_of_p6() {
        let g = family(Family::Path, &[6]).unwrap();
        let td = path_decomposition(6);
        let fam: Vec<VertexSet> = g.edges().iter().map(|&(u, v)| VertexSet::from_iter([u, v])).collect();
        match helly_hit(&g, &td, &fam, 2).unwrap() {
            HellyOutcome::DisjointFamily(ms) => {
                assert_eq!(ms.len(), 2);
                assert!(!ms[0].intersects(ms[1]));
            }
            other => panic!("expected disjoint members, got {other:?}"),
        }
    }

    #[test]
    fn subpaths_through_3_are_hit_by_one_bag() {
        let g = family(Family::Path, &[6]).unwrap();
        let td = path_decomposition(6);
        let mut fam = Vec::new();
        for a in 0..=3 {
            for b in 3..6 {
                fam.push((a..=b).collect::<VertexSet>());
            }
        }
        match helly_hit(&g, &td, &fam, 2).unwrap() {
            HellyOutcome::HittingBags(nodes) => {
                assert_eq!(nodes.len(), 1);
                let bag = td.bag(nodes[0]);
                assert!(bag.contains(3));
                assert!(fam.iter().all(|m| m.intersects(bag)));
            }
            other => panic!("expected hitting bags, got {other:?}"),
        }
    }

    #[test]
    fn empty_family_is_vacuous() {
        let g = family(Family::Path, &[4]).unwrap();
        let td = path_decomposition(4);
        assert_eq!(helly_hit(&g, &td, &[], 3).unwrap(), HellyOutcome::HittingBags(vec![]));
    }

    #[test]
    fn rejects_disconnected_member() {
        let g = family(Family::Path, &[4]).unwrap();
        let td = path_decomposition(4);
        let bad = VertexSet::from_iter([0, 2]);
        assert!(helly_hit(&g, &td, &[bad], 2).is_err());
    }
}
