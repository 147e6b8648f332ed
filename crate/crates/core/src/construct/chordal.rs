use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::minors::Model;
use crate::partitions::{AbSplit, HPartition};

/// Chordal partition of a `K_t`-minor-free graph.
///
/// Parts are built one at a time. The component `C` of the unassigned
/// vertices holding the smallest unassigned vertex is processed next. With
/// no earlier part adjacent to `C`, its smallest vertex becomes a part. With
/// one, the part is a geodesic of `C` between the first and last vertex of
/// `C` adjacent to that part. With several, one vertex per adjacent part is
/// chosen (the smallest) and the part is the union of geodesics in `C` from
/// the first of them to the others. Every part is therefore covered by at
/// most `max{t−3, 1}` geodesics of the graph induced by the later parts.
///
/// The result is ordered by creation; every part has `A = ∅`.
pub fn chordal_partition(g: &Graph, t: usize) -> Result<HPartition> {
    if t < 3 {
        return Err(Error::input("chordal partitions need t >= 3"));
    }
    let mut parts: Vec<VertexSet> = Vec::new();
    let mut geos: Vec<Vec<Path>> = Vec::new();
    let mut rest = g.vertex_set();
    while let Some(v0) = rest.min() {
        let comp = g.reach(VertexSet::singleton(v0), rest);
        let touching: Vec<usize> = (0..parts.len())
            .filter(|&i| g.neighborhood(parts[i], g.vertex_set()).intersects(comp))
            .collect();
        if touching.len() >= t - 1 {
            let mut sets: Vec<VertexSet> = touching[..t - 1].iter().map(|&i| parts[i]).collect();
            sets.push(comp);
            let model = Model::new(sets);
            model.validate(g, &Graph::complete(t)?).map_err(Error::cert)?;
            return Err(Error::precondition(format!("K_{t} model found"), Some(model)));
        }
        let attach = |i: usize| g.neighborhood(parts[i], g.vertex_set()).intersection(comp);
        let paths: Vec<Path> = match touching.as_slice() {
            [] => vec![Path(vec![v0])],
            [only] => {
                let s = attach(*only);
                let (a, b) = (s.min().unwrap(), s.max().unwrap());
                vec![g.geodesic_within(a, b, comp).expect("component is connected")]
            }
            [first, others @ ..] => {
                let root = attach(*first).min().unwrap();
                let mut targets: Vec<usize> = others.iter().map(|&i| attach(i).min().unwrap()).collect();
                targets.dedup();
                targets
                    .into_iter()
                    .map(|v| g.geodesic_within(root, v, comp).expect("component is connected"))
                    .collect()
            }
        };
        let part = paths.iter().fold(VertexSet::EMPTY, |a, p| a.union(p.vertices()));
        rest = rest.difference(part);
        parts.push(part);
        geos.push(paths);
    }
    let mut hp = HPartition::quotient_of(g, parts)?;
    hp.order = Some((0..hp.parts.len()).collect());
    hp.ab = Some(
        hp.parts
            .iter()
            .zip(geos)
            .map(|(&p, geodesics)| AbSplit {
                a: VertexSet::EMPTY,
                b: p,
                geodesics,
                host_plus: None,
            })
            .collect(),
    );
    Ok(hp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, Family};

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    #[test]
    fn path_gives_a_path_of_singletons() {
        let g = family(Family::Path, &[7]).unwrap();
        let hp = chordal_partition(&g, 3).unwrap();
        assert_eq!(hp.parts, (0..7).map(VertexSet::singleton).collect::<Vec<_>>());
        assert_eq!(hp.h, g);
    }

    #[test]
    fn five_cycle() {
        let g = family(Family::Cycle, &[5]).unwrap();
        let hp = chordal_partition(&g, 4).unwrap();
        assert_eq!(hp.parts, vec![set(&[0]), set(&[1, 2, 3, 4])]);
        assert_eq!(hp.h, Graph::complete(2).unwrap());
        assert_eq!(hp.ab.unwrap()[1].geodesics, vec![Path(vec![1, 2, 3, 4])]);
    }

    #[test]
    fn dense_graph_yields_a_clique_model() {
        let g = Graph::complete(4).unwrap();
        match chordal_partition(&g, 3) {
            Err(Error::PreconditionViolated { evidence: Some(m), .. }) => {
                m.validate(&g, &Graph::complete(3).unwrap()).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_small_t() {
        let g = family(Family::Path, &[3]).unwrap();
        assert!(chordal_partition(&g, 2).is_err());
    }
}
