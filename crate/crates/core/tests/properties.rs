//! Property tests for the structural invariants of every module.

use proptest::prelude::*;

use hpartition::construct::{
    certify, chordal_partition, main_partition, tau, wcol_partition, BaseStrategy, CertKind, ConstructOptions,
    PartitionCertificate,
};
use hpartition::decomp::{exact_treedepth, exact_treedepth_with, exact_treewidth, is_natural, make_natural};
use hpartition::generators::{family, random_tree, u_forest, u_graph, Family};
use hpartition::minors::{find_model, menger, MengerOutcome, Model};
use hpartition::partitions::verify_hpartition;
use hpartition::wcol::{verify_elimination_bound, wcol_exact, wcol_of_ordering, Ordering};
use hpartition::{Graph, Path, VertexSet};

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let edges: Vec<_> = pairs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i < 64 && mask >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    Graph::new(n, &edges).unwrap()
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, mask)| graph_from_mask(n, mask))
}

/// Graphs with edge density `num / 8`.
fn sparse_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>(), any::<u64>(), 1u32..=7).prop_map(|(n, a, b, num)| {
        // Each pair keeps its edge with probability about num/8.
        let mut mask = 0u64;
        for i in 0..64 {
            let bits = ((a >> i) & 1) | ((b >> i) & 1) << 1 | ((a >> ((i + 17) % 64)) & 1) << 2;
            if (bits as u32) < num {
                mask |= 1 << i;
            }
        }
        graph_from_mask(n, mask)
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn graph_and_order(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), permutation(n))
    })
}

/// Every assignment of host vertices to branch sets (or none), checked
/// with the model's own validator.
fn brute_force_minor(host: &Graph, pattern: &Graph) -> bool {
    let (n, p) = (host.n(), pattern.n());
    let mut label = vec![0usize; n];
    loop {
        let mut sets = vec![VertexSet::EMPTY; p];
        for (v, &l) in label.iter().enumerate() {
            if l > 0 {
                sets[l - 1].insert(v);
            }
        }
        if Model::new(sets).validate(host, pattern).is_ok() {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            label[i] += 1;
            if label[i] <= p {
                break;
            }
            label[i] = 0;
            i += 1;
        }
    }
}

fn degeneracy_oracle(g: &Graph) -> usize {
    let mut alive: Vec<bool> = vec![true; g.n()];
    let mut best = 0;
    for _ in 0..g.n() {
        let deg = |v: usize| g.neighbors(v).iter().filter(|&u| alive[u]).count();
        let v = (0..g.n()).filter(|&v| alive[v]).min_by_key(|&v| deg(v)).unwrap();
        best = best.max(deg(v));
        alive[v] = false;
    }
    best
}

fn patterns() -> Vec<Graph> {
    vec![
        Graph::complete(3).unwrap(),
        Graph::complete(4).unwrap(),
        family(Family::Path, &[4]).unwrap(),
        family(Family::Cycle, &[4]).unwrap(),
        family(Family::Star, &[3]).unwrap(),
        Graph::empty(2).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subpaths_of_geodesics_are_geodesics(g in graph(10), a in 0usize..10, b in 0usize..10) {
        let (a, b) = (a % g.n(), b % g.n());
        if let Some(p) = g.geodesic_within(a, b, g.vertex_set()) {
            prop_assert!(g.is_geodesic(&p).unwrap());
            for i in 0..p.len() {
                for j in i..p.len() {
                    prop_assert!(g.is_geodesic(&Path(p.0[i..=j].to_vec())).unwrap());
                }
            }
        }
    }

    #[test]
    fn singleton_quotient_is_the_graph(g in graph(10)) {
        let parts: Vec<VertexSet> = (0..g.n()).map(VertexSet::singleton).collect();
        prop_assert_eq!(g.quotient(&parts).unwrap(), g);
    }

    #[test]
    fn join_edge_count(a in graph(6), b in graph(6)) {
        let j = Graph::join(&a, &b).unwrap();
        prop_assert_eq!(j.edge_count(), a.edge_count() + b.edge_count() + a.n() * b.n());
    }

    #[test]
    fn components_partition_the_graph(g in sparse_graph(12)) {
        let cs = g.components();
        let mut seen = VertexSet::EMPTY;
        for c in &cs {
            prop_assert!(!c.intersects(seen) && g.is_connected_set(*c));
            prop_assert!(g.neighborhood(*c, g.vertex_set()).is_subset(*c) || g.neighborhood(*c, g.vertex_set()).is_empty());
            seen = seen.union(*c);
        }
        prop_assert_eq!(seen, g.vertex_set());
    }

    #[test]
    fn minor_search_matches_brute_force(host in graph(6), which in 0usize..6) {
        let pattern = &patterns()[which];
        let found = find_model(&host, pattern).unwrap();
        if let Some(m) = &found {
            prop_assert!(m.validate(&host, pattern).is_ok());
        }
        prop_assert_eq!(found.is_some(), brute_force_minor(&host, pattern));
    }

    #[test]
    fn menger_duality(g in graph(8), s in any::<u8>(), t in any::<u8>(), k in 0usize..4) {
        let n = g.n();
        let sv: VertexSet = (0..n).filter(|v| s >> v & 1 == 1).take(2).collect();
        let tv: VertexSet = (0..n).filter(|v| t >> v & 1 == 1).take(2).collect();
        match menger(&g, sv, tv, k).unwrap() {
            MengerOutcome::Linkage(l) => prop_assert!(l.order() >= k && l.validate(&g, sv, tv).is_ok()),
            MengerOutcome::Separation(sep) => {
                prop_assert!(sep.validate(&g).is_ok() && sep.order() < k);
                match menger(&g, sv, tv, sep.order()).unwrap() {
                    MengerOutcome::Linkage(l) => prop_assert!(l.order() >= sep.order()),
                    MengerOutcome::Separation(_) => prop_assert!(false, "no linkage of the separation's order"),
                }
            }
        }
    }

    #[test]
    fn natural_rewrite_is_valid_and_dominated(g in sparse_graph(10)) {
        prop_assume!(g.is_connected());
        let (w, td) = exact_treewidth(&g).unwrap();
        prop_assert!(td.validate(&g).is_ok() && td.width() == w);
        let nat = make_natural(&g, &td).unwrap();
        prop_assert!(nat.validate(&g).is_ok());
        prop_assert!(is_natural(&g, &nat));
        for &b in nat.bags() {
            prop_assert!(td.bags().iter().any(|&o| b.is_subset(o)));
        }
    }

    #[test]
    fn treewidth_is_minor_monotone(g in sparse_graph(9), picks in proptest::collection::vec(any::<u16>(), 0..4)) {
        let mut h = g.clone();
        for p in picks {
            let edges = h.edges();
            if edges.is_empty() || h.n() < 2 {
                break;
            }
            if p % 3 == 0 {
                let keep = h.vertex_set().without(p as usize % h.n());
                h = h.induced(keep).0;
            } else {
                let (u, v) = edges[p as usize % edges.len()];
                h = h.contract_set(VertexSet::singleton(u).with(v)).unwrap().0;
            }
        }
        prop_assert!(exact_treewidth(&h).unwrap().0 <= exact_treewidth(&g).unwrap().0);
    }

    #[test]
    fn wcol_grows_with_r((g, seq) in graph_and_order(9)) {
        let sigma = Ordering::from_sequence(&seq).unwrap();
        for r in 1..4 {
            prop_assert!(wcol_of_ordering(&g, &sigma, r).unwrap() <= wcol_of_ordering(&g, &sigma, r + 1).unwrap());
        }
    }

    #[test]
    fn wcol_one_is_degeneracy_plus_one(g in graph(9)) {
        prop_assert_eq!(wcol_exact(&g, 1).unwrap().0, degeneracy_oracle(&g) + 1);
    }

    #[test]
    fn wcol_is_subgraph_monotone(g in graph(7), drop in any::<u32>(), r in 1usize..4) {
        let kept: Vec<_> = g.edges().into_iter().enumerate().filter(|(i, _)| drop >> (i % 32) & 1 == 0).map(|(_, e)| e).collect();
        let sub = Graph::new(g.n(), &kept).unwrap();
        prop_assert!(wcol_exact(&sub, r).unwrap().0 <= wcol_exact(&g, r).unwrap().0);
    }

    #[test]
    fn json_round_trips(g in graph(10)) {
        let back: Graph = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(&back, &g);
        let hp = chordal_partition(&g, g.n().max(3) + 1).unwrap();
        let cert = PartitionCertificate {
            kind: CertKind::Chordal { t: g.n().max(3) + 1 },
            graph: g,
            roots: Vec::new(),
            partition: hp,
        };
        let back: PartitionCertificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
        prop_assert_eq!(back, cert);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn emitted_partitions_certify(g in sparse_graph(10), hd in 0usize..4) {
        let (h, d) = [(1, 2), (2, 2), (2, 3), (3, 2)][hd];
        let t = (exact_treewidth(&g).unwrap().0 + 1).max(1) as usize;
        let pattern = u_graph(h, d).unwrap();
        let free = find_model(&g, &pattern).unwrap().is_none();

        let tc = g.n().max(3) + 1;
        let hp = chordal_partition(&g, tc).unwrap();
        prop_assert!(verify_hpartition(&g, &hp).valid);
        let cert = PartitionCertificate { kind: CertKind::Chordal { t: tc }, graph: g.clone(), roots: Vec::new(), partition: hp.clone() };
        prop_assert!(certify(&cert).ok());
        let sigma = Ordering::from_rank(hp.order.clone().unwrap()).unwrap();
        prop_assert!(verify_elimination_bound(&hp.h, &sigma, tc - 2, 2).unwrap().back_cliques_ok);

        for strategy in [BaseStrategy::Singleton, BaseStrategy::Chordal] {
            let opts = ConstructOptions { strategy, ..Default::default() };
            match main_partition(h, d, 0, t, &g, &[], &opts) {
                Ok(mp) => {
                    let cert = PartitionCertificate { kind: CertKind::Main { h, d, k: 0, t, strategy }, graph: g.clone(), roots: Vec::new(), partition: mp.partition };
                    prop_assert!(certify(&cert).ok());
                }
                Err(hpartition::Error::PreconditionViolated { evidence, .. }) => {
                    prop_assert!(!free);
                    if let Some(m) = evidence {
                        prop_assert!(m.validate(&g, &pattern).is_ok());
                    }
                }
                Err(e) => prop_assert!(false, "{e}"),
            }
        }

        match wcol_partition(h, d, 0, &g, &[], &ConstructOptions::default()) {
            Ok(wp) => {
                let cert = PartitionCertificate { kind: CertKind::Wcol { h, d, k: 0, t: wp.t }, graph: g.clone(), roots: Vec::new(), partition: wp.partition.clone() };
                prop_assert!(certify(&cert).ok());
                let sigma = Ordering::from_rank(wp.partition.order.clone().unwrap()).unwrap();
                for r in 1..=4 {
                    let rep = verify_elimination_bound(&wp.partition.h, &sigma, tau(h, 0).max(0) as usize, r).unwrap();
                    prop_assert!(rep.back_cliques_ok && rep.holds());
                }
            }
            Err(hpartition::Error::PreconditionViolated { .. }) => prop_assert!(!free),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn treewidth_closed_forms() {
    for n in 1..=10 {
        for seed in 0..5 {
            let t = random_tree(n, seed).unwrap();
            assert_eq!(exact_treewidth(&t).unwrap().0, (n > 1) as i64);
        }
        assert_eq!(exact_treewidth(&Graph::complete(n).unwrap()).unwrap().0, n as i64 - 1);
        if n >= 3 {
            assert_eq!(exact_treewidth(&family(Family::Cycle, &[n]).unwrap()).unwrap().0, 2);
        }
    }
}

#[test]
fn path_treedepth_is_logarithmic() {
    for n in 1..=15usize {
        let expected = (usize::BITS - n.leading_zeros()) as usize;
        assert_eq!(
            exact_treedepth(&family(Family::Path, &[n]).unwrap()).unwrap().0,
            expected,
            "P{n}"
        );
    }
}

#[test]
fn u_graph_structure() {
    for h in 1..=3 {
        for d in 1..=3 {
            let u = u_graph(h, d).unwrap();
            assert_eq!(u.components().len(), d);
            assert_eq!(exact_treedepth_with(&u, u.n()).unwrap().0, h);
            let f = u_forest(h, d).unwrap();
            let deepest = (0..u.n()).map(|v| f.depth(v)).max().unwrap();
            let upper: VertexSet = (0..u.n()).filter(|&v| f.depth(v) < deepest).collect();
            assert_eq!(u.induced(upper).0, u_graph(h - 1, d).unwrap(), "h = {h}, d = {d}");
        }
    }
}
