use std::collections::BTreeSet;

use depchoice::drc::{drc_sample, DrcParams};
use depchoice::embed::hypergraph::{embed_hypergraph_greedy, ExplicitFamily, GreedyOptions};
use depchoice::exact::rat;
use depchoice::generators::{paley, random_bipartite, random_graph};
use depchoice::io::{parse_bipartite, parse_edge_list, parse_graph6, write_bipartite, write_edge_list, write_graph6};
use depchoice::oracles::{count_labeled_copies, CopyMode};
use depchoice::ramsey::{certify_pseudorandom, mixing_deviation, CertMethod};
use depchoice::{degeneracy_order, validate_embedding, BipartiteGraph, Contract, Embedding, EmbeddingMode, Graph, Hypergraph, VertexSet};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut k = 0;
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn same_graph(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.edges() == b.edges()
}

#[test]
fn round_trip_over_a_200_graph_corpus() {
    for i in 0..200u64 {
        let n = (i as usize * 7) % 90;
        let p = rat(1 + (i as i64 % 9), 10);
        let g = random_graph(n, &p, i).unwrap();
        assert!(same_graph(&parse_edge_list(&write_edge_list(&g)).unwrap(), &g), "edge list {i}");
        assert!(same_graph(&parse_graph6(&write_graph6(&g)).unwrap(), &g), "graph6 {i}");
        let b = random_bipartite(n / 3 + 1, n / 2 + 1, &p, i).unwrap();
        let back = parse_bipartite(&write_bipartite(&b)).unwrap();
        assert_eq!((back.n1(), back.n2()), (b.n1(), b.n2()));
        assert!(same_graph(&back.to_graph(), &b.to_graph()), "bipartite {i}");
    }
}

/// Labeled copies by trying every injective map.
fn brute_copies(h: &Graph, g: &Graph, induced: bool) -> u128 {
    fn rec(h: &Graph, g: &Graph, induced: bool, map: &mut Vec<usize>) -> u128 {
        let k = map.len();
        if k == h.n() {
            return 1;
        }
        let mut total = 0;
        for x in 0..g.n() {
            if map.contains(&x) {
                continue;
            }
            let fits = (0..k).all(|u| {
                let e = g.has_edge(map[u], x);
                if h.has_edge(u, k) {
                    e
                } else {
                    !induced || !e
                }
            });
            if fits {
                map.push(x);
                total += rec(h, g, induced, map);
                map.pop();
            }
        }
        total
    }
    rec(h, g, induced, &mut Vec::new())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_formats_round_trip(g in arb_graph(70)) {
        prop_assert!(same_graph(&parse_edge_list(&write_edge_list(&g)).unwrap(), &g));
        prop_assert!(same_graph(&parse_graph6(&write_graph6(&g)).unwrap(), &g));
    }

    #[test]
    fn vertex_set_matches_a_btree_model(
        universe in 1usize..200,
        a in proptest::collection::vec(0usize..200, 0..60),
        b in proptest::collection::vec(0usize..200, 0..60),
    ) {
        let a: Vec<usize> = a.into_iter().filter(|&v| v < universe).collect();
        let b: Vec<usize> = b.into_iter().filter(|&v| v < universe).collect();
        let (sa, sb) = (VertexSet::from_iter(universe, a.clone()), VertexSet::from_iter(universe, b.clone()));
        let (ma, mb): (BTreeSet<usize>, BTreeSet<usize>) = (a.into_iter().collect(), b.into_iter().collect());
        prop_assert_eq!(sa.to_vec(), ma.iter().copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.intersection(&sb).to_vec(), ma.intersection(&mb).copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.union(&sb).to_vec(), ma.union(&mb).copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.difference(&sb).to_vec(), ma.difference(&mb).copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.intersection_len(&sb), ma.intersection(&mb).count());
        prop_assert_eq!(sa.complement().len(), universe - ma.len());
        prop_assert_eq!(sa.is_subset(&sb), ma.is_subset(&mb));
    }

    #[test]
    fn copy_counts_match_brute_force(h in arb_graph(4), g in arb_graph(7)) {
        prop_assert_eq!(count_labeled_copies(&h, &g, CopyMode::Subgraph).unwrap(), brute_copies(&h, &g, false));
        prop_assert_eq!(count_labeled_copies(&h, &g, CopyMode::Induced).unwrap(), brute_copies(&h, &g, true));
    }

    #[test]
    fn degeneracy_order_bounds_back_degrees(g in arb_graph(12)) {
        let (order, d) = degeneracy_order(&g);
        let mut pos = vec![0; g.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for &v in &order {
            let back = g.neighbors(v).iter().filter(|&u| pos[u] < pos[v]).count();
            prop_assert!(back <= d);
        }
        // The degeneracy is the largest minimum degree of an induced subgraph.
        let mut best = 0;
        for mask in 1u32..(1 << g.n()) {
            let s = VertexSet::from_iter(g.n(), (0..g.n()).filter(|v| mask >> v & 1 == 1));
            let min = s.iter().map(|v| g.neighbors(v).intersection_len(&s)).min().unwrap();
            best = best.max(min);
        }
        prop_assert_eq!(best, d);
    }

    #[test]
    fn drc_set_is_the_common_neighbourhood_of_the_sample(seed in any::<u64>(), n in 4usize..24, t in 1usize..4) {
        let g = random_bipartite(n, n, &rat(3, 4), seed).unwrap();
        let density = rat(g.edge_count() as i64, (n * n) as i64);
        let params = DrcParams { a: 1, d: 2, t, x: 1, epsilon: density.min(rat(1, 2)) };
        prop_assume!(g.edge_count() > 0);
        let out = drc_sample(&g, &params, seed).unwrap();
        let mut expect = VertexSet::full(n);
        for &v in &out.sample {
            expect.intersect_with(g.neighbors(depchoice::Side::Left, v));
        }
        prop_assert_eq!(out.a_set, expect);
    }

    #[test]
    fn paley_subsets_obey_the_certificate(
        qi in 0usize..4,
        a in proptest::collection::btree_set(0usize..101, 1..40),
        b in proptest::collection::btree_set(0usize..101, 1..40),
    ) {
        let q = [13u64, 17, 29, 101][qi];
        let g = paley(q).unwrap();
        let cert = certify_pseudorandom(&g, CertMethod::Spectral, 0, 0).unwrap();
        let sa = VertexSet::from_iter(g.n(), a.into_iter().filter(|&v| v < g.n()));
        let sb = VertexSet::from_iter(g.n(), b.into_iter().filter(|&v| v < g.n()));
        prop_assume!(!sa.is_empty() && !sb.is_empty());
        prop_assert!(mixing_deviation(&g, 0.5, &sa, &sb) <= cert.lambda + 1e-6);
    }

    #[test]
    fn greedy_hypergraph_maps_validate(seed in any::<u64>(), g in arb_graph(5)) {
        prop_assume!(g.m() > 0);
        let edges: Vec<Vec<usize>> = g.edges().into_iter().map(|(u, v)| vec![u, v]).collect();
        let hyp = Hypergraph::new(g.n(), edges).unwrap();
        let non_nice = vec![vec![0, 1], vec![2, 5], vec![3, 7]];
        let fam = ExplicitFamily::new(12, 2, non_nice.clone()).unwrap();
        let opts = GreedyOptions { shuffle_seed: Some(seed), ..GreedyOptions::default() };
        let e = embed_hypergraph_greedy(&hyp, &fam, &opts).unwrap();
        // Edge images are pairs, so they must avoid the three removed pairs.
        let host = Graph::from_fn(12, |u, v| !non_nice.contains(&vec![u.min(v), u.max(v)]));
        let emb = Embedding::new(e.map.clone(), EmbeddingMode::Subgraph);
        prop_assert!(validate_embedding(&g, &host, &emb, &Contract::Subgraph).unwrap());
    }

    #[test]
    fn bipartite_graph_survives_the_plain_view(n1 in 1usize..8, n2 in 1usize..8, seed in any::<u64>()) {
        let b = random_bipartite(n1, n2, &rat(1, 2), seed).unwrap();
        prop_assume!(b.edge_count() > 0);
        let (back, left, right) = BipartiteGraph::from_graph(&b.to_graph()).unwrap();
        prop_assert_eq!(back.edge_count(), b.edge_count());
        prop_assert_eq!(left.len() + right.len(), n1 + n2);
    }
}
