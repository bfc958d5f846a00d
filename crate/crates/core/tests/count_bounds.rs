//! When a strict greedy run accepts its hypotheses, the host holds at least
//! `(x/4)^n` labeled copies respecting the same placement constraints.
//! Copies are counted here by trying every map.

use depchoice::embed::chromatic::{embed_chromatic, ChromaticParams};
use depchoice::embed::degenerate::{embed_two_sided, TwoSidedParams};
use depchoice::embed::NestedFamily;
use depchoice::exact::rat;
use depchoice::generators::{random_bipartite, random_graph};
use depchoice::ramsey::minimum_colouring;
use depchoice::{BipartiteGraph, Graph, VertexSet};

/// Injective maps sending vertex `v` into `allowed[v]` and edges to edges.
fn count_constrained(h: &Graph, g: &Graph, allowed: &[VertexSet]) -> u128 {
    fn rec(h: &Graph, g: &Graph, allowed: &[VertexSet], map: &mut Vec<usize>) -> u128 {
        let k = map.len();
        if k == h.n() {
            return 1;
        }
        let mut total = 0;
        for x in allowed[k].iter() {
            if map.contains(&x) || !(0..k).all(|u| !h.has_edge(u, k) || g.has_edge(map[u], x)) {
                continue;
            }
            map.push(x);
            total += rec(h, g, allowed, map);
            map.pop();
        }
        total
    }
    rec(h, g, allowed, &mut Vec::new())
}

fn small_bipartite_patterns() -> Vec<BipartiteGraph> {
    let mut out = Vec::new();
    for (n1, n2) in [(1, 1), (1, 2), (2, 1)] {
        let cells: Vec<(usize, usize)> = (0..n1).flat_map(|i| (0..n2).map(move |j| (i, j))).collect();
        for mask in 1u32..(1 << cells.len()) {
            let edges: Vec<(usize, usize)> =
                cells.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            out.push(BipartiteGraph::from_edges(n1, n2, &edges).unwrap());
        }
    }
    out
}

#[test]
fn two_sided_acceptance_implies_many_copies() {
    let mut accepted = 0;
    for seed in 0..40u64 {
        let side = 10 + (seed as usize % 5);
        let host = random_bipartite(side, side, &rat(17, 20), seed).unwrap().to_graph();
        let a1 = VertexSet::range(2 * side, 0, side);
        let a2 = VertexSet::range(2 * side, side, 2 * side);
        for h in small_bipartite_patterns() {
            let x = 4 + (seed as usize % 9);
            if embed_two_sided(&h, &host, &a1, &a2, &TwoSidedParams::new(x)).is_err() {
                continue;
            }
            accepted += 1;
            let allowed: Vec<VertexSet> = (0..h.n()).map(|v| if v < h.n1() { a1.clone() } else { a2.clone() }).collect();
            let count = count_constrained(&h.to_graph(), &host, &allowed);
            let bound = (x as f64 / 4.0).powi(h.n() as i32);
            assert!(count as f64 >= bound, "seed {seed}, x {x}, {h:?}: {count} < {bound}");
        }
    }
    assert!(accepted >= 5, "only {accepted} runs accepted");
}

#[test]
fn chromatic_acceptance_implies_many_copies() {
    let patterns = [
        Graph::complete(2),
        Graph::complete(3),
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap(),
        Graph::from_edges(3, &[(0, 1)]).unwrap(),
    ];
    let mut accepted = 0;
    for seed in 0..40u64 {
        let size = 48 + (seed as usize % 4) * 8;
        let g = random_graph(size, &rat(9, 10), seed).unwrap();
        for h in &patterns {
            let classes = minimum_colouring(h);
            let chain = NestedFamily::halving(size, &VertexSet::full(size), classes.len()).unwrap();
            let x = 12;
            let mut p = ChromaticParams::new(x);
            p.d = Some(h.max_degree().max(1));
            if embed_chromatic(h, &classes, &g, &chain, &p).is_err() {
                continue;
            }
            accepted += 1;
            let mut allowed = vec![VertexSet::empty(size); h.n()];
            for (c, class) in classes.iter().enumerate() {
                for &v in class {
                    allowed[v] = chain.level(c + 1).clone();
                }
            }
            let count = count_constrained(h, &g, &allowed);
            let bound = (x as f64 / 4.0).powi(h.n() as i32);
            assert!(count as f64 >= bound, "seed {seed}, {h:?}: {count} < {bound}");
        }
    }
    assert!(accepted >= 50, "only {accepted} runs accepted");
}
