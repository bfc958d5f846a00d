//! Bounded-degree bipartite patterns in dense hosts.
//!
//! The host is split into two equal halves `V1, V2`. Dependent random choice
//! finds `A ⊆ V2` in which almost every `d`-set has at least `x` common
//! neighbours in `V1`. The neighbourhoods of the smaller pattern side form a
//! hypergraph on the larger side, which is embedded into the nice `d`-sets
//! of `A`; the smaller side is then placed in common neighbourhoods.

use crate::drc::{drc_find_witness_with_budget, DrcParams, DEFAULT_ENUM_BUDGET};
use crate::embed::hypergraph::{embed_hypergraph_greedy, GreedyOptions, NeighbourhoodFamily};
use crate::embed::search::{backtrack, default_order, Constraints};
use crate::embed::{finish, split_host, Checks, Embedded, Rigor, Trace};
use crate::embed::{DEFAULT_RETRIES, DEFAULT_SEARCH_NODES};
use crate::error::{Error, Result};
use crate::exact::{ceil_u64, check_unit_interval, format_rational, powi, uint, Rational};
use crate::graph::{meets_bipartite_density, BipartiteGraph, Contract, Embedding, Graph, Hypergraph, Side};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug)]
pub struct BipartiteParams {
    pub epsilon: Rational,
    pub seed: u64,
    pub rigor: Rigor,
    /// Sampling rounds for dependent random choice.
    pub trials: u64,
    pub enum_budget: u64,
    pub search_nodes: u64,
}

impl BipartiteParams {
    pub fn new(epsilon: Rational, seed: u64) -> Self {
        BipartiteParams {
            epsilon,
            seed,
            rigor: Rigor::Strict,
            trials: DEFAULT_RETRIES as u64,
            enum_budget: DEFAULT_ENUM_BUDGET,
            search_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

/// Host side lists and the pattern orientation used by the pipeline.
struct Layout {
    /// Host vertices of the side receiving the smaller pattern side.
    v1: Vec<usize>,
    v2: Vec<usize>,
    flipped: bool,
}

impl Layout {
    /// Pattern vertex (original combined numbering) of oriented left `i`.
    fn left(&self, h: &BipartiteGraph, i: usize) -> usize {
        if self.flipped {
            h.n1() + i
        } else {
            i
        }
    }

    fn right(&self, h: &BipartiteGraph, j: usize) -> usize {
        if self.flipped {
            j
        } else {
            h.n1() + j
        }
    }
}

pub fn embed_bipartite_dense(h: &BipartiteGraph, g: &Graph, params: &BipartiteParams) -> Result<Embedded> {
    check_unit_interval("epsilon", &params.epsilon)?;
    let n = h.n();
    let d = h.max_degree().max(2);
    let (v1, v2) = split_host(g, params.seed)?;
    let big_n = v1.len();
    let cut = BipartiteGraph::from_cut(g, &v1, &v2)?;
    if !meets_bipartite_density(&cut, &params.epsilon) {
        return Err(Error::Precondition(format!(
            "cut has {} edges, fewer than epsilon N^2 with N = {big_n}",
            cut.edge_count()
        )));
    }
    let scale = powi(&params.epsilon, d as i64) * uint(big_n as u128);
    if scale < uint((16 * d * n) as u128) {
        return Err(Error::Precondition(format!(
            "N = {big_n} is below 16 d epsilon^-d n = {} (d = {d}, n = {n})",
            format_rational(&(uint((16 * d * n) as u128) / powi(&params.epsilon, d as i64)))
        )));
    }
    let x = ceil_u64(&(scale / uint(8 * d as u128))) as usize;

    let flipped = h.n2() < h.n1();
    let hp = if flipped { h.flipped() } else { h.clone() };
    let layout = Layout { v1, v2, flipped };
    let mut checks = Checks::new(params.rigor);
    checks.note(
        "cut density at least epsilon",
        true,
        format!("{} edges across halves of size {big_n}", cut.edge_count()),
    );

    let drc = DrcParams {
        a: d as u32,
        d,
        t: d,
        x,
        epsilon: params.epsilon.clone(),
    };
    let (outcome, _) =
        drc_find_witness_with_budget(&cut, &drc, params.trials, params.seed, params.enum_budget)?;
    let a: Vec<usize> = outcome.a_set.to_vec();
    checks.note(
        "dependent random choice witness",
        outcome.is_witness(),
        format!("|A| = {}, bad d-sets {}", a.len(), outcome.bad_count),
    );

    let hyp = Hypergraph::of_neighborhoods(&hp)?;
    let rows: Vec<VertexSet> = a.iter().map(|&j| cut.neighbors(Side::Right, j).clone()).collect();
    let family = NeighbourhoodFamily::new(rows, d, x)?;
    let opts = GreedyOptions {
        degree: Some(d),
        shuffle_seed: None,
        rigor: params.rigor,
        search_nodes: params.search_nodes,
    };
    let emb = embed_hypergraph_greedy(&hyp, &family, &opts)?;
    let fallback = emb.fallback;
    for c in emb.checks {
        checks.note(&c.name, c.holds, c.detail);
    }
    let trace = emb.trace;

    // Oriented right vertex j goes to host V2 vertex layout.v2[a[map[j]]].
    let mut map = vec![usize::MAX; n];
    let mut used = VertexSet::empty(big_n);
    for j in 0..hp.n2() {
        map[layout.right(h, j)] = layout.v2[a[emb.map[j]]];
    }
    let mut stuck = false;
    for i in 0..hp.n1() {
        let img: Vec<usize> = hp.neighbors(Side::Left, i).iter().map(|j| a[emb.map[j]]).collect();
        let mut cand = cut.common_neighborhood_of(Side::Right, &img);
        cand.difference_with(&used);
        match cand.first() {
            Some(c) => {
                used.insert(c);
                map[layout.left(h, i)] = layout.v1[c];
            }
            None => {
                stuck = true;
                break;
            }
        }
    }
    checks.note(
        "common neighbourhoods leave room for the smaller side",
        !stuck,
        format!("x = {x}, smaller side {}", hp.n1()),
    );
    complete(h, g, &layout, map, fallback, checks, trace, params)
}

#[allow(clippy::too_many_arguments)]
fn complete(
    h: &BipartiteGraph,
    g: &Graph,
    layout: &Layout,
    map: Vec<usize>,
    greedy_fallback: bool,
    checks: Checks,
    trace: Trace,
    params: &BipartiteParams,
) -> Result<Embedded> {
    let pattern = h.to_graph();
    let p1 = VertexSet::from_iter(g.n(), layout.v1.iter().copied());
    let p2 = VertexSet::from_iter(g.n(), layout.v2.iter().copied());
    // Part label 0 receives the original left side.
    let host_parts = if layout.flipped { vec![p2, p1] } else { vec![p1, p2] };
    let labels = h.part_labels();
    let mut fallback = greedy_fallback;
    let map = if map.contains(&usize::MAX) {
        if params.rigor == Rigor::Strict {
            return Err(Error::EmbeddingFailed(
                "no free common neighbour for a vertex of the smaller side".into(),
            ));
        }
        fallback = true;
        let c = Constraints {
            pattern: &pattern,
            host: g,
            second: None,
            targets: labels.iter().map(|&l| host_parts[l].clone()).collect(),
        };
        backtrack(&c, &default_order(&c), params.search_nodes).ok_or_else(|| {
            Error::EmbeddingFailed("greedy stuck and bounded search found no copy".into())
        })?
    } else {
        map
    };
    let contract = Contract::PartRespecting {
        pattern_part: &labels,
        host_parts: &host_parts,
    };
    finish(
        &pattern,
        g,
        Embedding::new(map, contract.mode()),
        &contract,
        checks,
        trace,
        fallback,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::generators::complete_bipartite;

    #[test]
    fn c4_in_complete_host() {
        let (c4, _, _) = BipartiteGraph::from_graph(&complete_bipartite(2, 2)).unwrap();
        let g = Graph::complete(1024);
        let e = embed_bipartite_dense(&c4, &g, &BipartiteParams::new(rat(1, 2), 1)).unwrap();
        assert!(e.certified());
    }

    #[test]
    fn too_small_host_is_a_precondition_error() {
        let (star, _, _) = BipartiteGraph::from_graph(&complete_bipartite(1, 3)).unwrap();
        let g = Graph::from_fn(30, |u, v| u / 3 == v / 3);
        let r = embed_bipartite_dense(&star, &g, &BipartiteParams::new(rat(1, 20), 1));
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
