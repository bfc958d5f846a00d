//! 1-subdivisions in dense hosts.
//!
//! Branch vertices go to one half `V1'` of the host (pruned to high degree),
//! subdivision vertices to the other half `V2`. Two branch images must have
//! many common neighbours in `V2`; that relation is the auxiliary graph
//! `G*`. A chain `A_0 ⊇ A_1 ⊇ …` with ever sparser complement of `G*` lets
//! high-degree branch vertices be placed where almost everything is
//! adjacent in `G*`.

use serde::Serialize;

use crate::embed::search::{backtrack, default_order, Constraints};
use crate::embed::{finish, split_host, Checks, Embedded, Rigor, Trace};
use crate::embed::{DEFAULT_RETRIES, DEFAULT_SEARCH_NODES};
use crate::error::{Error, Result};
use crate::exact::{check_unit_interval, format_rational, powi, uint, Rational};
use crate::generators::{derive_seed, one_subdivision, rng_from_seed};
use crate::graph::{Contract, Embedding, Graph, Side};
use crate::vertex_set::VertexSet;
use rand::Rng;

#[derive(Clone, Debug)]
pub struct SubdivisionParams {
    pub epsilon: Rational,
    pub seed: u64,
    pub rigor: Rigor,
    pub retries: u32,
    pub search_nodes: u64,
}

impl SubdivisionParams {
    pub fn new(epsilon: Rational, seed: u64) -> Self {
        SubdivisionParams {
            epsilon,
            seed,
            rigor: Rigor::Strict,
            retries: DEFAULT_RETRIES,
            search_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

/// Size and complement-degree data of one chain level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainLevel {
    pub size: usize,
    pub max_complement_degree: usize,
    pub attempts: u32,
    pub size_ok: bool,
    pub degree_ok: bool,
}

/// An embedding of the 1-subdivision with the chain it was built on.
///
/// The map uses the subdivision's combined numbering: branch vertex `v` is
/// `v`, the vertex on the `k`-th edge (lexicographic order) is `|V(H)| + k`.
#[derive(Clone, Debug, Serialize)]
pub struct SubdivisionEmbedding {
    pub embedded: Embedded,
    pub chain: Vec<ChainLevel>,
    /// Edges of the branch-vertex graph (never more than the pattern's edges).
    pub reduced_edges: usize,
}

/// Graph on the left side of `b` joining two vertices with a common neighbour.
fn reduced_graph(b: &crate::graph::BipartiteGraph) -> Graph {
    let mut g = Graph::empty(b.n1());
    for j in 0..b.n2() {
        let nb = b.neighbors(Side::Right, j).to_vec();
        for (i, &u) in nb.iter().enumerate() {
            for &v in &nb[i + 1..] {
                g.add_edge(u, v).expect("distinct left vertices");
            }
        }
    }
    g
}

struct Star<'a> {
    adj: &'a [VertexSet],
}

impl Star<'_> {
    fn complement_degree(&self, v: usize, a: &VertexSet) -> usize {
        a.len() - 1 - self.adj[v].intersection_len(a)
    }

    fn max_complement_degree(&self, a: &VertexSet) -> usize {
        a.iter().map(|v| self.complement_degree(v, a)).max().unwrap_or(0)
    }

    /// Repeatedly removes a vertex of largest complement degree above `tau`.
    fn prune(&self, mut a: VertexSet, tau: &Rational) -> VertexSet {
        loop {
            let worst = a
                .iter()
                .map(|v| (self.complement_degree(v, &a), v))
                .max();
            match worst {
                Some((deg, v)) if uint(deg as u128) > *tau => {
                    a.remove(v);
                }
                _ => return a,
            }
        }
    }
}

pub fn embed_subdivision(h: &Graph, g: &Graph, params: &SubdivisionParams) -> Result<SubdivisionEmbedding> {
    check_unit_interval("epsilon", &params.epsilon)?;
    let eps = &params.epsilon;
    let sub = one_subdivision(h)?;
    let n = h.m();
    if n == 0 {
        return Err(Error::DegenerateInput("pattern has no edges".into()));
    }
    let (v1, v2) = split_host(g, params.seed)?;
    let big_n = v1.len();
    let mut checks = Checks::new(params.rigor);
    let need_edges = uint(2) * eps * uint((big_n * big_n) as u128);
    checks.note(
        "host has at least 2 eps N^2 edges",
        uint(g.m() as u128) >= need_edges,
        format!("{} edges, bound {}", g.m(), format_rational(&need_edges)),
    );
    checks.precondition(
        "N at least 128 eps^-3 n",
        powi(eps, 3) * uint(big_n as u128) >= uint(128 * n as u128),
        format!("N = {big_n}, n = {n}"),
    )?;

    let side2 = VertexSet::from_iter(g.n(), v2.iter().copied());
    let half_deg = eps * uint(big_n as u128) / uint(2);
    let v1p: Vec<usize> = v1
        .iter()
        .copied()
        .filter(|&v| uint(g.neighbors(v).intersection_len(&side2) as u128) >= half_deg)
        .collect();
    let a0 = VertexSet::from_iter(g.n(), v1p.iter().copied());
    checks.note(
        "pruned side keeps at least eps N / 2 vertices",
        uint(a0.len() as u128) >= half_deg,
        format!("|V1'| = {}", a0.len()),
    );

    let reduced = reduced_graph(&sub);
    if reduced.m() > n {
        return Err(Error::InvalidEmbedding(format!(
            "internal error: branch graph has {} edges, more than {n}",
            reduced.m()
        )));
    }

    // G* on V1': common neighbourhood in V2 of size at least n.
    let rows: Vec<VertexSet> = (0..g.n()).map(|v| g.neighbors(v).intersection(&side2)).collect();
    let adj: Vec<VertexSet> = crate::par::map_range(g.n(), |u| {
        if !a0.contains(u) {
            return VertexSet::empty(g.n());
        }
        VertexSet::from_iter(
            g.n(),
            v1p.iter().copied().filter(|&v| v != u && rows[u].intersection_len(&rows[v]) >= n),
        )
    });
    let star = Star { adj: &adj };

    // Order branch vertices by decreasing degree in the branch graph.
    let mut order: Vec<usize> = (0..reduced.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(reduced.degree(v)), v));
    let c = |j: usize| powi(&(eps / uint(8)), j as i64);
    let level_of = |i: usize| -> usize {
        let bound = uint(i as u128) / uint(4 * n as u128);
        (1..).find(|&j| c(j) <= bound).expect("c_j tends to zero")
    };
    let depth = level_of(1);

    let mut rng = rng_from_seed(derive_seed(params.seed, 5));
    let mut levels = vec![a0.clone()];
    let mut chain = Vec::new();
    for i in 1..=depth {
        let prev = levels.last().expect("nonempty").clone();
        let mut best: Option<(VertexSet, ChainLevel)> = None;
        for attempt in 1..=params.retries {
            let w = v2[rng.random_range(0..v2.len())];
            let a = prev.intersection(g.neighbors(w));
            if a.is_empty() {
                continue;
            }
            let tau = eps * c(i - 1) * uint(a.len() as u128) / uint(16);
            let ai = star.prune(a, &tau);
            let maxd = star.max_complement_degree(&ai);
            let lvl = ChainLevel {
                size: ai.len(),
                max_complement_degree: maxd,
                attempts: attempt,
                size_ok: uint(8 * ai.len() as u128) >= eps * uint(prev.len() as u128),
                degree_ok: uint(maxd as u128) <= c(i) * uint(ai.len() as u128),
            };
            let done = lvl.size_ok && lvl.degree_ok;
            if done || best.as_ref().is_none_or(|(b, _)| ai.len() > b.len()) {
                best = Some((ai, lvl));
            }
            if done {
                break;
            }
        }
        let Some((ai, lvl)) = best else {
            return Err(Error::RetryExhausted {
                attempts: params.retries,
                detail: format!("level {i}: every sampled vertex missed the previous level"),
            });
        };
        if !(lvl.size_ok && lvl.degree_ok) {
            if params.rigor == Rigor::Strict {
                return Err(Error::RetryExhausted {
                    attempts: params.retries,
                    detail: format!(
                        "level {i}: best size {} and complement degree {}",
                        lvl.size, lvl.max_complement_degree
                    ),
                });
            }
            checks.note("chain level bounds", false, format!("level {i} missed its bounds"));
        }
        chain.push(lvl);
        levels.push(ai);
    }

    // Branch vertices into the chain, adjacent in G* to earlier neighbours.
    let mut f = vec![usize::MAX; sub.n()];
    let mut used = VertexSet::empty(g.n());
    let mut trace = Trace::default();
    let mut stuck = false;
    for (k, &v) in order.iter().enumerate() {
        let mut cand = levels[level_of(k + 1)].difference(&used);
        for u in reduced.neighbors(v).iter() {
            if f[u] != usize::MAX {
                cand.intersect_with(&adj[f[u]]);
            }
        }
        trace.choices.push(cand.len());
        trace.excluded.push(0);
        match cand.first() {
            Some(x) => {
                f[v] = x;
                used.insert(x);
            }
            None => {
                stuck = true;
                break;
            }
        }
    }
    // Subdivision vertices through common neighbours in V2.
    if !stuck {
        for k in 0..sub.n2() {
            let ends = sub.neighbors(Side::Right, k).to_vec();
            let mut cand = rows[f[ends[0]]].intersection(&rows[f[ends[1]]]);
            cand.difference_with(&used);
            match cand.first() {
                Some(x) => {
                    f[sub.n1() + k] = x;
                    used.insert(x);
                }
                None => {
                    stuck = true;
                    break;
                }
            }
        }
    }
    checks.note("greedy placement completed", !stuck, String::new());

    let pattern = sub.to_graph();
    let labels = sub.part_labels();
    let parts = [a0, side2];
    let fallback = stuck;
    if stuck {
        if params.rigor == Rigor::Strict {
            return Err(Error::EmbeddingFailed("no admissible vertex for the greedy".into()));
        }
        let c = Constraints {
            pattern: &pattern,
            host: g,
            second: None,
            targets: labels.iter().map(|&l| parts[l].clone()).collect(),
        };
        f = backtrack(&c, &default_order(&c), params.search_nodes).ok_or_else(|| {
            Error::EmbeddingFailed("greedy stuck and bounded search found no copy".into())
        })?;
    }
    let contract = Contract::PartRespecting {
        pattern_part: &labels,
        host_parts: &parts,
    };
    let embedded = finish(
        &pattern,
        g,
        Embedding::new(f, contract.mode()),
        &contract,
        checks,
        trace,
        fallback,
    )?;
    Ok(SubdivisionEmbedding {
        embedded,
        chain,
        reduced_edges: reduced.m(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn triangle_subdivision_in_complete_host() {
        // n = 3 edges, eps = 1 needs N >= 384.
        let g = Graph::complete(800);
        let e = embed_subdivision(&Graph::complete(3), &g, &SubdivisionParams::new(rat(1, 1), 3)).unwrap();
        // K_N falls just short of 2N^2 edges at eps = 1; nothing else fails.
        let failed: Vec<_> = e.embedded.failed_checks().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["host has at least 2 eps N^2 edges"]);
        assert!(!e.embedded.fallback);
        assert_eq!(e.embedded.embedding.map.len(), 6);
        assert_eq!(e.reduced_edges, 3);
    }

    #[test]
    fn small_host_rejected() {
        let g = Graph::complete(100);
        let r = embed_subdivision(&Graph::complete(3), &g, &SubdivisionParams::new(rat(1, 1), 3));
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
