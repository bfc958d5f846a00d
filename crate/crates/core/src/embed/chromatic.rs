//! Embedding a graph with a proper `q`-colouring into a nested chain
//! `V_1 ⊇ … ⊇ V_q`, colour class `W_k` going into `V_k`.
//!
//! Classes are placed from `W_q` down to `W_1`. A vertex of `W_k` only has
//! earlier neighbours in higher classes, whose images lie in `V_{k+1}`, so
//! its goodness context is `(V_{k+1}, V_k)`.

use crate::drc::DEFAULT_ENUM_BUDGET;
use crate::embed::leveled::{Context, Leveled};
use crate::embed::{same_universe, Checks, Embedded, GeometricBudget, NestedFamily, Rigor};
use crate::embed::DEFAULT_SEARCH_NODES;
use crate::error::{Error, Result};
use crate::graph::{Contract, Graph};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug)]
pub struct ChromaticParams {
    /// Defaults to the pattern's maximum degree.
    pub d: Option<usize>,
    pub x: usize,
    pub rigor: Rigor,
    /// Random admissible choices instead of lowest index.
    pub seed: Option<u64>,
    pub enum_budget: u64,
    pub search_nodes: u64,
}

impl ChromaticParams {
    pub fn new(x: usize) -> Self {
        ChromaticParams {
            d: None,
            x,
            rigor: Rigor::Strict,
            seed: None,
            enum_budget: DEFAULT_ENUM_BUDGET,
            search_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

/// Class index (0-based) of every vertex, after checking that `classes`
/// partitions the pattern into independent sets.
pub fn class_labels(h: &Graph, classes: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut label = vec![usize::MAX; h.n()];
    for (k, class) in classes.iter().enumerate() {
        for &v in class {
            if v >= h.n() || label[v] != usize::MAX {
                return Err(Error::DegenerateInput(format!(
                    "colour classes are not a partition (vertex {v})"
                )));
            }
            label[v] = k;
        }
        let set = VertexSet::from_iter(h.n(), class.iter().copied());
        if !h.is_independent(&set) {
            return Err(Error::DegenerateInput(format!("colour class {} is not independent", k + 1)));
        }
    }
    if let Some(v) = label.iter().position(|&l| l == usize::MAX) {
        return Err(Error::DegenerateInput(format!("vertex {v} has no colour class")));
    }
    Ok(label)
}

pub fn embed_chromatic(
    h: &Graph,
    classes: &[Vec<usize>],
    g: &Graph,
    chain: &NestedFamily,
    params: &ChromaticParams,
) -> Result<Embedded> {
    let q = classes.len();
    let label = class_labels(h, classes)?;
    if chain.depth() != q {
        return Err(Error::DegenerateInput(format!(
            "{q} colour classes need a chain of depth {q}, got {}",
            chain.depth()
        )));
    }
    for lvl in chain.levels() {
        same_universe(lvl, g)?;
    }
    let n = h.n();
    let d = params.d.unwrap_or(h.max_degree()).max(1);
    if d < h.max_degree() {
        return Err(Error::DegenerateInput(format!(
            "d = {d} is below the maximum degree {}",
            h.max_degree()
        )));
    }
    let x = params.x;
    let mut checks = Checks::new(params.rigor);
    checks.precondition(
        "x at least 4n",
        x >= 4 * n,
        format!("x = {x}, n = {n}"),
    )?;
    checks.precondition(
        "last level has at least x vertices",
        chain.last().len() >= x,
        format!("|V_q| = {}, x = {x}", chain.last().len()),
    )?;

    let budget = GeometricBudget {
        base: 2 * d as u64,
        top: x as u64,
        size: d,
    };
    let mut contexts = Vec::with_capacity(q);
    for k in 1..=q {
        let ground = if k < q { chain.level(k + 1) } else { chain.level(k) };
        contexts.push(Context {
            ground: ground.clone(),
            measure: chain.level(k).clone(),
            x,
            budget: budget.clone(),
        });
    }
    let mut order = Vec::with_capacity(n);
    for class in classes.iter().rev() {
        let mut c = class.clone();
        c.sort_unstable();
        order.extend(c);
    }
    let problem = Leveled {
        pattern: h,
        host: g,
        order,
        targets: label.iter().map(|&k| chain.level(k + 1).clone()).collect(),
        contexts,
        context_of: label.clone(),
        enum_budget: params.enum_budget,
        seed: params.seed,
    };
    for k in 1..q {
        let bad = problem.bad_count(k - 1, &[])?;
        checks.hypothesis(
            "bad d-sets of the next level below (2d)^-d C(x,d)",
            budget.allows(0, bad),
            Some(k),
            bad,
            budget.describe(0),
        )?;
    }
    let parts = chain.levels().to_vec();
    let contract = Contract::PartRespecting {
        pattern_part: &label,
        host_parts: &parts,
    };
    problem.conclude(checks, &contract, x / 2, params.search_nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::generators::{cycle, random_graph};

    #[test]
    fn triangle_into_complete_chain() {
        let h = Graph::complete(3);
        let g = Graph::complete(60);
        let chain = NestedFamily::halving(60, &VertexSet::full(60), 3).unwrap();
        let classes = vec![vec![0], vec![1], vec![2]];
        let e = embed_chromatic(&h, &classes, &g, &chain, &ChromaticParams::new(12)).unwrap();
        assert!(e.certified());
        assert!(chain.level(3).contains(e.embedding.map[2]));
    }

    #[test]
    fn c4_in_dense_random_graph() {
        let h = cycle(4).unwrap();
        let g = random_graph(60, &rat(9, 10), 3).unwrap();
        let chain = NestedFamily::halving(60, &VertexSet::full(60), 2).unwrap();
        let classes = vec![vec![0, 2], vec![1, 3]];
        let mut p = ChromaticParams::new(16);
        p.rigor = Rigor::BestEffort;
        let e = embed_chromatic(&h, &classes, &g, &chain, &p).unwrap();
        for (u, v) in h.edges() {
            assert!(g.has_edge(e.embedding.map[u], e.embedding.map[v]));
        }
    }

    #[test]
    fn rejects_improper_colouring() {
        let h = Graph::complete(3);
        let g = Graph::complete(20);
        let chain = NestedFamily::halving(20, &VertexSet::full(20), 2).unwrap();
        let err = embed_chromatic(&h, &[vec![0, 1], vec![2]], &g, &chain, &ChromaticParams::new(12));
        assert!(matches!(err, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn strict_mode_reports_level() {
        let h = cycle(4).unwrap();
        let g = Graph::empty(40);
        let chain = NestedFamily::halving(40, &VertexSet::full(40), 2).unwrap();
        let err = embed_chromatic(&h, &[vec![0, 2], vec![1, 3]], &g, &chain, &ChromaticParams::new(16));
        assert!(matches!(err, Err(Error::HypothesisFailure { level: Some(1), .. })));
    }
}
