//! Degenerate and arrangeable bipartite patterns.
//!
//! The two-sided greedy places pattern side `U_i` into `A_i`, following a
//! degeneracy (or arrangeable) ordering. A tracked set lives on the side
//! opposite to the vertex that will use it and is good when few of its
//! `d`-extensions have small common neighbourhood on that vertex's side.

use rand::seq::IndexedRandom;

use crate::drc::{sample_support, DEFAULT_ENUM_BUDGET};
use crate::embed::leveled::{Context, Leveled};
use crate::embed::{split_host, Checks, Embedded, GeometricBudget, Rigor};
use crate::embed::{DEFAULT_RETRIES, DEFAULT_SEARCH_NODES};
use crate::error::{Error, Result};
use crate::exact::{check_unit_interval, to_f64, uint, Rational};
use crate::generators::{derive_seed, rng_from_seed};
use crate::graph::{
    degeneracy_order, max_back_degree, meets_bipartite_density, verify_arrangeable, BipartiteGraph,
    Contract, Graph,
};
use crate::vertex_set::VertexSet;

/// Settings of the two-sided greedy on fixed sets `A_1, A_2`.
#[derive(Clone, Debug)]
pub struct TwoSidedParams {
    pub x: usize,
    /// Vertex order in the pattern's combined numbering; defaults to a
    /// degeneracy order.
    pub ordering: Option<Vec<usize>>,
    /// Set size of the goodness budgets; defaults to the ordering's
    /// largest back-degree.
    pub size: Option<usize>,
    /// Budget base; defaults to twice the pattern's maximum degree.
    pub base: Option<u64>,
    pub rigor: Rigor,
    pub seed: Option<u64>,
    pub enum_budget: u64,
    pub search_nodes: u64,
}

impl TwoSidedParams {
    pub fn new(x: usize) -> Self {
        TwoSidedParams {
            x,
            ordering: None,
            size: None,
            base: None,
            rigor: Rigor::Strict,
            seed: None,
            enum_budget: DEFAULT_ENUM_BUDGET,
            search_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

/// Settings of the full pipeline from a dense host.
#[derive(Clone, Debug)]
pub struct DegenerateParams {
    pub epsilon: Rational,
    pub delta: Rational,
    pub seed: u64,
    pub rigor: Rigor,
    /// Replaces the formula value of `x`; the run is then flagged.
    pub x_override: Option<usize>,
    pub retries: u32,
    pub enum_budget: u64,
    pub search_nodes: u64,
}

impl DegenerateParams {
    pub fn new(epsilon: Rational, delta: Rational, seed: u64) -> Self {
        DegenerateParams {
            epsilon,
            delta,
            seed,
            rigor: Rigor::Strict,
            x_override: None,
            retries: DEFAULT_RETRIES,
            enum_budget: DEFAULT_ENUM_BUDGET,
            search_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

struct Setup {
    pattern: Graph,
    labels: Vec<usize>,
    order: Vec<usize>,
    size: usize,
    base: u64,
}

impl Setup {
    fn problem<'a>(&'a self, g: &'a Graph, a1: &VertexSet, a2: &VertexSet, x: usize, p: &TwoSidedParams) -> Leveled<'a> {
        let budget = GeometricBudget {
            base: self.base,
            top: x as u64,
            size: self.size,
        };
        // Context 0 serves vertices placed in A_1, whose earlier neighbours sit in A_2.
        let contexts = vec![
            Context {
                ground: a2.clone(),
                measure: a1.clone(),
                x,
                budget: budget.clone(),
            },
            Context {
                ground: a1.clone(),
                measure: a2.clone(),
                x,
                budget,
            },
        ];
        Leveled {
            pattern: &self.pattern,
            host: g,
            order: self.order.clone(),
            targets: self
                .labels
                .iter()
                .map(|&l| if l == 0 { a1.clone() } else { a2.clone() })
                .collect(),
            contexts,
            context_of: self.labels.clone(),
            enum_budget: p.enum_budget,
            seed: p.seed,
        }
    }
}

fn setup(h: &BipartiteGraph, p: &TwoSidedParams) -> Result<Setup> {
    let pattern = h.to_graph();
    let order = match &p.ordering {
        Some(o) => {
            let mut seen = VertexSet::empty(pattern.n());
            if o.len() != pattern.n() || !o.iter().all(|&v| v < pattern.n() && seen.insert(v)) {
                return Err(Error::DegenerateInput("ordering is not a permutation of the pattern".into()));
            }
            o.clone()
        }
        None => degeneracy_order(&pattern).0,
    };
    let back = max_back_degree(&pattern, &order).max(1);
    let size = p.size.unwrap_or(back).max(back);
    let base = p.base.unwrap_or(2 * pattern.max_degree().max(1) as u64);
    Ok(Setup {
        labels: h.part_labels(),
        pattern,
        order,
        size,
        base,
    })
}

/// `(count, holds)` of the side hypotheses: bad `size`-sets inside `A_1`
/// (measured in `A_2`) and inside `A_2` (measured in `A_1`).
fn side_counts(problem: &Leveled<'_>) -> Result<[(u128, bool); 2]> {
    let mut out = [(0, false); 2];
    for (side, ctx) in [(0, 1), (1, 0)] {
        let bad = problem.bad_count(ctx, &[])?;
        out[side] = (bad, problem.contexts[ctx].budget.allows(0, bad));
    }
    Ok(out)
}

fn run_two_sided(
    setup: &Setup,
    g: &Graph,
    a1: &VertexSet,
    a2: &VertexSet,
    p: &TwoSidedParams,
    mut checks: Checks,
) -> Result<Embedded> {
    let n = setup.pattern.n();
    if !a1.is_disjoint(a2) {
        return Err(Error::DegenerateInput("A_1 and A_2 overlap".into()));
    }
    checks.precondition("x at least 4n", p.x >= 4 * n, format!("x = {}, n = {n}", p.x))?;
    checks.precondition(
        "both sides hold at least x vertices",
        a1.len() >= p.x && a2.len() >= p.x,
        format!("|A_1| = {}, |A_2| = {}, x = {}", a1.len(), a2.len(), p.x),
    )?;
    let problem = setup.problem(g, a1, a2, p.x, p);
    let counts = side_counts(&problem)?;
    let budget = &problem.contexts[0].budget;
    for (side, (bad, holds)) in counts.iter().enumerate() {
        checks.hypothesis(
            "bad sets of a side below the geometric budget",
            *holds,
            Some(side + 1),
            bad,
            budget.describe(0),
        )?;
    }
    let parts = [a1.clone(), a2.clone()];
    let contract = Contract::PartRespecting {
        pattern_part: &setup.labels,
        host_parts: &parts,
    };
    problem.conclude(checks, &contract, p.x / 2, p.search_nodes)
}

/// Embeds a bipartite pattern with `U_1 → A_1` and `U_2 → A_2` given the two
/// host sets directly.
pub fn embed_two_sided(
    h: &BipartiteGraph,
    g: &Graph,
    a1: &VertexSet,
    a2: &VertexSet,
    p: &TwoSidedParams,
) -> Result<Embedded> {
    let s = setup(h, p)?;
    run_two_sided(&s, g, a1, a2, p, Checks::new(p.rigor))
}

/// The size of the common neighbourhood threshold for the dense-host
/// pipeline, `2^-9 ε^{(1+t)(1+δ)} Δ^{-δ} N` with `t = d(1 + 1/δ)`.
pub fn degenerate_x(epsilon: &Rational, delta: &Rational, d: usize, max_degree: usize, n: usize) -> f64 {
    let (e, dl) = (to_f64(epsilon), to_f64(delta));
    let t = d as f64 * (1.0 + 1.0 / dl);
    2f64.powi(-9) * e.powf((1.0 + t) * (1.0 + dl)) * (max_degree as f64).powf(-dl) * n as f64
}

pub fn embed_degenerate(h: &BipartiteGraph, g: &Graph, params: &DegenerateParams) -> Result<Embedded> {
    let pattern = h.to_graph();
    let (order, d) = degeneracy_order(&pattern);
    let d = d.max(1);
    let delta_max = pattern.max_degree().max(1);
    pipeline(h, g, params, order, d, delta_max, 2 * delta_max as u64)
}

/// Same pipeline for a `p`-arrangeable pattern: sets of size `p` and budget
/// base `2^p`, as for maximum degree `2^{p-1}`.
pub fn embed_arrangeable(
    h: &BipartiteGraph,
    ordering: &[usize],
    p: usize,
    g: &Graph,
    params: &DegenerateParams,
) -> Result<Embedded> {
    if p == 0 || p > 20 || !verify_arrangeable(&h.to_graph(), ordering, p) {
        return Err(Error::Precondition(format!("ordering does not witness {p}-arrangeability")));
    }
    pipeline(h, g, params, ordering.to_vec(), p, 1 << (p - 1), 1u64 << p)
}

fn pipeline(
    h: &BipartiteGraph,
    g: &Graph,
    params: &DegenerateParams,
    order: Vec<usize>,
    d: usize,
    delta_max: usize,
    base: u64,
) -> Result<Embedded> {
    check_unit_interval("epsilon", &params.epsilon)?;
    check_unit_interval("delta", &params.delta)?;
    let n = h.n();
    if uint(d as u128) > &params.delta * uint(n as u128) {
        return Err(Error::DegenerateInput(format!("delta must be at least d/n = {d}/{n}")));
    }
    let (v1, v2) = split_host(g, params.seed)?;
    let big_n = v1.len();
    let cut = BipartiteGraph::from_cut(g, &v1, &v2)?;
    if !meets_bipartite_density(&cut, &params.epsilon) {
        return Err(Error::Precondition(format!(
            "cut has {} edges, fewer than epsilon N^2 with N = {big_n}",
            cut.edge_count()
        )));
    }
    let host = cut.to_graph();
    let side1 = VertexSet::range(host.n(), 0, big_n);
    let side2 = VertexSet::range(host.n(), big_n, 2 * big_n);

    let mut checks = Checks::new(params.rigor);
    let formula = degenerate_x(&params.epsilon, &params.delta, d, delta_max, big_n);
    let x = match params.x_override {
        Some(x) => {
            checks.note(
                "x follows the size formula",
                false,
                format!("override x = {x}, formula gives {formula:.3}"),
            );
            x
        }
        None => {
            let x = formula.floor() as usize;
            if x < 4 * n {
                return Err(Error::Precondition(format!(
                    "x = {formula:.3} from N = {big_n} is below 4n = {}",
                    4 * n
                )));
            }
            x
        }
    };
    let t_exact = uint(d as u128) + uint(d as u128) / &params.delta;
    let t = crate::exact::ceil_u64(&t_exact) as usize;
    if uint(t as u128) != t_exact {
        checks.note("t is an integer", false, format!("t = {} rounded up to {t}", to_f64(&t_exact)));
    }

    // A' = N(T) inside V1 for a sample T of V2, large enough.
    let mut rng = rng_from_seed(derive_seed(params.seed, 1));
    let need = to_f64(&crate::exact::powi(&params.epsilon, t as i64)) * big_n as f64 / 2.0;
    let mut a_prime = None;
    let mut best = VertexSet::empty(host.n());
    for _ in 0..params.retries {
        let (_, a) = sample_support(&host, &side2, &side1, t, &mut rng)?;
        if a.len() as f64 >= need && a.len() >= t + x {
            a_prime = Some(a);
            break;
        }
        if a.len() > best.len() {
            best = a;
        }
    }
    let a_prime = match a_prime {
        Some(a) => a,
        None if params.rigor == Rigor::Strict => {
            return Err(Error::RetryExhausted {
                attempts: params.retries,
                detail: format!("no sample gave |A'| >= {need:.1}; best {}", best.len()),
            })
        }
        None => {
            checks.note("A' large enough", false, format!("best |A'| = {}", best.len()));
            best
        }
    };
    if a_prime.len() < t {
        return Err(Error::EmbeddingFailed(format!("|A'| = {} is below t = {t}", a_prime.len())));
    }

    let tp = TwoSidedParams {
        x,
        ordering: Some(order),
        size: Some(d),
        base: Some(base),
        rigor: params.rigor,
        seed: None,
        enum_budget: params.enum_budget,
        search_nodes: params.search_nodes,
    };
    let s = setup(h, &tp)?;
    let pool = a_prime.to_vec();
    let mut last = None;
    for attempt in 0..params.retries {
        let pick: Vec<usize> = pool.choose_multiple(&mut rng, t).copied().collect();
        let a2 = host.common_neighborhood_of(&pick).intersection(&side2);
        let mut a1 = a_prime.clone();
        for &v in &pick {
            a1.remove(v);
        }
        let problem = s.problem(&host, &a1, &a2, x, &tp);
        let counts = side_counts(&problem)?;
        if counts.iter().all(|c| c.1) {
            checks.note("choice of S", true, format!("accepted at attempt {}", attempt + 1));
            return relabel(run_two_sided(&s, &host, &a1, &a2, &tp, checks)?, g, &v1, &v2, h);
        }
        last = Some((a1, a2, counts));
    }
    let (a1, a2, counts) = last.expect("at least one attempt");
    if params.rigor == Rigor::Strict {
        return Err(Error::RetryExhausted {
            attempts: params.retries,
            detail: format!("bad counts {} and {} over budget", counts[0].0, counts[1].0),
        });
    }
    checks.note("choice of S", false, format!("no S within budget in {} attempts", params.retries));
    relabel(run_two_sided(&s, &host, &a1, &a2, &tp, checks)?, g, &v1, &v2, h)
}

/// Maps an embedding into the cut graph back to the original host.
fn relabel(mut e: Embedded, g: &Graph, v1: &[usize], v2: &[usize], h: &BipartiteGraph) -> Result<Embedded> {
    let big_n = v1.len();
    for x in &mut e.embedding.map {
        *x = if *x < big_n { v1[*x] } else { v2[*x - big_n] };
    }
    let parts = [
        VertexSet::from_iter(g.n(), v1.iter().copied()),
        VertexSet::from_iter(g.n(), v2.iter().copied()),
    ];
    let labels = h.part_labels();
    let contract = Contract::PartRespecting {
        pattern_part: &labels,
        host_parts: &parts,
    };
    if !crate::graph::validate_embedding(&h.to_graph(), g, &e.embedding, &contract)? {
        return Err(Error::InvalidEmbedding(
            "internal error: relabelled map violates its contract".into(),
        ));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::generators::{complete_bipartite, cycle, path, star};

    fn bip(g: &Graph) -> BipartiteGraph {
        BipartiteGraph::from_graph(g).unwrap().0
    }

    #[test]
    fn two_sided_in_complete_bipartite() {
        let h = bip(&cycle(6).unwrap());
        let g = complete_bipartite(30, 30);
        let a1 = VertexSet::range(60, 0, 30);
        let a2 = VertexSet::range(60, 30, 60);
        let e = embed_two_sided(&h, &g, &a1, &a2, &TwoSidedParams::new(24)).unwrap();
        assert!(e.certified());
    }

    #[test]
    fn star_pipeline_with_override() {
        let h = bip(&star(5));
        let g = Graph::complete(200);
        let mut p = DegenerateParams::new(rat(1, 1), rat(1, 1), 4);
        p.x_override = Some(24);
        let e = embed_degenerate(&h, &g, &p).unwrap();
        assert!(!e.certified());
        assert!(e.failed_checks().all(|c| c.name == "x follows the size formula"));
    }

    #[test]
    fn formula_x_too_small() {
        let h = bip(&star(5));
        let g = Graph::complete(200);
        let r = embed_degenerate(&h, &g, &DegenerateParams::new(rat(1, 1), rat(1, 1), 4));
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn arrangeable_path_and_rejection() {
        let h = bip(&path(4));
        let g = Graph::complete(200);
        let mut p = DegenerateParams::new(rat(1, 1), rat(1, 1), 2);
        p.x_override = Some(20);
        let pg = h.to_graph();
        let ord = path_order(&pg);
        assert!(verify_arrangeable(&pg, &ord, 1));
        embed_arrangeable(&h, &ord, 1, &g, &p).unwrap();
        let k33 = bip(&complete_bipartite(3, 3));
        let r = embed_arrangeable(&k33, &(0..6).collect::<Vec<_>>(), 1, &g, &p);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    fn path_order(g: &Graph) -> Vec<usize> {
        let start = (0..g.n()).find(|&v| g.degree(v) == 1).unwrap();
        let mut order = vec![start];
        while order.len() < g.n() {
            let last = *order.last().unwrap();
            let next = g.neighbors(last).iter().find(|v| !order.contains(v)).unwrap();
            order.push(next);
        }
        order
    }
}
