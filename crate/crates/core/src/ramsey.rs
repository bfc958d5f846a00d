//! End-to-end drivers: monochromatic copies in edge colourings, bi-dense
//! pairs, the independent-set-or-biclique dichotomy, pseudo-randomness
//! certificates and monochromatic induced copies in pseudo-random hosts.
//!
//! Every returned object is re-checked from scratch before it leaves a
//! driver; a driver that cannot produce a valid object returns an error.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Zero};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::drc::{drc_find_witness_with_budget, sample_support, DrcParams, DEFAULT_ENUM_BUDGET};
use crate::embed::bipartite::{embed_bipartite_dense, BipartiteParams};
use crate::embed::chromatic::{embed_chromatic, ChromaticParams};
use crate::embed::induced::{embed_induced, InducedParams, PairCounter};
use crate::embed::ledger::PairBudget;
use crate::embed::{split_host, Embedded, NestedFamily, Rigor, DEFAULT_RETRIES, DEFAULT_SEARCH_NODES};
use crate::error::{Error, Result};
use crate::exact::{ceil_u64, format_rational, powi, rat, to_f64, uint, Rational};
use crate::generators::{derive_seed, rng_from_seed};
use crate::graph::{BipartiteGraph, Graph};
use crate::oracles::{find_clique_of_size, max_clique_within, SearchBudget};
use crate::vertex_set::VertexSet;

fn rational_string<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// An edge colouring of a host graph with colours `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    host: Graph,
    classes: Vec<Graph>,
}

impl EdgeColoring {
    /// Colours every host edge `{u, v}` (`u < v`) with `colour(u, v)`.
    pub fn new(host: Graph, k: usize, mut colour: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::DegenerateInput("a colouring needs at least one colour".into()));
        }
        let mut classes = vec![Graph::empty(host.n()); k];
        for (u, v) in host.edges() {
            let c = colour(u, v);
            if c >= k {
                return Err(Error::DegenerateInput(format!(
                    "edge {u}-{v} has colour {c}, outside 0..{k}"
                )));
            }
            classes[c].add_edge(u, v)?;
        }
        Ok(EdgeColoring { host, classes })
    }

    /// From explicit `(u, v, colour)` triples, which must cover every host
    /// edge exactly once.
    pub fn from_triples(host: Graph, k: usize, triples: &[(usize, usize, usize)]) -> Result<Self> {
        if k == 0 {
            return Err(Error::DegenerateInput("a colouring needs at least one colour".into()));
        }
        let mut classes = vec![Graph::empty(host.n()); k];
        let mut seen = Graph::empty(host.n());
        for &(u, v, c) in triples {
            if u >= host.n() || v >= host.n() || !host.has_edge(u, v) {
                return Err(Error::DegenerateInput(format!("{u}-{v} is not a host edge")));
            }
            if c >= k {
                return Err(Error::DegenerateInput(format!(
                    "edge {u}-{v} has colour {c}, outside 0..{k}"
                )));
            }
            if !seen.add_edge(u, v)? {
                return Err(Error::DegenerateInput(format!("edge {u}-{v} is coloured twice")));
            }
            classes[c].add_edge(u, v)?;
        }
        if seen.m() != host.m() {
            return Err(Error::DegenerateInput(format!(
                "{} of {} host edges are uncoloured",
                host.m() - seen.m(),
                host.m()
            )));
        }
        Ok(EdgeColoring { host, classes })
    }

    /// Independent uniform colours.
    pub fn random(host: Graph, k: usize, seed: u64) -> Result<Self> {
        let mut rng = rng_from_seed(seed);
        EdgeColoring::new(host, k, |_, _| rng.random_range(0..k.max(1)))
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    /// The graph of colour `c`.
    pub fn class(&self, c: usize) -> &Graph {
        &self.classes[c]
    }

    pub fn colour(&self, u: usize, v: usize) -> Option<usize> {
        self.classes.iter().position(|g| u != v && g.has_edge(u, v))
    }

    /// `(u, v, colour)` for every host edge, `u < v`, lexicographic.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        self.host
            .edges()
            .into_iter()
            .map(|(u, v)| (u, v, self.colour(u, v).expect("total on host edges")))
            .collect()
    }

    /// Colour with the most edges inside `within`; lowest index on ties.
    pub fn densest_within(&self, within: &VertexSet) -> usize {
        argmax_lowest(self.classes.iter().map(|g| g.ordered_pairs_between(within, within)))
    }

    fn densest_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        argmax_lowest(self.classes.iter().map(|g| g.cross_edges(a, b)))
    }
}

fn argmax_lowest(values: impl Iterator<Item = u64>) -> usize {
    let mut best = (0, 0);
    for (i, v) in values.enumerate() {
        if i == 0 || v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Lowest colour occurring at least `need` times.
fn popular_colour(colours: &[usize], k: usize, need: usize) -> Option<usize> {
    (0..k).find(|&c| colours.iter().filter(|&&x| x == c).count() >= need)
}

/// A proper colouring of `h` with the fewest colours, as colour classes.
pub fn minimum_colouring(h: &Graph) -> Vec<Vec<usize>> {
    let n = h.n();
    if n == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    fn assign(h: &Graph, order: &[usize], pos: usize, q: usize, col: &mut [usize]) -> bool {
        let Some(&v) = order.get(pos) else {
            return true;
        };
        let used = order[..pos].iter().map(|&u| col[u]).max().map_or(0, |c| c + 1);
        // Colours beyond the first unused one are symmetric.
        for c in 0..q.min(used + 1) {
            if h.neighbors(v).iter().all(|u| col[u] != c) {
                col[v] = c;
                if assign(h, order, pos + 1, q, col) {
                    return true;
                }
            }
        }
        col[v] = usize::MAX;
        false
    }
    for q in 1..=n {
        let mut col = vec![usize::MAX; n];
        if assign(h, &order, 0, q, &mut col) {
            let mut classes = vec![Vec::new(); q];
            for v in 0..n {
                classes[col[v]].push(v);
            }
            return classes;
        }
    }
    unreachable!("n colours always suffice")
}

/// Injective map sending every pattern edge to an edge of colour `colour`.
pub fn check_monochromatic(h: &Graph, coloring: &EdgeColoring, colour: usize, map: &[usize]) -> Result<()> {
    check_injective(map, coloring.host().n(), h.n())?;
    for (u, v) in h.edges() {
        if coloring.colour(map[u], map[v]) != Some(colour) {
            return Err(Error::InvalidEmbedding(format!(
                "pattern edge {u}-{v} maps to {}-{}, not an edge of colour {colour}",
                map[u], map[v]
            )));
        }
    }
    Ok(())
}

fn check_injective(map: &[usize], universe: usize, n: usize) -> Result<()> {
    if map.len() != n {
        return Err(Error::InvalidEmbedding(format!("map has {} entries for {n} vertices", map.len())));
    }
    let mut seen = VertexSet::empty(universe);
    for &x in map {
        if x >= universe || !seen.insert(x) {
            return Err(Error::InvalidEmbedding(format!("image {x} is out of range or repeated")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct MonoParams {
    pub seed: u64,
    /// Accept hosts below the size bound; the run becomes best-effort.
    pub allow_small: bool,
    pub trials: u64,
    pub enum_budget: u64,
    pub search_nodes: u64,
}

impl MonoParams {
    pub fn new(seed: u64) -> Self {
        MonoParams {
            seed,
            allow_small: false,
            trials: DEFAULT_RETRIES as u64,
            enum_budget: DEFAULT_ENUM_BUDGET,
            search_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

/// One refinement step of a chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub size: usize,
    pub colour: usize,
    /// Dependent random choice produced a witness (not a best-effort sample).
    pub witness: bool,
    /// The step kept at least the required fraction of the previous level.
    pub ratio_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonoEmbedding {
    pub colour: usize,
    pub embedded: Embedded,
    pub chain: Vec<ChainStep>,
    pub x: usize,
}

/// Uniformly shuffled halves of `set` of equal size.
fn halves(set: &VertexSet, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut v = set.to_vec();
    v.shuffle(&mut rng_from_seed(seed));
    let half = v.len() / 2;
    let second = v[half..2 * half].to_vec();
    v.truncate(half);
    (v, second)
}

/// Dependent random choice on a cut; `A` is a subset of `part2`, given in
/// host numbering. Over budget or without a witness, strict runs fail and
/// best-effort runs keep the largest sampled common neighbourhood.
#[allow(clippy::too_many_arguments)]
fn drc_step(
    class: &Graph,
    part1: &[usize],
    part2: &[usize],
    params: &DrcParams,
    trials: u64,
    seed: u64,
    budget: u64,
    rigor: Rigor,
    level: usize,
) -> Result<(VertexSet, bool)> {
    let cut = BipartiteGraph::from_cut(class, part1, part2)?;
    match drc_find_witness_with_budget(&cut, params, trials, seed, budget) {
        Ok((o, _)) => Ok((VertexSet::from_iter(class.n(), o.a_set.iter().map(|j| part2[j])), true)),
        Err(e @ (Error::WitnessNotFound { .. } | Error::BudgetExceeded { .. })) => {
            if rigor == Rigor::Strict {
                return Err(Error::hypothesis(
                    format!("dependent random choice witness ({e})"),
                    Some(level),
                    "none",
                    format!("{trials} trials"),
                ));
            }
            let from = VertexSet::from_iter(class.n(), part1.iter().copied());
            let to = VertexSet::from_iter(class.n(), part2.iter().copied());
            let mut rng = rng_from_seed(derive_seed(seed, u64::MAX));
            let mut best = VertexSet::empty(class.n());
            for _ in 0..trials.max(1) {
                let (_, a) = sample_support(class, &from, &to, params.t, &mut rng)?;
                if a.len() > best.len() {
                    best = a;
                }
            }
            Ok((best, false))
        }
        Err(e) => Err(e),
    }
}

/// Monochromatic copy of `h` in a two-colouring of a complete graph.
///
/// The host is refined `2q - 3` times: halve the current level, take the
/// colour densest across the halves and keep a dependent-random-choice set
/// in the second half. The colour seen at least `q - 1` times picks the
/// chain handed to the chromatic embedder.
pub fn mono_embed_2color(h: &Graph, coloring: &EdgeColoring, params: &MonoParams) -> Result<MonoEmbedding> {
    if coloring.k() != 2 {
        return Err(Error::DegenerateInput(format!("expected 2 colours, got {}", coloring.k())));
    }
    let big_n = coloring.host().n();
    if coloring.host().m() != big_n * big_n.saturating_sub(1) / 2 {
        return Err(Error::DegenerateInput("the coloured host must be complete".into()));
    }
    if h.m() == 0 {
        return Err(Error::DegenerateInput("pattern has no edges".into()));
    }
    let n = h.n();
    let classes = minimum_colouring(h);
    let q = classes.len();
    let d = h.max_degree();
    let exp = ((2 * d + 2) * (2 * q - 3)) as i64;
    let need = powi(&uint(2), exp + 2) * uint(n as u128);
    let big_enough = uint(big_n as u128) >= need;
    if !big_enough && !params.allow_small {
        return Err(Error::Precondition(format!(
            "N = {big_n} is below 2^{} n = {}",
            exp + 2,
            format_rational(&need)
        )));
    }
    let rigor = if big_enough { Rigor::Strict } else { Rigor::BestEffort };
    let mut x = crate::exact::floor_u64(&(uint(big_n as u128) / powi(&uint(2), exp))) as usize;
    if !big_enough {
        x = x.max(4 * n);
    }

    let drc = DrcParams {
        a: 1,
        d,
        t: 2 * d,
        x,
        epsilon: rat(1, 2),
    };
    let mut levels = vec![VertexSet::full(big_n)];
    let mut chain = Vec::new();
    for i in 1..=2 * q - 3 {
        let prev = levels.last().expect("nonempty");
        let (p1, p2) = halves(prev, derive_seed(params.seed, 2 * i as u64));
        let s1 = VertexSet::from_iter(big_n, p1.iter().copied());
        let s2 = VertexSet::from_iter(big_n, p2.iter().copied());
        let c = coloring.densest_between(&s1, &s2);
        let (next, witness) = drc_step(
            coloring.class(c),
            &p1,
            &p2,
            &drc,
            params.trials,
            derive_seed(params.seed, 2 * i as u64 + 1),
            params.enum_budget,
            rigor,
            i,
        )?;
        let ratio_ok = next.len() << (2 * d + 2) >= prev.len();
        if !ratio_ok && rigor == Rigor::Strict {
            return Err(Error::hypothesis(
                "level keeps 2^(-2d-2) of its parent",
                Some(i),
                next.len(),
                format!("{} / 2^{}", prev.len(), 2 * d + 2),
            ));
        }
        chain.push(ChainStep {
            size: next.len(),
            colour: c,
            witness,
            ratio_ok,
        });
        levels.push(next);
    }

    let colours: Vec<usize> = chain.iter().map(|s| s.colour).collect();
    let colour = popular_colour(&colours, 2, q - 1).expect("pigeonhole over 2q - 3 steps");
    let mut picked = vec![levels[0].clone()];
    for (j, &c) in colours.iter().enumerate() {
        if c == colour && picked.len() < q {
            picked.push(levels[j + 1].clone());
        }
    }
    let nested = NestedFamily::new(picked)?;
    let mut cp = ChromaticParams::new(x);
    cp.d = Some(d);
    cp.rigor = rigor;
    cp.enum_budget = params.enum_budget;
    cp.search_nodes = params.search_nodes;
    let embedded = embed_chromatic(h, &classes, coloring.class(colour), &nested, &cp)?;
    check_monochromatic(h, coloring, colour, &embedded.embedding.map)?;
    Ok(MonoEmbedding {
        colour,
        embedded,
        chain,
        x,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ColouredEmbedding {
    pub colour: usize,
    pub embedded: Embedded,
}

/// Copy of `hs[c]` in colour `c`, where `c` is the majority colour,
/// embedded with density `1/k`.
pub fn multicolor_bipartite_driver(
    hs: &[BipartiteGraph],
    coloring: &EdgeColoring,
    seed: u64,
) -> Result<ColouredEmbedding> {
    let k = coloring.k();
    if hs.len() != k {
        return Err(Error::DegenerateInput(format!("{k} colours need {k} patterns, got {}", hs.len())));
    }
    let big_n = coloring.host().n();
    let delta = hs.iter().map(|h| h.max_degree()).max().unwrap_or(0).max(1);
    let n = hs.iter().map(|h| h.n()).max().unwrap_or(0);
    let need = uint(32 * delta as u128) * powi(&uint(k as u128), delta as i64) * uint(n as u128);
    if uint(big_n as u128) < need {
        return Err(Error::Precondition(format!(
            "N = {big_n} is below 32 D k^D n = {}",
            format_rational(&need)
        )));
    }
    let colour = argmax_lowest((0..k).map(|c| coloring.class(c).m() as u64));
    let params = BipartiteParams::new(rat(1, k as i64), seed);
    let embedded = embed_bipartite_dense(&hs[colour], coloring.class(colour), &params)?;
    check_monochromatic(&hs[colour].to_graph(), coloring, colour, &embedded.embedding.map)?;
    Ok(ColouredEmbedding { colour, embedded })
}

#[derive(Clone, Debug)]
pub struct BidenseParams {
    /// Randomly anchored attempts before the deterministic sweep.
    pub trials: u64,
    /// Highest-degree anchors tried by the deterministic sweep.
    pub sweep: usize,
    pub seed: u64,
}

impl BidenseParams {
    pub fn new(seed: u64) -> Self {
        BidenseParams {
            trials: DEFAULT_RETRIES as u64,
            sweep: 32,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum Bidense {
    Found { w1: Vec<usize>, w2: Vec<usize> },
    /// Nothing found within the attempts made; not a proof of absence.
    NotFound { attempts: u64 },
}

/// Disjoint, both of size at least `z`, every `W1` vertex adjacent to at
/// least `(1 - 2 eps)|W2|` vertices of `W2`.
pub fn is_bidense_pair(g: &Graph, w1: &[usize], w2: &[usize], z: usize, eps: &Rational) -> bool {
    let s1 = VertexSet::from_iter(g.n(), w1.iter().copied());
    let s2 = VertexSet::from_iter(g.n(), w2.iter().copied());
    if s1.len() != w1.len() || s2.len() != w2.len() || s1.len() < z || s2.len() < z || !s1.is_disjoint(&s2) {
        return false;
    }
    let need = (Rational::one() - uint(2) * eps) * uint(s2.len() as u128);
    s1.iter().all(|v| uint(g.neighbors(v).intersection_len(&s2) as u128) >= need)
}

/// Grows a pair from the anchor's common neighbourhood `b2`: vertices with
/// at least `(1 - eps)|B2|` neighbours in `B2` form `B1`; while `B1` is too
/// small, the vertex of `B2` missed most by the best candidates is dropped.
fn refine(g: &Graph, mut b2: VertexSet, z: usize, eps: &Rational) -> Option<(Vec<usize>, Vec<usize>)> {
    let keep = Rational::one() - eps;
    while b2.len() >= z {
        let mut deg: Vec<(usize, usize)> = (0..g.n())
            .map(|v| (g.neighbors(v).intersection_len(&b2), v))
            .collect();
        deg.sort_by_key(|&(dv, v)| (std::cmp::Reverse(dv), v));
        let bound = &keep * uint(b2.len() as u128);
        let b1: Vec<usize> = deg
            .iter()
            .take_while(|&&(dv, _)| uint(dv as u128) >= bound)
            .map(|&(_, v)| v)
            .collect();
        if b1.len() >= z {
            let w1: Vec<usize> = b1[..z].to_vec();
            let s1 = VertexSet::from_iter(g.n(), w1.iter().copied());
            let w2 = b2.difference(&s1).to_vec();
            if is_bidense_pair(g, &w1, &w2, z, eps) {
                return Some((w1, w2));
            }
        }
        let top: Vec<usize> = deg.iter().take(2 * z).map(|&(_, v)| v).collect();
        let top_set = VertexSet::from_iter(g.n(), top.iter().copied());
        let worst = b2
            .iter()
            .max_by_key(|&u| (top.len() - g.neighbors(u).intersection_len(&top_set), std::cmp::Reverse(u)))?;
        b2.remove(worst);
    }
    None
}

/// Searches for a bi-dense pair `(W1, W2)`; see [`is_bidense_pair`].
pub fn bidense_search(g: &Graph, z: usize, eps: &Rational, params: &BidenseParams) -> Result<Bidense> {
    if z == 0 {
        return Err(Error::DegenerateInput("z must be positive".into()));
    }
    if *eps <= Rational::zero() || *eps >= rat(1, 2) {
        return Err(Error::DegenerateInput(format!(
            "epsilon must lie in (0, 1/2), got {}",
            format_rational(eps)
        )));
    }
    if g.n() < 2 * z {
        return Ok(Bidense::NotFound { attempts: 0 });
    }
    let vertices: Vec<usize> = (0..g.n()).collect();
    let mut rng = rng_from_seed(params.seed);
    let mut attempts = 0;
    for i in 0..params.trials {
        attempts += 1;
        let s = 1 + (i % 3) as usize;
        let anchor: Vec<usize> = vertices.choose_multiple(&mut rng, s).copied().collect();
        if let Some((w1, w2)) = refine(g, g.common_neighborhood_of(&anchor), z, eps) {
            return Ok(Bidense::Found { w1, w2 });
        }
    }
    let mut by_degree = vertices;
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for &v in by_degree.iter().take(params.sweep) {
        attempts += 1;
        if let Some((w1, w2)) = refine(g, g.neighbors(v).clone(), z, eps) {
            return Ok(Bidense::Found { w1, w2 });
        }
    }
    Ok(Bidense::NotFound { attempts })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum ErdosHajnal {
    IndependentSet { vertices: Vec<usize> },
    Biclique { left: Vec<usize>, right: Vec<usize> },
}

impl ErdosHajnal {
    /// Independence or complete bipartiteness, checked against `g`.
    pub fn is_valid(&self, g: &Graph, t: usize) -> bool {
        match self {
            ErdosHajnal::IndependentSet { vertices } => {
                let s = VertexSet::from_iter(g.n(), vertices.iter().copied());
                s.len() == t && vertices.len() == t && g.is_independent(&s)
            }
            ErdosHajnal::Biclique { left, right } => {
                let l = VertexSet::from_iter(g.n(), left.iter().copied());
                let r = VertexSet::from_iter(g.n(), right.iter().copied());
                l.len() == t
                    && r.len() == t
                    && left.len() == t
                    && right.len() == t
                    && l.is_disjoint(&r)
                    && left.iter().all(|&u| r.is_subset(g.neighbors(u)))
            }
        }
    }
}

/// An independent set of size `t`, or else `K_{t,t}` from a bi-dense pair
/// with `eps = 1/(4t)` and `z = 2t`.
pub fn erdos_hajnal_driver(
    g: &Graph,
    t: usize,
    budget: SearchBudget,
    params: &BidenseParams,
) -> Result<ErdosHajnal> {
    if t == 0 {
        return Err(Error::DegenerateInput("t must be positive".into()));
    }
    if let Some(s) = find_clique_of_size(&g.complement(), &g.vertex_set(), t, budget)? {
        let out = ErdosHajnal::IndependentSet { vertices: s.to_vec() };
        if !out.is_valid(g, t) {
            return Err(Error::InvalidEmbedding("independent set failed its check".into()));
        }
        return Ok(out);
    }
    let eps = rat(1, 4 * t as i64);
    match bidense_search(g, 2 * t, &eps, params)? {
        Bidense::Found { w1, w2 } => {
            let left: Vec<usize> = w1[..t].to_vec();
            let mut common = g.common_neighborhood_of(&left);
            common.intersect_with(&VertexSet::from_iter(g.n(), w2.iter().copied()));
            let right: Vec<usize> = common.iter().take(t).collect();
            let out = ErdosHajnal::Biclique { left, right };
            if !out.is_valid(g, t) {
                return Err(Error::InvalidEmbedding(format!(
                    "bi-dense pair left only {} common neighbours",
                    common.len()
                )));
            }
            Ok(out)
        }
        Bidense::NotFound { attempts } => Err(Error::WitnessNotFound {
            trials: attempts,
            detail: format!("no independent set of size {t} and no bi-dense pair with z = {}", 2 * t),
        }),
    }
}

/// `X` a largest clique in `W1`, `Y` a largest clique among the vertices of
/// `W2` adjacent to all of `X`; `X ∪ Y` is a clique.
pub fn clique_or_independent_step(
    g: &Graph,
    w1: &[usize],
    w2: &[usize],
    budget: SearchBudget,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let s1 = VertexSet::from_iter(g.n(), w1.iter().copied());
    let s2 = VertexSet::from_iter(g.n(), w2.iter().copied());
    if !s1.is_disjoint(&s2) {
        return Err(Error::DegenerateInput("W1 and W2 overlap".into()));
    }
    let x = max_clique_within(g, &s1, budget)?;
    let mut within = g.common_neighborhood(&x);
    within.intersect_with(&s2);
    let y = max_clique_within(g, &within, budget)?;
    if !g.is_clique(&x.union(&y)) {
        return Err(Error::InvalidEmbedding("X and Y do not form a clique".into()));
    }
    Ok((x.to_vec(), y.to_vec()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertMethod {
    Spectral,
    Sampled,
}

/// Evidence that `|d(A,B) - p| <= lambda / sqrt(|A||B|)` for all `A, B`.
///
/// Spectral certificates are proofs; sampled ones only report the worst
/// deviation seen and carry `flagged = true`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PseudoRandomCertificate {
    #[serde(serialize_with = "rational_string")]
    pub p: Rational,
    pub lambda: f64,
    pub method: CertMethod,
    /// Second eigenvalue magnitude, or the worst sampled deviation.
    pub evidence: f64,
    pub flagged: bool,
}

/// `|d(A,B) - p| sqrt(|A||B|)` with `d` over ordered pairs.
pub fn mixing_deviation(g: &Graph, p: f64, a: &VertexSet, b: &VertexSet) -> f64 {
    let (la, lb) = (a.len() as f64, b.len() as f64);
    if la == 0.0 || lb == 0.0 {
        return 0.0;
    }
    let d = g.ordered_pairs_between(a, b) as f64 / (la * lb);
    (d - p).abs() * (la * lb).sqrt()
}

/// Largest [`mixing_deviation`] over `pairs` random pairs of subsets with
/// uniformly drawn sizes.
pub fn sampled_deviation(g: &Graph, p: f64, pairs: usize, seed: u64) -> f64 {
    let n = g.n();
    if n == 0 {
        return 0.0;
    }
    let vertices: Vec<usize> = (0..n).collect();
    let mut rng = rng_from_seed(seed);
    let mut worst = 0f64;
    for _ in 0..pairs {
        let sa = rng.random_range(1..=n);
        let sb = rng.random_range(1..=n);
        let a = VertexSet::from_iter(n, vertices.choose_multiple(&mut rng, sa).copied());
        let b = VertexSet::from_iter(n, vertices.choose_multiple(&mut rng, sb).copied());
        worst = worst.max(mixing_deviation(g, p, &a, &b));
    }
    worst
}

/// Spectral mode needs a regular graph and sets `p = deg/(N-1)`; `lambda`
/// is `max |mu + p| + p` over the eigenvalues after one copy of the top one
/// is removed, which bounds deviations for overlapping `A, B` as well.
/// Sampled mode sets `p` to the edge density and samples `pairs` pairs.
pub fn certify_pseudorandom(
    g: &Graph,
    method: CertMethod,
    pairs: usize,
    seed: u64,
) -> Result<PseudoRandomCertificate> {
    let n = g.n();
    if n < 2 {
        return Err(Error::DegenerateInput("certificates need at least two vertices".into()));
    }
    match method {
        CertMethod::Spectral => {
            let deg = g.regular_degree().ok_or_else(|| {
                Error::DegenerateInput("spectral certificates need a regular graph".into())
            })?;
            let p = rat(deg as i64, n as i64 - 1);
            let pf = to_f64(&p);
            let adj = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
            let mut eig: Vec<f64> = SymmetricEigen::new(adj).eigenvalues.iter().copied().collect();
            eig.sort_by(|a, b| b.total_cmp(a));
            let rest = &eig[1..];
            let second = rest.iter().fold(0f64, |acc, &mu| acc.max(mu.abs()));
            let shifted = rest.iter().fold(0f64, |acc, &mu| acc.max((mu + pf).abs()));
            Ok(PseudoRandomCertificate {
                p,
                lambda: shifted + pf,
                method,
                evidence: second,
                flagged: false,
            })
        }
        CertMethod::Sampled => {
            let p = rat(2 * g.m() as i64, (n * (n - 1)) as i64);
            let worst = sampled_deviation(g, to_f64(&p), pairs, seed);
            Ok(PseudoRandomCertificate {
                p,
                lambda: worst,
                method,
                evidence: worst,
                flagged: true,
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct InducedRamseyParams {
    pub m: usize,
    /// Sample size for dependent random choice; defaults to `4n`.
    pub t: Option<usize>,
    pub seed: u64,
    pub rigor: Rigor,
    pub trials: u64,
    pub enum_budget: u64,
    pub search_nodes: u64,
}

impl InducedRamseyParams {
    pub fn new(m: usize, seed: u64) -> Self {
        InducedRamseyParams {
            m,
            t: None,
            seed,
            rigor: Rigor::Strict,
            trials: DEFAULT_RETRIES as u64,
            enum_budget: DEFAULT_ENUM_BUDGET,
            search_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedStep {
    pub size: usize,
    pub colour: usize,
    pub witness: bool,
    /// Exact count of bad set pairs, when it fit the budget.
    pub bad_pairs: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InducedRamseyEmbedding {
    pub colour: usize,
    pub embedded: Embedded,
    pub chain: Vec<InducedStep>,
}

/// Pattern edges to colour-`colour` edges, non-edges to non-edges of `gamma`.
pub fn check_induced_monochromatic(
    h: &Graph,
    gamma: &Graph,
    coloring: &EdgeColoring,
    colour: usize,
    map: &[usize],
) -> Result<()> {
    check_monochromatic(h, coloring, colour, map)?;
    for u in 0..h.n() {
        for v in u + 1..h.n() {
            if !h.has_edge(u, v) && gamma.has_edge(map[u], map[v]) {
                return Err(Error::InvalidEmbedding(format!(
                    "pattern non-edge {u}-{v} maps to an edge of the host"
                )));
            }
        }
    }
    Ok(())
}

/// Monochromatic induced copy of `h` in a `k`-colouring of the
/// pseudo-random graph `gamma`.
///
/// The chain `B_1 ⊇ … ⊇ B_L`, `L = k(n-2)+2`, takes at each step the
/// densest colour inside `B_i`, splits `B_i` along a large cut of that
/// colour and keeps a dependent-random-choice set. A colour used `n - 1`
/// times selects the levels for the induced embedder, with `G` the colour
/// class and `F` the complement of `gamma`.
pub fn induced_ramsey_driver(
    h: &Graph,
    gamma: &Graph,
    coloring: &EdgeColoring,
    cert: &PseudoRandomCertificate,
    params: &InducedRamseyParams,
) -> Result<InducedRamseyEmbedding> {
    if coloring.host() != gamma {
        return Err(Error::DegenerateInput("the colouring is not a colouring of gamma".into()));
    }
    if cert.p > rat(1, 2) {
        return Err(Error::Precondition(format!(
            "p = {} is above 1/2",
            format_rational(&cert.p)
        )));
    }
    let n = h.n();
    if n < 2 {
        return Err(Error::DegenerateInput("pattern needs at least two vertices".into()));
    }
    let big_n = gamma.n();
    let k = coloring.k();
    let m = params.m;
    let shrink = Rational::one() - rat(3, 2) * &cert.p;
    let x = ceil_u64(&(powi(&shrink, -(n as i64)) * uint(m as u128))) as usize;
    let f = gamma.complement();
    let budget = PairBudget { n, m: m as u64 };
    let steps = k * (n - 2) + 1;

    let mut levels = vec![VertexSet::full(big_n)];
    let mut chain = Vec::new();
    for i in 1..=steps {
        let prev = levels.last().expect("nonempty").clone();
        let c = coloring.densest_within(&prev);
        let class = coloring.class(c);
        let members = prev.to_vec();
        let (q1, q2) = split_host(&class.induced(&members), derive_seed(params.seed, 2 * i as u64))?;
        let part1: Vec<usize> = q1.iter().map(|&v| members[v]).collect();
        let part2: Vec<usize> = q2.iter().map(|&v| members[v]).collect();
        let s1 = VertexSet::from_iter(big_n, part1.iter().copied());
        let s2 = VertexSet::from_iter(big_n, part2.iter().copied());
        let cross = class.cross_edges(&s1, &s2);
        if cross == 0 {
            return Err(Error::hypothesis(
                "densest colour has edges across the split",
                Some(i),
                0,
                "at least 1",
            ));
        }
        let drc = DrcParams {
            a: 1,
            d: n,
            t: params.t.unwrap_or(4 * n).max(1),
            x: x.max(1),
            epsilon: rat(cross as i64, (part1.len() * part2.len()) as i64),
        };
        let (next, witness) = drc_step(
            class,
            &part1,
            &part2,
            &drc,
            params.trials,
            derive_seed(params.seed, 2 * i as u64 + 1),
            params.enum_budget,
            params.rigor,
            i,
        )?;
        let counter = PairCounter {
            g: class,
            f: &f,
            ground: &next,
            measure: &prev,
            n,
            m,
        };
        let bad = match counter.bad_pairs(&[], &[], params.enum_budget) {
            Ok(b) => Some(b),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        if let Some(b) = bad {
            if !budget.allows(0, 0, b) && params.rigor == Rigor::Strict {
                return Err(Error::hypothesis(
                    "bad set pairs below (2n)^-2n C(m,n)^2",
                    Some(i),
                    b,
                    budget.describe(0, 0),
                ));
            }
        }
        chain.push(InducedStep {
            size: next.len(),
            colour: c,
            witness,
            bad_pairs: bad.map(|b| b.to_string()),
        });
        levels.push(next);
    }

    let colours: Vec<usize> = chain.iter().map(|s| s.colour).collect();
    let colour = popular_colour(&colours, k, n - 1).expect("pigeonhole over k(n-2)+1 steps");
    let mut picked = vec![levels[0].clone()];
    for (j, &c) in colours.iter().enumerate() {
        if c == colour && picked.len() < n {
            picked.push(levels[j + 1].clone());
        }
    }
    let nested = NestedFamily::new(picked)?;
    let mut ip = InducedParams::new(m);
    ip.rigor = params.rigor;
    ip.seed = params.seed;
    ip.enum_budget = params.enum_budget;
    ip.search_nodes = params.search_nodes;
    let embedded = embed_induced(h, coloring.class(colour), &f, &nested, &ip)?;
    check_induced_monochromatic(h, gamma, coloring, colour, &embedded.embedding.map)?;
    Ok(InducedRamseyEmbedding {
        colour,
        embedded,
        chain,
    })
}
