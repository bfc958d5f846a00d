//! Greedy embedding of a sparse hypergraph into a very dense down-closed
//! hypergraph, and the matching exhaustive copy count.
//!
//! The dense hypergraph `F` lives on ground indices `0..N` and is given
//! implicitly by its "nice" `h`-sets: a set is an edge of `F` iff it lies in
//! some nice `h`-set.

use std::collections::HashMap;

use num_bigint::BigUint;
use rand::seq::IndexedRandom;

use crate::drc::count_bad_subsets;
use crate::embed::ledger::{GeometricBudget, GoodnessLedger};
use crate::embed::{Check, Checks, Rigor, Trace, DEFAULT_SEARCH_NODES};
use crate::error::{Error, Result};
use crate::exact::binom;
use crate::generators::rng_from_seed;
use crate::graph::Hypergraph;
use crate::par;
use crate::vertex_set::VertexSet;

/// The nice `h`-sets of a dense hypergraph on `0..ground_len()`.
pub trait NiceFamily: Sync {
    fn ground_len(&self) -> usize;
    fn h(&self) -> usize;
    /// Number of non-nice `h`-sets containing the sorted set `s` (`|s| ≤ h`).
    fn non_nice_containing(&self, s: &[usize]) -> u128;

    /// Whether `s` is an edge of the down-closure.
    fn is_edge(&self, s: &[usize]) -> bool {
        let n = self.ground_len() as u64;
        let k = s.len() as u64;
        let h = self.h() as u64;
        if k > h {
            return false;
        }
        BigUint::from(self.non_nice_containing(s)) < binom(n - k, h - k)
    }
}

/// Every `h`-set is nice except an explicit list.
#[derive(Clone, Debug)]
pub struct ExplicitFamily {
    n: usize,
    h: usize,
    non_nice: Vec<Vec<usize>>,
}

impl ExplicitFamily {
    pub fn new(n: usize, h: usize, non_nice: Vec<Vec<usize>>) -> Result<Self> {
        let mut norm = Vec::with_capacity(non_nice.len());
        for mut s in non_nice {
            s.sort_unstable();
            s.dedup();
            if s.len() != h || s.iter().any(|&v| v >= n) {
                return Err(Error::DegenerateInput(format!(
                    "non-nice set {s:?} is not an {h}-subset of 0..{n}"
                )));
            }
            norm.push(s);
        }
        norm.sort();
        norm.dedup();
        Ok(ExplicitFamily { n, h, non_nice: norm })
    }

    pub fn non_nice(&self) -> &[Vec<usize>] {
        &self.non_nice
    }
}

impl NiceFamily for ExplicitFamily {
    fn ground_len(&self) -> usize {
        self.n
    }

    fn h(&self) -> usize {
        self.h
    }

    fn non_nice_containing(&self, s: &[usize]) -> u128 {
        self.non_nice
            .iter()
            .filter(|e| s.iter().all(|v| e.binary_search(v).is_ok()))
            .count() as u128
    }
}

/// An `h`-set is nice iff the rows of its members meet in at least `x`
/// elements (common neighbourhood size in some target set).
#[derive(Clone, Debug)]
pub struct NeighbourhoodFamily {
    rows: Vec<VertexSet>,
    h: usize,
    x: usize,
}

impl NeighbourhoodFamily {
    pub fn new(rows: Vec<VertexSet>, h: usize, x: usize) -> Result<Self> {
        if h == 0 || rows.iter().any(|r| r.universe() != rows[0].universe()) {
            return Err(Error::DegenerateInput(
                "neighbourhood family needs h >= 1 and rows over one universe".into(),
            ));
        }
        Ok(NeighbourhoodFamily { rows, h, x })
    }
}

impl NiceFamily for NeighbourhoodFamily {
    fn ground_len(&self) -> usize {
        self.rows.len()
    }

    fn h(&self) -> usize {
        self.h
    }

    fn non_nice_containing(&self, s: &[usize]) -> u128 {
        let universe = self.rows.first().map_or(0, VertexSet::universe);
        let mut base = VertexSet::full(universe);
        for &v in s {
            base.intersect_with(&self.rows[v]);
        }
        if s.len() == self.h {
            return u128::from(base.len() < self.x);
        }
        let rest: Vec<VertexSet> = (0..self.rows.len())
            .filter(|v| !s.contains(v))
            .map(|v| self.rows[v].intersection(&base))
            .collect();
        count_bad_subsets(&rest, universe, self.h - s.len(), self.x)
    }
}

/// Result of the greedy: the map into ground indices plus evidence.
#[derive(Clone, Debug)]
pub struct HypergraphEmbedding {
    /// Pattern vertex → ground index.
    pub map: Vec<usize>,
    pub checks: Vec<Check>,
    pub trace: Trace,
    pub fallback: bool,
}

impl HypergraphEmbedding {
    pub fn certified(&self) -> bool {
        !self.fallback && self.checks.iter().all(|c| c.holds)
    }
}

/// Options for [`embed_hypergraph_greedy`].
#[derive(Clone, Debug)]
pub struct GreedyOptions {
    /// Degree parameter `d` of the goodness budgets; defaults to the
    /// pattern's maximum degree (at least 1).
    pub degree: Option<usize>,
    /// Pick uniformly among admissible vertices instead of the lowest index.
    pub shuffle_seed: Option<u64>,
    pub rigor: Rigor,
    pub search_nodes: u64,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions {
            degree: None,
            shuffle_seed: None,
            rigor: Rigor::BestEffort,
            search_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

struct Goodness<'a> {
    family: &'a dyn NiceFamily,
    budget: GeometricBudget,
    ledger: GoodnessLedger<Vec<usize>>,
}

impl Goodness<'_> {
    fn fresh(&self, s: &[usize]) -> bool {
        self.budget.allows(s.len(), self.family.non_nice_containing(s))
    }

    fn is_good(&mut self, s: &[usize]) -> Result<bool> {
        let (family, budget) = (self.family, &self.budget);
        self.ledger
            .verdict(&s.to_vec(), || Ok(budget.allows(s.len(), family.non_nice_containing(s))))
    }
}

/// Greedily embeds `hyp` into the down-closure of `family`, keeping every
/// partial edge image good. Returns a map whose edge images are all edges of
/// the down-closure (checked before returning).
pub fn embed_hypergraph_greedy(
    hyp: &Hypergraph,
    family: &dyn NiceFamily,
    opts: &GreedyOptions,
) -> Result<HypergraphEmbedding> {
    let n = hyp.n();
    let big_n = family.ground_len();
    let h = family.h();
    if hyp.h() > h {
        return Err(Error::DegenerateInput(format!(
            "pattern edges have size up to {}, the family only {h}",
            hyp.h()
        )));
    }
    if n > big_n {
        return Err(Error::Precondition(format!(
            "pattern has {n} vertices, ground set only {big_n}"
        )));
    }
    let d = opts.degree.unwrap_or(hyp.max_degree()).max(1);
    if d < hyp.max_degree() {
        return Err(Error::DegenerateInput(format!(
            "degree parameter {d} is below the pattern's maximum degree {}",
            hyp.max_degree()
        )));
    }
    let mut checks = Checks::new(opts.rigor);
    checks.precondition(
        "ground size at least 4n",
        big_n >= 4 * n,
        format!("N = {big_n}, 4n = {}", 4 * n),
    )?;
    let mut good = Goodness {
        family,
        budget: GeometricBudget {
            base: 4 * d as u64,
            top: big_n as u64,
            size: h,
        },
        ledger: GoodnessLedger::new(),
    };
    let total_bad = family.non_nice_containing(&[]);
    let dense = good.budget.allows(0, total_bad);
    checks.hypothesis(
        "non-nice h-sets below (4d)^-h C(N,h)",
        dense,
        None,
        total_bad,
        good.budget.describe(0),
    )?;

    let mut rng = opts.shuffle_seed.map(rng_from_seed);
    let mut map: Vec<Option<usize>> = vec![None; n];
    let mut used = VertexSet::empty(big_n);
    let mut trace = Trace::default();
    let mut exclusion_ok = true;
    let mut stuck = false;
    for v in 0..n {
        // Images of e ∩ L_{v-1} for the edges e through v, without repeats.
        let mut tracked: Vec<Vec<usize>> = Vec::new();
        for e in hyp.edges().iter().filter(|e| e.contains(&v)) {
            let mut img: Vec<usize> = e
                .iter()
                .filter(|&&u| u < v)
                .map(|&u| map[u].expect("earlier vertex placed"))
                .collect();
            img.sort_unstable();
            if !tracked.contains(&img) {
                tracked.push(img);
            }
        }
        let mut admissible = Vec::new();
        let mut excluded = 0usize;
        for j in 0..big_n {
            if used.contains(j) {
                continue;
            }
            let mut ok = true;
            for t in &tracked {
                let mut s = t.clone();
                let pos = s.binary_search(&j).unwrap_err();
                s.insert(pos, j);
                if !good.is_good(&s)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                admissible.push(j);
            } else {
                excluded += 1;
            }
        }
        if 4 * excluded > big_n {
            exclusion_ok = false;
        }
        trace.excluded.push(excluded);
        trace.choices.push(admissible.len());
        let pick = match (&mut rng, admissible.is_empty()) {
            (_, true) => None,
            (Some(r), false) => admissible.choose(r).copied(),
            (None, false) => admissible.first().copied(),
        };
        match pick {
            Some(j) => {
                map[v] = Some(j);
                used.insert(j);
            }
            None => {
                stuck = true;
                break;
            }
        }
    }
    checks.note(
        "per-step exclusion at most N/4",
        exclusion_ok,
        format!("max excluded {} of N = {big_n}", trace.excluded.iter().max().unwrap_or(&0)),
    );

    let mut fallback = false;
    let map: Vec<usize> = if stuck {
        if opts.rigor == Rigor::Strict {
            return Err(Error::EmbeddingFailed(format!(
                "greedy found no admissible vertex at step {}",
                trace.choices.len()
            )));
        }
        fallback = true;
        search_copy(hyp, family, opts.search_nodes).ok_or_else(|| {
            Error::EmbeddingFailed("greedy stuck and bounded search found no copy".into())
        })?
    } else {
        map.into_iter().map(|x| x.expect("all placed")).collect()
    };
    for e in hyp.edges() {
        let mut img: Vec<usize> = e.iter().map(|&u| map[u]).collect();
        img.sort_unstable();
        if !family.is_edge(&img) {
            return Err(Error::InvalidEmbedding(format!(
                "internal error: edge {e:?} mapped to non-edge {img:?}"
            )));
        }
    }
    if !good.ledger.audit(|s| Ok(good.fresh(s)))?.is_empty() {
        return Err(Error::InvalidEmbedding(
            "internal error: memoized goodness verdict disagrees with recount".into(),
        ));
    }
    Ok(HypergraphEmbedding {
        map,
        checks: checks.into_vec(),
        trace,
        fallback,
    })
}

/// Per-edge lists: for each pattern vertex, the edges whose last vertex it is.
fn closing_edges(hyp: &Hypergraph) -> Vec<Vec<&Vec<usize>>> {
    let mut out = vec![Vec::new(); hyp.n()];
    for e in hyp.edges() {
        out[*e.last().expect("edges are nonempty")].push(e);
    }
    out
}

fn search_copy(hyp: &Hypergraph, family: &dyn NiceFamily, limit: u64) -> Option<Vec<usize>> {
    let closing = closing_edges(hyp);
    let mut memo = HashMap::new();
    let mut f = Vec::with_capacity(hyp.n());
    let mut used = VertexSet::empty(family.ground_len());
    let mut nodes = 0u64;
    let found = search_rec(family, &closing, &mut f, &mut used, &mut memo, &mut nodes, limit);
    found.then_some(f)
}

fn edge_ok(
    family: &dyn NiceFamily,
    e: &[usize],
    f: &[usize],
    memo: &mut HashMap<Vec<usize>, bool>,
) -> bool {
    let mut img: Vec<usize> = e.iter().map(|&u| f[u]).collect();
    img.sort_unstable();
    if let Some(&v) = memo.get(&img) {
        return v;
    }
    let v = family.is_edge(&img);
    memo.insert(img, v);
    v
}

fn search_rec(
    family: &dyn NiceFamily,
    closing: &[Vec<&Vec<usize>>],
    f: &mut Vec<usize>,
    used: &mut VertexSet,
    memo: &mut HashMap<Vec<usize>, bool>,
    nodes: &mut u64,
    limit: u64,
) -> bool {
    let v = f.len();
    if v == closing.len() {
        return true;
    }
    for j in 0..family.ground_len() {
        *nodes += 1;
        if *nodes > limit {
            return false;
        }
        if used.contains(j) {
            continue;
        }
        f.push(j);
        if closing[v].iter().all(|e| edge_ok(family, e, f, memo)) {
            used.insert(j);
            if search_rec(family, closing, f, used, memo, nodes, limit) {
                return true;
            }
            used.remove(j);
        }
        f.pop();
    }
    false
}

/// Exact number of injective maps `V(hyp) → 0..N` sending every edge to an
/// edge of the down-closure. Parallel over the image of vertex 0.
pub fn count_hypergraph_copies(hyp: &Hypergraph, family: &dyn NiceFamily, budget: u64) -> Result<u128> {
    let n = hyp.n();
    let big_n = family.ground_len();
    if n == 0 {
        return Ok(1);
    }
    if n > big_n {
        return Ok(0);
    }
    let falling: u128 = (0..n).map(|i| (big_n - i) as u128).product();
    if falling > budget as u128 {
        return Err(Error::budget("hypergraph copy count", falling, budget));
    }
    let closing = closing_edges(hyp);
    let counts = par::map_range(big_n, |first| {
        let mut memo = HashMap::new();
        let mut f = vec![first];
        if !closing[0].iter().all(|e| edge_ok(family, e, &f, &mut memo)) {
            return 0;
        }
        let mut used = VertexSet::from_iter(big_n, [first]);
        count_rec(family, &closing, &mut f, &mut used, &mut memo)
    });
    Ok(counts.into_iter().sum())
}

fn count_rec(
    family: &dyn NiceFamily,
    closing: &[Vec<&Vec<usize>>],
    f: &mut Vec<usize>,
    used: &mut VertexSet,
    memo: &mut HashMap<Vec<usize>, bool>,
) -> u128 {
    let v = f.len();
    if v == closing.len() {
        return 1;
    }
    let mut total = 0;
    for j in 0..family.ground_len() {
        if used.contains(j) {
            continue;
        }
        f.push(j);
        if closing[v].iter().all(|e| edge_ok(family, e, f, memo)) {
            used.insert(j);
            total += count_rec(family, closing, f, used, memo);
            used.remove(j);
        }
        f.pop();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Hypergraph {
        Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap()
    }

    #[test]
    fn complete_family_counts_falling_factorial() {
        let fam = ExplicitFamily::new(10, 2, vec![]).unwrap();
        let c = count_hypergraph_copies(&path3(), &fam, 1 << 20).unwrap();
        assert_eq!(c, 10 * 9 * 8);
        let single = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        let fam3 = ExplicitFamily::new(6, 3, vec![]).unwrap();
        let e = embed_hypergraph_greedy(&single, &fam3, &GreedyOptions::default()).unwrap();
        assert_eq!(e.map, vec![0, 1, 2]);
    }

    #[test]
    fn one_missing_pair_matches_brute_force() {
        let fam = ExplicitFamily::new(16, 2, vec![vec![3, 7]]).unwrap();
        let mut brute = 0u128;
        for a in 0..16 {
            for b in 0..16 {
                for c in 0..16 {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let bad = |x: usize, y: usize| (x.min(y), x.max(y)) == (3, 7);
                    if !bad(a, b) && !bad(b, c) {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(count_hypergraph_copies(&path3(), &fam, 1 << 20).unwrap(), brute);
        let e = embed_hypergraph_greedy(&path3(), &fam, &GreedyOptions::default()).unwrap();
        assert!(e.certified());
    }

    #[test]
    fn neighbourhood_family_agrees_with_explicit() {
        let rows: Vec<VertexSet> = (0..8)
            .map(|i| VertexSet::from_iter(8, (0..8).filter(|j| (i * 3 + j) % 4 != 0)))
            .collect();
        let fam = NeighbourhoodFamily::new(rows.clone(), 2, 5).unwrap();
        let mut non_nice = Vec::new();
        for a in 0..8 {
            for b in a + 1..8 {
                if rows[a].intersection_len(&rows[b]) < 5 {
                    non_nice.push(vec![a, b]);
                }
            }
        }
        let exp = ExplicitFamily::new(8, 2, non_nice).unwrap();
        for s in [vec![], vec![0], vec![5], vec![1, 2], vec![0, 4]] {
            assert_eq!(fam.non_nice_containing(&s), exp.non_nice_containing(&s), "{s:?}");
        }
    }

    #[test]
    fn strict_mode_reports_sparse_family() {
        let all: Vec<Vec<usize>> = (0..4)
            .flat_map(|a| (a + 1..4).map(move |b| vec![a, b]))
            .collect();
        let fam = ExplicitFamily::new(4, 2, all).unwrap();
        let hyp = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let opts = GreedyOptions {
            rigor: Rigor::Strict,
            ..GreedyOptions::default()
        };
        assert!(embed_hypergraph_greedy(&hyp, &fam, &opts).is_err());
        assert!(embed_hypergraph_greedy(&hyp, &fam, &GreedyOptions::default()).is_err());
    }
}
