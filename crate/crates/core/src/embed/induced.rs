//! Embedding a pattern so that its edges land on `G` and its non-edges on
//! `F`, with `G` and `F` edge-disjoint on one vertex set. Taking `F` as the
//! complement of `G` gives induced copies.
//!
//! Vertex `v_j` (1-based) lands in `A_{n-j+1}` of the chain. For each later
//! vertex the greedy tracks the pair (images of its earlier neighbours,
//! images of its earlier non-neighbours) and keeps it good at the level that
//! vertex will use.

use rand::seq::IndexedRandom;

use crate::drc::DEFAULT_ENUM_BUDGET;
use crate::embed::ledger::{GoodnessLedger, PairBudget};
use crate::embed::search::{backtrack, Constraints};
use crate::embed::{finish, same_universe, Checks, Embedded, NestedFamily, Rigor, Trace};
use crate::embed::DEFAULT_SEARCH_NODES;
use crate::error::{Error, Result};
use crate::exact::binom;
use crate::generators::rng_from_seed;
use crate::graph::{Contract, Embedding, Graph};
use crate::par;
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug)]
pub struct InducedParams {
    pub m: usize,
    pub rigor: Rigor,
    /// Subset pairs an exhaustive count may visit.
    pub enum_budget: u64,
    /// Samples for the flagged estimate used when a count is over budget.
    pub samples: u64,
    pub seed: u64,
    pub search_nodes: u64,
}

impl InducedParams {
    pub fn new(m: usize) -> Self {
        InducedParams {
            m,
            rigor: Rigor::Strict,
            enum_budget: DEFAULT_ENUM_BUDGET,
            samples: 20_000,
            seed: 0,
            search_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

/// Pair-goodness data for one level `i`: pairs live in `A_{i+1}`, common
/// neighbourhoods are measured in `A_i`.
pub struct PairCounter<'a> {
    pub g: &'a Graph,
    pub f: &'a Graph,
    pub ground: &'a VertexSet,
    pub measure: &'a VertexSet,
    pub n: usize,
    pub m: usize,
}

impl PairCounter<'_> {
    fn base(&self, u1: &[usize], u2: &[usize]) -> VertexSet {
        let mut base = self.measure.clone();
        for &v in u1 {
            base.intersect_with(self.g.neighbors(v));
        }
        for &v in u2 {
            base.intersect_with(self.f.neighbors(v));
        }
        base
    }

    fn pool(&self, u1: &[usize], u2: &[usize]) -> Vec<usize> {
        self.ground
            .iter()
            .filter(|v| !u1.contains(v) && !u2.contains(v))
            .collect()
    }

    /// Number of completions `(S_1, S_2)` of `(u1, u2)`.
    pub fn completions(&self, u1: &[usize], u2: &[usize]) -> u128 {
        let p = self.pool(u1, u2).len() as u64;
        let (k1, k2) = ((self.n - u1.len()) as u64, (self.n - u2.len()) as u64);
        let total = binom(p, k1) * binom(p.saturating_sub(k1), k2);
        u128::try_from(total).unwrap_or(u128::MAX)
    }

    /// Exact number of bad completions of `(u1, u2)`, refusing when more than
    /// `budget` completions exist.
    pub fn bad_pairs(&self, u1: &[usize], u2: &[usize], budget: u64) -> Result<u128> {
        if u1.len() > self.n || u2.len() > self.n {
            return Err(Error::DegenerateInput("tracked pair larger than n".into()));
        }
        let total = self.completions(u1, u2);
        if total > budget as u128 {
            return Err(Error::budget("counting bad set pairs", total, budget));
        }
        let base = self.base(u1, u2);
        if base.len() < self.m {
            return Ok(total);
        }
        let pool = self.pool(u1, u2);
        let (k1, k2) = (self.n - u1.len(), self.n - u2.len());
        let c = pascal(pool.len());
        let g_rows: Vec<VertexSet> = pool.iter().map(|&v| self.g.neighbors(v).intersection(&base)).collect();
        let f_rows: Vec<VertexSet> = pool.iter().map(|&v| self.f.neighbors(v).intersection(&base)).collect();
        let walk = Walk {
            g_rows: &g_rows,
            f_rows: &f_rows,
            c: &c,
            k1,
            k2,
            m: self.m,
        };
        if k1 == 0 {
            return Ok(walk.second(&base, 0, 0, &[]));
        }
        let p = pool.len();
        if p < k1 {
            return Ok(0);
        }
        Ok(par::sum_range(p - k1 + 1, |first| {
            let cur = g_rows[first].clone();
            let mut chosen = vec![first];
            walk.first(&cur, first + 1, 1, &mut chosen)
        }))
    }

    /// Sampled estimate of the bad completions of `(∅, ∅)`.
    pub fn estimate_empty(&self, samples: u64, seed: u64) -> f64 {
        let pool = self.ground.to_vec();
        if pool.len() < 2 * self.n || samples == 0 {
            return 0.0;
        }
        let mut rng = rng_from_seed(seed);
        let mut hits = 0u64;
        for _ in 0..samples {
            let pick: Vec<usize> = pool.choose_multiple(&mut rng, 2 * self.n).copied().collect();
            if self.base(&pick[..self.n], &pick[self.n..]).len() < self.m {
                hits += 1;
            }
        }
        hits as f64 / samples as f64 * self.completions(&[], &[]) as f64
    }
}

fn pascal(len: usize) -> Vec<Vec<u128>> {
    let mut c = vec![vec![0u128; len + 1]; len + 1];
    for a in 0..=len {
        c[a][0] = 1;
        for b in 1..=a {
            c[a][b] = c[a - 1][b - 1].saturating_add(c[a - 1][b]);
        }
    }
    c
}

struct Walk<'a> {
    g_rows: &'a [VertexSet],
    f_rows: &'a [VertexSet],
    c: &'a [Vec<u128>],
    k1: usize,
    k2: usize,
    m: usize,
}

impl Walk<'_> {
    fn choose(&self, a: usize, b: usize) -> u128 {
        if b > a {
            0
        } else {
            self.c[a][b]
        }
    }

    /// Choosing `S_1 \ U_1` from pool indices `start..`, `j` chosen so far.
    fn first(&self, cur: &VertexSet, start: usize, j: usize, chosen: &mut Vec<usize>) -> u128 {
        let p = self.g_rows.len();
        if cur.len() < self.m {
            return self.choose(p - start, self.k1 - j) * self.choose(p - self.k1, self.k2);
        }
        if j == self.k1 {
            return self.second(cur, 0, 0, chosen);
        }
        let mut total = 0;
        for i in start..=p - (self.k1 - j) {
            let next = cur.intersection(&self.g_rows[i]);
            chosen.push(i);
            total += self.first(&next, i + 1, j + 1, chosen);
            chosen.pop();
        }
        total
    }

    /// Choosing `S_2 \ U_2` among pool indices not in `chosen`; `start`
    /// counts positions in that reduced list.
    fn second(&self, cur: &VertexSet, start: usize, j: usize, chosen: &[usize]) -> u128 {
        let rest: Vec<usize> = (0..self.g_rows.len()).filter(|i| !chosen.contains(i)).collect();
        self.second_in(&rest, cur, start, j)
    }

    fn second_in(&self, rest: &[usize], cur: &VertexSet, start: usize, j: usize) -> u128 {
        if cur.len() < self.m {
            return self.choose(rest.len() - start, self.k2 - j);
        }
        if j == self.k2 {
            return 0;
        }
        let mut total = 0;
        if rest.len() < start + (self.k2 - j) {
            return 0;
        }
        for pos in start..=rest.len() - (self.k2 - j) {
            let next = cur.intersection(&self.f_rows[rest[pos]]);
            total += self.second_in(rest, &next, pos + 1, j + 1);
        }
        total
    }
}

type PairKey = (usize, Vec<usize>, Vec<usize>);

pub fn embed_induced(
    h: &Graph,
    g: &Graph,
    f: &Graph,
    chain: &NestedFamily,
    params: &InducedParams,
) -> Result<Embedded> {
    let n = h.n();
    let m = params.m;
    if g.n() != f.n() {
        return Err(Error::DegenerateInput("G and F have different vertex counts".into()));
    }
    if g.edges().iter().any(|&(u, v)| f.has_edge(u, v)) {
        return Err(Error::DegenerateInput("G and F share an edge".into()));
    }
    if n == 0 {
        return Err(Error::DegenerateInput("pattern has no vertices".into()));
    }
    if chain.depth() != n {
        return Err(Error::DegenerateInput(format!(
            "a pattern on {n} vertices needs a chain of depth {n}, got {}",
            chain.depth()
        )));
    }
    for lvl in chain.levels() {
        same_universe(lvl, g)?;
    }
    let mut checks = Checks::new(params.rigor);
    checks.precondition("m at least 2n", m >= 2 * n, format!("m = {m}, n = {n}"))?;
    checks.precondition(
        "last level has at least m vertices",
        chain.last().len() >= m,
        format!("|A_n| = {}, m = {m}", chain.last().len()),
    )?;
    let budget = PairBudget { n, m: m as u64 };
    let counter = |i: usize| PairCounter {
        g,
        f,
        ground: chain.level(i + 1),
        measure: chain.level(i),
        n,
        m,
    };

    let mut exact = true;
    for i in 1..n {
        let pc = counter(i);
        match pc.bad_pairs(&[], &[], params.enum_budget) {
            Ok(bad) => checks.hypothesis(
                "bad set pairs below (2n)^-2n C(m,n)^2",
                budget.allows(0, 0, bad),
                Some(i),
                bad,
                budget.describe(0, 0),
            )?,
            Err(Error::BudgetExceeded { .. }) => {
                exact = false;
                let est = pc.estimate_empty(params.samples, params.seed.wrapping_add(i as u64));
                checks.note(
                    "bad set pairs (sampled estimate, not a proof)",
                    false,
                    format!("level {i}: estimate {est:.3e}, bound {}", budget.describe(0, 0)),
                );
            }
            Err(e) => return Err(e),
        }
    }
    if !exact && params.rigor == Rigor::Strict {
        return Err(Error::budget(
            "exact pair counts for the hypothesis",
            "more than the enumeration budget",
            params.enum_budget,
        ));
    }

    let target = |j: usize| chain.level(n - j);
    let mut trace = Trace::default();
    let mut map: Option<Vec<usize>> = None;
    if exact {
        map = greedy(h, g, f, chain, params, &counter, &budget, &mut trace)?;
    }
    let cap = |step: usize| (n - step) * m / (2 * n);
    let within = trace.excluded.iter().enumerate().all(|(s, &e)| e <= cap(s + 1));
    checks.note(
        "per-step exclusion at most (n-h) m / 2n",
        within,
        format!("excluded {:?}", trace.excluded),
    );
    let fallback = map.is_none();
    let map = match map {
        Some(mp) => mp,
        None if params.rigor == Rigor::Strict => {
            return Err(Error::EmbeddingFailed(format!(
                "no admissible vertex at step {}",
                trace.choices.len()
            )))
        }
        None => {
            let c = Constraints {
                pattern: h,
                host: g,
                second: Some(f),
                targets: (0..n).map(|j| target(j).clone()).collect(),
            };
            let order: Vec<usize> = (0..n).collect();
            backtrack(&c, &order, params.search_nodes).ok_or_else(|| {
                Error::EmbeddingFailed("greedy unavailable and bounded search found no copy".into())
            })?
        }
    };
    if map.iter().enumerate().any(|(j, &x)| !target(j).contains(x)) {
        return Err(Error::InvalidEmbedding(
            "internal error: a vertex left its chain level".into(),
        ));
    }
    let contract = Contract::InducedPair { second: f };
    finish(h, g, Embedding::new(map, contract.mode()), &contract, checks, trace, fallback)
}

#[allow(clippy::too_many_arguments)]
fn greedy<'a>(
    h: &Graph,
    g: &Graph,
    f: &Graph,
    chain: &NestedFamily,
    params: &InducedParams,
    counter: &dyn Fn(usize) -> PairCounter<'a>,
    budget: &PairBudget,
    trace: &mut Trace,
) -> Result<Option<Vec<usize>>> {
    let n = h.n();
    let mut ledger: GoodnessLedger<PairKey> = GoodnessLedger::new();
    let fresh = |key: &PairKey| -> Result<bool> {
        let bad = counter(key.0).bad_pairs(&key.1, &key.2, params.enum_budget)?;
        Ok(budget.allows(key.1.len(), key.2.len(), bad))
    };
    let mut img: Vec<usize> = Vec::with_capacity(n);
    let mut used = VertexSet::empty(g.n());
    for step in 0..n {
        // 0-based vertex `step` is v_{step+1} and lands in A_{n-step}.
        let mut cand = chain.level(n - step).difference(&used);
        for (u, &x) in img.iter().enumerate() {
            if h.has_edge(u, step) {
                cand.intersect_with(g.neighbors(x));
            } else {
                cand.intersect_with(f.neighbors(x));
            }
        }
        let tracked: Vec<(PairKey, bool)> = (step + 1..n)
            .map(|j| {
                let (mut u1, mut u2) = (Vec::new(), Vec::new());
                for (u, &x) in img.iter().enumerate() {
                    if h.has_edge(u, j) {
                        u1.push(x);
                    } else {
                        u2.push(x);
                    }
                }
                u1.sort_unstable();
                u2.sort_unstable();
                ((n - j, u1, u2), h.has_edge(step, j))
            })
            .collect();
        let mut admissible = None;
        let mut excluded = 0;
        let mut count = 0;
        for c in cand.iter() {
            let mut ok = true;
            for ((level, u1, u2), adjacent) in &tracked {
                let (mut a, mut b) = (u1.clone(), u2.clone());
                let side = if *adjacent { &mut a } else { &mut b };
                let at = side.binary_search(&c).unwrap_or_else(|e| e);
                side.insert(at, c);
                let key = (*level, a, b);
                if !ledger.verdict(&key, || fresh(&key))? {
                    ok = false;
                    break;
                }
            }
            if ok {
                count += 1;
                admissible.get_or_insert(c);
            } else {
                excluded += 1;
            }
        }
        trace.excluded.push(excluded);
        trace.choices.push(count);
        let Some(c) = admissible else {
            return Ok(None);
        };
        img.push(c);
        used.insert(c);
    }
    if !ledger.audit(|k| fresh(k))?.is_empty() {
        return Err(Error::InvalidEmbedding(
            "internal error: memoized pair verdict disagrees with recount".into(),
        ));
    }
    Ok(Some(img))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drc::for_each_subset;
    use crate::exact::rat;
    use crate::generators::{path, random_graph};

    fn brute_bad(pc: &PairCounter<'_>, u1: &[usize], u2: &[usize]) -> u128 {
        let pool = pc.pool(u1, u2);
        let (k1, k2) = (pc.n - u1.len(), pc.n - u2.len());
        let mut bad = 0;
        for_each_subset(pool.len(), k1, |r1| {
            let s1: Vec<usize> = u1.iter().copied().chain(r1.iter().map(|&i| pool[i])).collect();
            let rest: Vec<usize> = (0..pool.len()).filter(|i| !r1.contains(i)).map(|i| pool[i]).collect();
            for_each_subset(rest.len(), k2, |r2| {
                let s2: Vec<usize> = u2.iter().copied().chain(r2.iter().map(|&i| rest[i])).collect();
                if pc.base(&s1, &s2).len() < pc.m {
                    bad += 1;
                }
            });
        });
        bad
    }

    #[test]
    fn pair_count_matches_brute_force() {
        let g = random_graph(14, &rat(1, 2), 7).unwrap();
        let f = g.complement();
        let ground = VertexSet::range(14, 0, 9);
        let measure = VertexSet::full(14);
        for m in [1, 2, 3] {
            let pc = PairCounter { g: &g, f: &f, ground: &ground, measure: &measure, n: 2, m };
            for (u1, u2) in [(vec![], vec![]), (vec![0], vec![]), (vec![1], vec![3]), (vec![], vec![2, 5])] {
                assert_eq!(pc.bad_pairs(&u1, &u2, 1 << 20).unwrap(), brute_bad(&pc, &u1, &u2), "{m} {u1:?} {u2:?}");
            }
        }
    }

    #[test]
    fn single_vertex_lands_in_first_level() {
        let g = Graph::complete(10);
        let f = Graph::empty(10);
        let chain = NestedFamily::new(vec![VertexSet::full(10)]).unwrap();
        let e = embed_induced(&Graph::empty(1), &g, &f, &chain, &InducedParams::new(2)).unwrap();
        assert!(e.certified());
    }

    #[test]
    fn p3_in_random_graph_best_effort() {
        let g = random_graph(32, &rat(1, 2), 11).unwrap();
        let f = g.complement();
        let chain = NestedFamily::halving(32, &VertexSet::full(32), 3).unwrap();
        let mut p = InducedParams::new(6);
        p.rigor = Rigor::BestEffort;
        let h = path(3);
        let e = embed_induced(&h, &g, &f, &chain, &p).unwrap();
        assert!(crate::oracles::contains_induced(&h, &g.induced(&e.embedding.map)).unwrap());
    }
}
