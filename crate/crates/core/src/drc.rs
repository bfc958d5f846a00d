//! Dependent random choice: sample a multiset `T` of left vertices, take
//! `A = N(T)` on the right, and count the `d`-subsets of `A` whose common
//! neighbourhood is smaller than `x`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binom, binom_rat, check_unit_interval, format_rational, powi, uint, Rational};
use crate::generators::{derive_seed, rng_from_seed};
use crate::graph::{BipartiteGraph, Graph, Side};
use crate::par;
use crate::vertex_set::VertexSet;

/// Default cap on the number of subsets any exhaustive count may visit.
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

/// Parameters of one dependent-random-choice round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrcParams {
    /// Moment exponent.
    pub a: u32,
    /// Size of the subsets whose common neighbourhoods are tracked.
    pub d: usize,
    /// Number of sampled vertices (with repetition).
    pub t: usize,
    /// Common-neighbourhood threshold.
    pub x: usize,
    /// Assumed edge density, relative to `N²`.
    pub epsilon: Rational,
}

impl DrcParams {
    pub fn validate(&self) -> Result<()> {
        if self.a == 0 || self.d == 0 || self.t == 0 || self.x == 0 {
            return Err(Error::DegenerateInput(format!(
                "a, d, t, x must be positive, got a={} d={} t={} x={}",
                self.a, self.d, self.t, self.x
            )));
        }
        check_unit_interval("epsilon", &self.epsilon)
    }
}

/// A sampled `T` together with everything needed to check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrcOutcome {
    /// The sampled multiset of left vertices, in draw order.
    pub sample: Vec<usize>,
    /// Common neighbourhood of the sample's support, a subset of the right part.
    pub a_set: VertexSet,
    /// Number of `d`-subsets of `A` with fewer than `x` common neighbours.
    pub bad_count: u128,
    /// `ε^t N`; the size requirement is `|A| ≥ 2^{-1/a} · size_floor`.
    pub size_floor: Rational,
    /// `2 ε^{-ta} (x/N)^t (|A|/N)^a C(N, d)`.
    pub bad_bound: Rational,
    pub a: u32,
}

impl DrcOutcome {
    /// `|A| ≥ 2^{-1/a} ε^t N`, decided exactly as `2 |A|^a ≥ (ε^t N)^a`.
    pub fn meets_size_bound(&self) -> bool {
        let lhs = uint(2) * powi(&uint(self.a_set.len() as u128), self.a as i64);
        lhs >= powi(&self.size_floor, self.a as i64)
    }

    pub fn meets_bad_bound(&self) -> bool {
        uint(self.bad_count) <= self.bad_bound
    }

    pub fn is_witness(&self) -> bool {
        self.meets_size_bound() && self.meets_bad_bound()
    }

    /// `2^{-1/a} ε^t N` as a float, for reporting only.
    pub fn size_bound_f64(&self) -> f64 {
        2f64.powf(-1.0 / self.a as f64) * self.size_floor.to_f64().unwrap_or(f64::NAN)
    }

    pub fn a_len(&self) -> usize {
        self.a_set.len()
    }
}

/// Sampled estimate of a bad-subset count; never mistaken for an exact one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BadEstimate {
    pub estimate: f64,
    pub samples: u64,
    pub bad_hits: u64,
    pub total_subsets: String,
}

fn check_host(g: &BipartiteGraph, epsilon: &Rational) -> Result<usize> {
    if g.n1() != g.n2() {
        return Err(Error::DegenerateInput(format!(
            "dependent random choice needs equal parts, got {} and {}",
            g.n1(),
            g.n2()
        )));
    }
    let n = g.n1();
    let need = epsilon * uint((n * n) as u128);
    if uint(g.edge_count() as u128) < need {
        return Err(Error::Precondition(format!(
            "host has {} edges, fewer than epsilon * N^2 = {}",
            g.edge_count(),
            format_rational(&need)
        )));
    }
    Ok(n)
}

/// `2 ε^{-ta} (x/N)^t (|A|/N)^a C(N, d)`.
pub fn bad_bound(params: &DrcParams, n: usize, a_len: usize) -> Rational {
    let nn = uint(n as u128);
    let ta = (params.t as i64) * params.a as i64;
    uint(2)
        * powi(&params.epsilon, -ta)
        * powi(&(uint(params.x as u128) / &nn), params.t as i64)
        * powi(&(uint(a_len as u128) / &nn), params.a as i64)
        * binom_rat(n as u64, params.d as u64)
}

fn outcome_for(
    g: &BipartiteGraph,
    params: &DrcParams,
    sample: Vec<usize>,
    budget: u64,
) -> Result<DrcOutcome> {
    let n = g.n1();
    let a_set = g.common_neighborhood_of(Side::Left, &sample);
    let bad_count = count_bad_dsets(g, Side::Right, &a_set, params.d, params.x, budget)?;
    let size_floor = powi(&params.epsilon, params.t as i64) * uint(n as u128);
    Ok(DrcOutcome {
        bad_bound: bad_bound(params, n, a_set.len()),
        sample,
        a_set,
        bad_count,
        size_floor,
        a: params.a,
    })
}

/// One round: `t` left vertices drawn uniformly with repetition.
pub fn drc_sample(g: &BipartiteGraph, params: &DrcParams, seed: u64) -> Result<DrcOutcome> {
    drc_sample_with_budget(g, params, seed, DEFAULT_ENUM_BUDGET)
}

pub fn drc_sample_with_budget(
    g: &BipartiteGraph,
    params: &DrcParams,
    seed: u64,
    budget: u64,
) -> Result<DrcOutcome> {
    params.validate()?;
    let n = check_host(g, &params.epsilon)?;
    let mut rng = rng_from_seed(seed);
    let sample: Vec<usize> = (0..params.t).map(|_| rng.random_range(0..n)).collect();
    outcome_for(g, params, sample, budget)
}

/// Draws `t` vertices of `from` uniformly with repetition and returns them
/// with their common neighbourhood inside `to`. No bad-set count is made.
pub fn sample_support<R: Rng + ?Sized>(
    g: &Graph,
    from: &VertexSet,
    to: &VertexSet,
    t: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, VertexSet)> {
    let pool = from.to_vec();
    if pool.is_empty() {
        return Err(Error::DegenerateInput("sampling from an empty vertex set".into()));
    }
    let sample: Vec<usize> = (0..t).map(|_| pool[rng.random_range(0..pool.len())]).collect();
    let mut a = to.clone();
    for &v in &sample {
        a.intersect_with(g.neighbors(v));
    }
    Ok((sample, a))
}

/// `N^{-t} Σ_{v ∈ V2} |N(v)|^t`, the expected size of `A`.
pub fn drc_expectation_exact(g: &BipartiteGraph, t: usize) -> Result<Rational> {
    if g.n1() != g.n2() {
        return Err(Error::DegenerateInput(format!(
            "expectation needs equal parts, got {} and {}",
            g.n1(),
            g.n2()
        )));
    }
    let n = BigInt::from(g.n1());
    let sum: BigInt = (0..g.n2())
        .map(|v| num_traits::pow(BigInt::from(g.neighbors(Side::Right, v).len()), t))
        .sum();
    Ok(Rational::new(sum, num_traits::pow(n, t)))
}

/// Where a witness came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessSource {
    Sampled { trial: u64 },
    Exhaustive,
}

/// Samples up to `max_trials` rounds (trial `i` uses a seed derived from
/// `seed` and `i`; the lowest successful trial wins), then falls back to an
/// exhaustive scan of all sample supports when that fits the budget.
pub fn drc_find_witness(
    g: &BipartiteGraph,
    params: &DrcParams,
    max_trials: u64,
    seed: u64,
) -> Result<DrcOutcome> {
    drc_find_witness_with_budget(g, params, max_trials, seed, DEFAULT_ENUM_BUDGET)
        .map(|(o, _)| o)
}

pub fn drc_find_witness_with_budget(
    g: &BipartiteGraph,
    params: &DrcParams,
    max_trials: u64,
    seed: u64,
    budget: u64,
) -> Result<(DrcOutcome, WitnessSource)> {
    params.validate()?;
    let n = check_host(g, &params.epsilon)?;
    let hit = par::find_first(max_trials as usize, |i| {
        let mut rng = rng_from_seed(derive_seed(seed, i as u64));
        let sample: Vec<usize> = (0..params.t).map(|_| rng.random_range(0..n)).collect();
        match outcome_for(g, params, sample, budget) {
            Ok(o) if o.is_witness() => Some(Ok(o)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        }
    });
    if let Some((i, res)) = hit {
        return res.map(|o| (o, WitnessSource::Sampled { trial: i as u64 }));
    }

    // Distinct supports of size 1..=t stand in for all N^t multisets.
    let supports: u128 = (1..=params.t.min(n))
        .map(|s| binom(n as u64, s as u64).to_u128().unwrap_or(u128::MAX))
        .fold(0u128, u128::saturating_add);
    let per_support = binom(n as u64, params.d as u64).to_u128().unwrap_or(u128::MAX);
    if supports.saturating_mul(per_support.max(1)) > budget as u128 {
        return Err(Error::WitnessNotFound {
            trials: max_trials,
            detail: format!(
                "exhaustive fallback over {supports} supports exceeds the budget of {budget}"
            ),
        });
    }
    for s in 1..=params.t.min(n) {
        let mut found = None;
        for_each_subset(n, s, |support| {
            if found.is_some() {
                return;
            }
            let mut sample = support.to_vec();
            let last = *sample.last().expect("support is nonempty");
            sample.resize(params.t, last);
            if let Ok(o) = outcome_for(g, params, sample, budget) {
                if o.is_witness() {
                    found = Some(o);
                }
            }
        });
        if let Some(o) = found {
            return Ok((o, WitnessSource::Exhaustive));
        }
    }
    Err(Error::WitnessNotFound {
        trials: max_trials,
        detail: "no sampled or exhaustive choice of T satisfied both bounds".into(),
    })
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check_enum_budget(len: usize, d: usize, budget: u64) -> Result<()> {
    let total = binom(len as u64, d as u64);
    if total > budget.into() {
        return Err(Error::budget(
            format!("enumerating {d}-subsets of a {len}-set"),
            total,
            budget,
        ));
    }
    Ok(())
}

/// Pascal table `c[n][k]` for `n ≤ len`, `k ≤ d`, saturating.
fn pascal(len: usize, d: usize) -> Vec<Vec<u128>> {
    let mut c = vec![vec![0u128; d + 1]; len + 1];
    for n in 0..=len {
        c[n][0] = 1;
        for k in 1..=d.min(n) {
            c[n][k] = c[n - 1][k - 1].saturating_add(if k < n { c[n - 1][k] } else { 0 });
        }
    }
    c
}

/// Counts `d`-subsets of the index set `0..rows.len()` whose rows intersect
/// in fewer than `x` elements. Rows are already restricted to whatever
/// target set the neighbourhoods are measured in.
///
/// The scan is depth-first over lexicographic subsets with a running
/// intersection; once the intersection drops below `x` every completion is
/// bad and is counted in one step. Top-level branches run in parallel.
pub fn count_bad_subsets(rows: &[VertexSet], universe: usize, d: usize, x: usize) -> u128 {
    let len = rows.len();
    if d > len {
        return 0;
    }
    if d == 0 {
        return u128::from(universe < x);
    }
    let c = pascal(len, d);
    par::sum_range(len - d + 1, |first| {
        let mut stack: Vec<VertexSet> = vec![VertexSet::empty(universe); d + 1];
        stack[1] = rows[first].clone();
        count_rec(rows, &c, &mut stack, first + 1, 1, d, x)
    })
}

fn count_rec(
    rows: &[VertexSet],
    c: &[Vec<u128>],
    stack: &mut [VertexSet],
    start: usize,
    k: usize,
    d: usize,
    x: usize,
) -> u128 {
    if stack[k].len() < x {
        return c[rows.len() - start][d - k];
    }
    if k == d {
        return 0;
    }
    let mut total = 0u128;
    for i in start..=rows.len() - (d - k) {
        let (lo, hi) = stack.split_at_mut(k + 1);
        hi[0].assign_intersection(&lo[k], &rows[i]);
        total += count_rec(rows, c, stack, i + 1, k + 1, d, x);
    }
    total
}

/// Lists the bad `d`-subsets (as sorted index vectors into `rows`), failing
/// if there are more than `cap` of them.
pub fn collect_bad_subsets(
    rows: &[VertexSet],
    universe: usize,
    d: usize,
    x: usize,
    cap: u64,
) -> Result<Vec<Vec<usize>>> {
    let count = count_bad_subsets(rows, universe, d, x);
    if count > cap as u128 {
        return Err(Error::budget("listing bad subsets", count, cap));
    }
    let mut out = Vec::with_capacity(count as usize);
    if d == 0 {
        if count == 1 {
            out.push(Vec::new());
        }
        return Ok(out);
    }
    let mut chosen = Vec::with_capacity(d);
    let mut stack: Vec<VertexSet> = vec![VertexSet::full(universe); d + 1];
    collect_rec(rows, &mut stack, &mut chosen, 0, d, x, &mut out);
    Ok(out)
}

fn collect_rec(
    rows: &[VertexSet],
    stack: &mut [VertexSet],
    chosen: &mut Vec<usize>,
    start: usize,
    d: usize,
    x: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let k = chosen.len();
    if k > 0 && stack[k].len() < x {
        let base = chosen.clone();
        for_each_subset(rows.len() - start, d - k, |rest| {
            let mut s = base.clone();
            s.extend(rest.iter().map(|&r| r + start));
            out.push(s);
        });
        return;
    }
    if k == d {
        return;
    }
    for i in start..=rows.len() - (d - k) {
        let (lo, hi) = stack.split_at_mut(k + 1);
        hi[0].assign_intersection(&lo[k], &rows[i]);
        chosen.push(i);
        collect_rec(rows, stack, chosen, i + 1, d, x, out);
        chosen.pop();
    }
}

/// Number of `d`-subsets `S ⊆ a` (vertices of `side`) with `|N(S)| < x`,
/// where `N` is the common neighbourhood on the opposite side.
pub fn count_bad_dsets(
    g: &BipartiteGraph,
    side: Side,
    a: &VertexSet,
    d: usize,
    x: usize,
    budget: u64,
) -> Result<u128> {
    check_enum_budget(a.len(), d, budget)?;
    let rows: Vec<VertexSet> = a.iter().map(|v| g.neighbors(side, v).clone()).collect();
    Ok(count_bad_subsets(&rows, g.part_len(side.other()), d, x))
}

/// Same count inside a plain graph, with neighbourhoods measured in `target`.
pub fn count_bad_dsets_in(
    g: &Graph,
    a: &VertexSet,
    target: &VertexSet,
    d: usize,
    x: usize,
    budget: u64,
) -> Result<u128> {
    check_enum_budget(a.len(), d, budget)?;
    let rows = restricted_rows(g, a, target);
    Ok(count_bad_subsets(&rows, g.n(), d, x))
}

/// Neighbourhood rows of the vertices of `a` (in increasing order), each
/// intersected with `target`.
pub fn restricted_rows(g: &Graph, a: &VertexSet, target: &VertexSet) -> Vec<VertexSet> {
    a.iter().map(|v| g.neighbors(v).intersection(target)).collect()
}

/// Uniformly samples `samples` `d`-subsets of `a` and scales the bad
/// fraction by `C(|a|, d)`. The result is an estimate, not a count.
pub fn estimate_bad_dsets(
    g: &BipartiteGraph,
    side: Side,
    a: &VertexSet,
    d: usize,
    x: usize,
    samples: u64,
    seed: u64,
) -> BadEstimate {
    let verts = a.to_vec();
    let total = binom(verts.len() as u64, d as u64);
    let mut rng = rng_from_seed(seed);
    let mut hits = 0u64;
    if d <= verts.len() && samples > 0 {
        for _ in 0..samples {
            let s: Vec<usize> = verts.choose_multiple(&mut rng, d).copied().collect();
            if g.common_neighborhood_of(side, &s).len() < x {
                hits += 1;
            }
        }
    }
    let frac = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
    BadEstimate {
        estimate: frac * total.to_f64().unwrap_or(f64::INFINITY),
        samples,
        bad_hits: hits,
        total_subsets: total.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::generators::random_bipartite;

    fn brute_bad(g: &BipartiteGraph, a: &VertexSet, d: usize, x: usize) -> u128 {
        let verts = a.to_vec();
        let mut bad = 0;
        for_each_subset(verts.len(), d, |idx| {
            let s: Vec<usize> = idx.iter().map(|&i| verts[i]).collect();
            if g.common_neighborhood_of(Side::Right, &s).len() < x {
                bad += 1;
            }
        });
        bad
    }

    #[test]
    fn subsets_enumerated_in_order() {
        let mut all = Vec::new();
        for_each_subset(4, 2, |s| all.push(s.to_vec()));
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let mut count = 0;
        for_each_subset(5, 0, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn c8_antipodal_pairs() {
        // C_8 with even vertices on the left: left i ~ right i and right i-1 (mod 4)
        let edges: Vec<(usize, usize)> = (0..4).flat_map(|i| [(i, i), (i, (i + 3) % 4)]).collect();
        let g = BipartiteGraph::from_edges(4, 4, &edges).unwrap();
        let a = VertexSet::full(4);
        assert_eq!(count_bad_dsets(&g, Side::Right, &a, 2, 1, 100).unwrap(), 2);
    }

    #[test]
    fn complete_and_empty_hosts() {
        let k = BipartiteGraph::complete(5, 5).unwrap();
        let a = VertexSet::full(5);
        assert_eq!(count_bad_dsets(&k, Side::Right, &a, 3, 5, 100).unwrap(), 0);
        let e = BipartiteGraph::empty(5, 5).unwrap();
        assert_eq!(count_bad_dsets(&e, Side::Right, &a, 3, 1, 100).unwrap(), 10);
        assert!(count_bad_dsets(&e, Side::Right, &a, 3, 1, 5).is_err());
    }

    #[test]
    fn kernel_matches_brute_force() {
        for seed in 0..20 {
            let g = random_bipartite(9, 9, &rat(3, 5), seed).unwrap();
            let a = VertexSet::from_iter(9, (0..9).filter(|v| !(v + seed as usize).is_multiple_of(3)));
            for d in 1..=3 {
                for x in 0..6 {
                    let fast = count_bad_dsets(&g, Side::Right, &a, d, x, 1000).unwrap();
                    assert_eq!(fast, brute_bad(&g, &a, d, x), "seed {seed} d {d} x {x}");
                    let rows: Vec<VertexSet> =
                        a.iter().map(|v| g.neighbors(Side::Right, v).clone()).collect();
                    assert_eq!(
                        collect_bad_subsets(&rows, 9, d, x, 1000).unwrap().len() as u128,
                        fast
                    );
                }
            }
        }
    }

    #[test]
    fn sample_rejects_bad_hosts() {
        let params = DrcParams {
            a: 1,
            d: 1,
            t: 2,
            x: 1,
            epsilon: rat(1, 2),
        };
        let e = BipartiteGraph::empty(4, 4).unwrap();
        assert!(drc_sample(&e, &params, 0).is_err());
        let uneven = BipartiteGraph::complete(3, 4).unwrap();
        assert!(drc_sample(&uneven, &params, 0).is_err());
    }

    #[test]
    fn complete_host_first_sample_wins() {
        let k = BipartiteGraph::complete(4, 4).unwrap();
        let params = DrcParams {
            a: 2,
            d: 2,
            t: 3,
            x: 4,
            epsilon: rat(1, 1),
        };
        let (o, src) = drc_find_witness_with_budget(&k, &params, 5, 1, 1000).unwrap();
        assert_eq!(src, WitnessSource::Sampled { trial: 0 });
        assert_eq!(o.a_set.len(), 4);
        assert_eq!(o.bad_count, 0);
    }

    #[test]
    fn expectation_small_cases() {
        let k = BipartiteGraph::complete(2, 2).unwrap();
        assert_eq!(drc_expectation_exact(&k, 2).unwrap(), rat(2, 1));
        let m = BipartiteGraph::from_edges(3, 3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(drc_expectation_exact(&m, 1).unwrap(), rat(1, 1));
    }
}
