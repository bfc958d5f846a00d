//! Brute-force ground truth: labeled copy counting, induced containment,
//! universality, cliques, and exhaustive Ramsey searches.
//!
//! Every search is bounded by a [`SearchBudget`]; running out raises
//! [`Error::BudgetExceeded`] rather than returning a partial answer.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;
use crate::vertex_set::VertexSet;

/// Node and wall-clock limits for backtracking searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_limit: 2_000_000_000,
            time_limit: None,
        }
    }
}

impl SearchBudget {
    pub fn nodes(node_limit: u64) -> Self {
        SearchBudget {
            node_limit,
            time_limit: None,
        }
    }
}

/// Shared node counter; workers flush their local counts in batches.
struct Meter {
    used: AtomicU64,
    limit: u64,
    deadline: Option<Instant>,
    what: &'static str,
}

const FLUSH: u64 = 1 << 12;

impl Meter {
    fn new(budget: SearchBudget, what: &'static str) -> Self {
        Meter {
            used: AtomicU64::new(0),
            limit: budget.node_limit,
            deadline: budget.time_limit.map(|t| Instant::now() + t),
            what,
        }
    }

    fn charge(&self, nodes: u64) -> Result<()> {
        let total = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if total > self.limit {
            return Err(Error::budget(self.what, format!("more than {total} nodes"), self.limit));
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                return Err(Error::budget(
                    self.what,
                    "more time than the ceiling",
                    self.limit,
                ));
            }
        }
        Ok(())
    }
}

struct Local<'m> {
    meter: &'m Meter,
    pending: u64,
}

impl Local<'_> {
    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.pending += 1;
        if self.pending >= FLUSH {
            let n = std::mem::take(&mut self.pending);
            self.meter.charge(n)?;
        }
        Ok(())
    }
}

/// What a labeled copy must preserve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CopyMode {
    /// Pattern edges map to host edges.
    Subgraph,
    /// Additionally, pattern non-edges map to host non-edges.
    Induced,
}

/// Pattern-side plan for backtracking: an embedding order with, for each
/// position, the earlier positions it is adjacent / non-adjacent to.
struct Matcher {
    n: usize,
    order: Vec<usize>,
    back_adj: Vec<Vec<usize>>,
    back_non: Vec<Vec<usize>>,
    induced: bool,
    /// The last two positions are non-adjacent, so they can be counted in
    /// closed form once everything before them is fixed.
    pair_tail: bool,
}

impl Matcher {
    fn new(h: &Graph, mode: CopyMode, first: &[usize]) -> Self {
        let n = h.n();
        let mut placed = vec![false; n];
        let mut order: Vec<usize> = Vec::with_capacity(n);
        for &v in first {
            placed[v] = true;
            order.push(v);
        }
        // A non-adjacent pair saved for the end, when nothing pins the order.
        let mut tail: Option<(usize, usize)> = None;
        if first.is_empty() && n >= 3 {
            let mut best: Option<(usize, (usize, usize))> = None;
            for a in 0..n {
                for b in a + 1..n {
                    if !h.has_edge(a, b) {
                        let score = h.degree(a) + h.degree(b);
                        if best.is_none_or(|(s, _)| score > s) {
                            best = Some((score, (a, b)));
                        }
                    }
                }
            }
            if let Some((_, (a, b))) = best {
                placed[a] = true;
                placed[b] = true;
                tail = Some((a, b));
            }
        }
        let target = n - if tail.is_some() { 2 } else { 0 };
        while order.len() < target {
            let next = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let links = order.iter().filter(|&&u| h.has_edge(u, v)).count();
                    (links, h.degree(v), std::cmp::Reverse(v))
                })
                .expect("an unplaced vertex remains");
            placed[next] = true;
            order.push(next);
        }
        if let Some((a, b)) = tail {
            order.push(a);
            order.push(b);
        }
        let back_adj = (0..n)
            .map(|k| (0..k).filter(|&j| h.has_edge(order[j], order[k])).collect())
            .collect();
        let induced = mode == CopyMode::Induced;
        let back_non = (0..n)
            .map(|k| {
                if induced {
                    (0..k).filter(|&j| !h.has_edge(order[j], order[k])).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Matcher {
            n,
            order,
            back_adj,
            back_non,
            induced,
            pair_tail: tail.is_some(),
        }
    }

    /// Host vertices allowed at position `k` given the images of positions
    /// `< limit` (constraints from later positions are ignored).
    fn candidates(
        &self,
        host: &Graph,
        comp: Option<&Graph>,
        k: usize,
        f: &[usize],
        used: &VertexSet,
        limit: usize,
        out: &mut VertexSet,
    ) {
        out.clone_from(used);
        *out = out.complement();
        for &j in self.back_adj[k].iter().filter(|&&j| j < limit) {
            out.intersect_with(host.neighbors(f[j]));
        }
        if let Some(comp) = comp {
            for &j in self.back_non[k].iter().filter(|&&j| j < limit) {
                out.intersect_with(comp.neighbors(f[j]));
            }
        }
    }

    fn count(&self, host: &Graph, comp: Option<&Graph>, meter: &Meter) -> Result<u128> {
        if self.n == 0 {
            return Ok(1);
        }
        if self.n > host.n() {
            return Ok(0);
        }
        let results = par::map_range(host.n(), |v0| {
            let mut local = Local { meter, pending: 0 };
            let mut f = vec![v0];
            let mut used = VertexSet::from_iter(host.n(), [v0]);
            let r = self.count_rec(host, comp, 1, &mut f, &mut used, &mut local);
            meter.charge(local.pending)?;
            r
        });
        results.into_iter().sum()
    }

    fn count_rec(
        &self,
        host: &Graph,
        comp: Option<&Graph>,
        k: usize,
        f: &mut Vec<usize>,
        used: &mut VertexSet,
        local: &mut Local<'_>,
    ) -> Result<u128> {
        local.tick()?;
        if k == self.n {
            return Ok(1);
        }
        let mut cand = VertexSet::empty(host.n());
        if self.pair_tail && k == self.n - 2 {
            let mut c2 = VertexSet::empty(host.n());
            self.candidates(host, comp, k, f, used, k, &mut cand);
            self.candidates(host, comp, k + 1, f, used, k, &mut c2);
            let (a, b) = (cand.len() as u128, c2.len() as u128);
            let mut total = a * b - cand.intersection_len(&c2) as u128;
            if self.induced {
                for x in cand.iter() {
                    total -= host.neighbors(x).intersection_len(&c2) as u128;
                }
            }
            return Ok(total);
        }
        self.candidates(host, comp, k, f, used, k, &mut cand);
        let mut total = 0u128;
        for v in cand.iter() {
            f.push(v);
            used.insert(v);
            total += self.count_rec(host, comp, k + 1, f, used, local)?;
            used.remove(v);
            f.pop();
        }
        Ok(total)
    }

    /// First completion (in position order) of a partial map whose first
    /// `prefix.len()` positions are fixed.
    fn find(
        &self,
        host: &Graph,
        comp: Option<&Graph>,
        prefix: &[usize],
        meter: &Meter,
    ) -> Result<Option<Vec<usize>>> {
        if self.n > host.n() {
            return Ok(None);
        }
        let mut used = VertexSet::empty(host.n());
        for (k, &v) in prefix.iter().enumerate() {
            if v >= host.n() || !used.insert(v) {
                return Ok(None);
            }
            let mut cand = VertexSet::empty(host.n());
            let mut before = used.clone();
            before.remove(v);
            self.candidates(host, comp, k, prefix, &before, k, &mut cand);
            if !cand.contains(v) {
                return Ok(None);
            }
        }
        let mut local = Local { meter, pending: 0 };
        let mut f = prefix.to_vec();
        let found = self.find_rec(host, comp, prefix.len(), &mut f, &mut used, &mut local)?;
        meter.charge(local.pending)?;
        Ok(found.then(|| {
            let mut map = vec![0; self.n];
            for (k, &v) in f.iter().enumerate() {
                map[self.order[k]] = v;
            }
            map
        }))
    }

    fn find_rec(
        &self,
        host: &Graph,
        comp: Option<&Graph>,
        k: usize,
        f: &mut Vec<usize>,
        used: &mut VertexSet,
        local: &mut Local<'_>,
    ) -> Result<bool> {
        local.tick()?;
        if k == self.n {
            return Ok(true);
        }
        let mut cand = VertexSet::empty(host.n());
        self.candidates(host, comp, k, f, used, k, &mut cand);
        for v in cand.iter() {
            f.push(v);
            used.insert(v);
            if self.find_rec(host, comp, k + 1, f, used, local)? {
                return Ok(true);
            }
            used.remove(v);
            f.pop();
        }
        Ok(false)
    }
}

/// Number of injective maps `V(h) → V(g)` satisfying `mode`.
pub fn count_labeled_copies(h: &Graph, g: &Graph, mode: CopyMode) -> Result<u128> {
    count_labeled_copies_with_budget(h, g, mode, SearchBudget::default())
}

pub fn count_labeled_copies_with_budget(
    h: &Graph,
    g: &Graph,
    mode: CopyMode,
    budget: SearchBudget,
) -> Result<u128> {
    let matcher = Matcher::new(h, mode, &[]);
    let comp = (mode == CopyMode::Induced).then(|| g.complement());
    let meter = Meter::new(budget, "labeled copy count");
    matcher.count(g, comp.as_ref(), &meter)
}

/// Some labeled copy of `h` in `g`, as the map pattern vertex → host vertex.
pub fn find_copy(h: &Graph, g: &Graph, mode: CopyMode, budget: SearchBudget) -> Result<Option<Vec<usize>>> {
    let matcher = Matcher::new(h, mode, &[]);
    let comp = (mode == CopyMode::Induced).then(|| g.complement());
    let meter = Meter::new(budget, "copy search");
    matcher.find(g, comp.as_ref(), &[], &meter)
}

pub fn contains_induced(h: &Graph, g: &Graph) -> Result<bool> {
    contains_induced_with_budget(h, g, SearchBudget::default())
}

pub fn contains_induced_with_budget(h: &Graph, g: &Graph, budget: SearchBudget) -> Result<bool> {
    Ok(find_copy(h, g, CopyMode::Induced, budget)?.is_some())
}

/// Edge bitmask of `g` (n ≤ 11) in lexicographic pair order.
fn edge_mask(g: &Graph) -> u64 {
    let mut mask = 0u64;
    let mut bit = 0;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.has_edge(u, v) {
                mask |= 1 << bit;
            }
            bit += 1;
        }
    }
    mask
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut p, &mut out);
    out
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, p, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, p, out);
}

/// Smallest edge mask over all relabellings; equal iff isomorphic. n ≤ 8.
pub fn canonical_mask(g: &Graph) -> Result<u64> {
    if g.n() > 8 {
        return Err(Error::Unsupported(format!(
            "canonical form is brute force and limited to 8 vertices, got {}",
            g.n()
        )));
    }
    Ok(permutations(g.n())
        .iter()
        .map(|p| edge_mask(&g.permuted(p)))
        .min()
        .unwrap_or(0))
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    if a.n() != b.n() || a.m() != b.m() {
        return Ok(false);
    }
    Ok(canonical_mask(a)? == canonical_mask(b)?)
}

/// One representative of every isomorphism class of graphs on `n ≤ 5` vertices.
pub fn graph_catalog(n: usize) -> Result<Vec<Graph>> {
    if n > 5 {
        return Err(Error::Unsupported(format!(
            "the graph catalog is enumerated only up to 5 vertices, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges)?;
        if seen.insert(canonical_mask(&g)?) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Whether `g` contains every `n`-vertex graph as an induced subgraph.
pub fn universality_check(g: &Graph, n: usize) -> Result<bool> {
    universality_check_with_budget(g, n, SearchBudget::default())
}

pub fn universality_check_with_budget(g: &Graph, n: usize, budget: SearchBudget) -> Result<bool> {
    for h in graph_catalog(n)? {
        if !contains_induced_with_budget(&h, g, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greedy colouring of `p` into independent classes; returns vertices with
/// their colour, in increasing colour order.
fn colour_sort(g: &Graph, p: &VertexSet) -> Vec<(usize, usize)> {
    let mut uncoloured = p.clone();
    let mut out = Vec::with_capacity(p.len());
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(g.neighbors(v));
            uncoloured.remove(v);
            out.push((v, colour));
        }
    }
    out
}

struct CliqueSearch<'a, 'm> {
    g: &'a Graph,
    best: Vec<usize>,
    target: Option<usize>,
    local: Local<'m>,
}

impl CliqueSearch<'_, '_> {
    fn expand(&mut self, r: &mut Vec<usize>, mut p: VertexSet) -> Result<bool> {
        self.local.tick()?;
        let ordered = colour_sort(self.g, &p);
        for &(v, colour) in ordered.iter().rev() {
            if r.len() + colour <= self.best.len() {
                return Ok(false);
            }
            r.push(v);
            let next = p.intersection(self.g.neighbors(v));
            if next.is_empty() {
                if r.len() > self.best.len() {
                    self.best = r.clone();
                    if self.target.is_some_and(|t| self.best.len() >= t) {
                        return Ok(true);
                    }
                }
            } else if self.expand(r, next)? {
                return Ok(true);
            }
            r.pop();
            p.remove(v);
        }
        Ok(false)
    }
}

fn clique_search(g: &Graph, within: &VertexSet, target: Option<usize>, budget: SearchBudget) -> Result<Vec<usize>> {
    let meter = Meter::new(budget, "clique search");
    let mut search = CliqueSearch {
        g,
        best: Vec::new(),
        target,
        local: Local {
            meter: &meter,
            pending: 0,
        },
    };
    if !within.is_empty() {
        search.best = vec![within.first().expect("nonempty")];
        let mut r = Vec::new();
        search.expand(&mut r, within.clone())?;
    }
    meter.charge(search.local.pending)?;
    let mut best = search.best;
    best.sort_unstable();
    Ok(best)
}

/// A maximum clique, by colouring-bounded branch and bound.
pub fn max_clique(g: &Graph) -> Result<VertexSet> {
    max_clique_with_budget(g, SearchBudget::default())
}

pub fn max_clique_with_budget(g: &Graph, budget: SearchBudget) -> Result<VertexSet> {
    max_clique_within(g, &g.vertex_set(), budget)
}

/// A maximum clique among the vertices of `within`.
pub fn max_clique_within(g: &Graph, within: &VertexSet, budget: SearchBudget) -> Result<VertexSet> {
    let best = clique_search(g, within, None, budget)?;
    Ok(VertexSet::from_iter(g.n(), best))
}

pub fn max_independent_set(g: &Graph) -> Result<VertexSet> {
    max_independent_set_with_budget(g, SearchBudget::default())
}

pub fn max_independent_set_with_budget(g: &Graph, budget: SearchBudget) -> Result<VertexSet> {
    max_clique_with_budget(&g.complement(), budget)
}

/// A clique of exactly `k` vertices inside `within`, if one exists.
pub fn find_clique_of_size(
    g: &Graph,
    within: &VertexSet,
    k: usize,
    budget: SearchBudget,
) -> Result<Option<VertexSet>> {
    if k == 0 {
        return Ok(Some(VertexSet::empty(g.n())));
    }
    let best = clique_search(g, within, Some(k), budget)?;
    Ok((best.len() >= k).then(|| VertexSet::from_iter(g.n(), best.into_iter().take(k))))
}

/// Two-colouring of the edges of `K_n`, one bit per pair in lexicographic
/// order (`true` = colour 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairColouring {
    pub n: usize,
    pub colours: Vec<bool>,
}

impl PairColouring {
    pub fn class(&self, colour: bool) -> Graph {
        let mut k = 0;
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.colours[k] == colour {
                    g.add_edge(u, v).expect("pair is valid");
                }
                k += 1;
            }
        }
        g
    }
}

/// For each pattern edge and orientation, a matcher that starts from it.
fn anchored_matchers(h: &Graph) -> Vec<Matcher> {
    h.edges()
        .into_iter()
        .flat_map(|(a, b)| [[a, b], [b, a]])
        .map(|first| Matcher::new(h, CopyMode::Subgraph, &first))
        .collect()
}

struct RamseySearch<'m> {
    n: usize,
    pairs: Vec<(usize, usize)>,
    patterns: [Vec<Matcher>; 2],
    classes: [Graph; 2],
    colours: Vec<bool>,
    meter: &'m Meter,
}

impl RamseySearch<'_> {
    /// Whether the last edge coloured `c` closes a copy of pattern `c`.
    fn closes_copy(&self, c: usize, u: usize, v: usize) -> Result<bool> {
        for m in &self.patterns[c] {
            if m.find(&self.classes[c], None, &[u, v], self.meter)?.is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn extend(&mut self, k: usize) -> Result<bool> {
        self.meter.charge(1)?;
        if k == self.pairs.len() {
            return Ok(true);
        }
        let (u, v) = self.pairs[k];
        let options: &[usize] = if k == 0 && self.colours.len() == 1 {
            &[0]
        } else {
            &[0, 1]
        };
        for &c in options {
            self.classes[c].add_edge(u, v)?;
            self.colours.push(c == 1);
            if !self.closes_copy(c, u, v)? && self.extend(k + 1)? {
                return Ok(true);
            }
            self.colours.pop();
            self.classes[c].remove_edge(u, v);
        }
        Ok(false)
    }
}

/// A colouring of `K_n` with no colour-0 copy of `h1` and no colour-1 copy
/// of `h2`, if one exists.
pub fn avoiding_colouring(
    h1: &Graph,
    h2: &Graph,
    n: usize,
    budget: SearchBudget,
) -> Result<Option<PairColouring>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    if pairs.len() > 28 {
        return Err(Error::Unsupported(format!(
            "exhaustive colouring search is limited to 28 pairs, K_{n} has {}",
            pairs.len()
        )));
    }
    // Any pattern with more vertices than n cannot appear at all.
    if h1.n() > n && h2.n() > n {
        return Ok(Some(PairColouring {
            n,
            colours: vec![false; pairs.len()],
        }));
    }
    let symmetric = are_isomorphic(h1, h2).unwrap_or(false);
    let meter = Meter::new(budget, "Ramsey colouring search");
    let mut search = RamseySearch {
        n,
        pairs,
        patterns: [anchored_matchers(h1), anchored_matchers(h2)],
        classes: [Graph::empty(n), Graph::empty(n)],
        // A sentinel entry marks that the first pair's colour is fixed.
        colours: if symmetric { vec![false] } else { Vec::new() },
        meter: &meter,
    };
    let found = search.extend(0)?;
    if symmetric {
        search.colours.remove(0);
    }
    Ok(found.then_some(PairColouring {
        n: search.n,
        colours: search.colours,
    }))
}

/// The least `n ≤ nmax` such that every two-colouring of `K_n` has a
/// colour-0 `h1` or a colour-1 `h2`; `None` if no such `n ≤ nmax`.
pub fn ramsey_exact(h1: &Graph, h2: &Graph, nmax: usize) -> Result<Option<usize>> {
    ramsey_exact_with_budget(h1, h2, nmax, SearchBudget::default())
}

pub fn ramsey_exact_with_budget(
    h1: &Graph,
    h2: &Graph,
    nmax: usize,
    budget: SearchBudget,
) -> Result<Option<usize>> {
    for n in 1..=nmax {
        if avoiding_colouring(h1, h2, n, budget)?.is_none() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Minimum over all two-colourings of `K_n` of the number of labeled
/// monochromatic copies of `h` (both colours counted).
pub fn min_mono_copies(h: &Graph, n: usize) -> Result<u128> {
    min_mono_copies_with_budget(h, n, SearchBudget::default())
}

pub fn min_mono_copies_with_budget(h: &Graph, n: usize, budget: SearchBudget) -> Result<u128> {
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs > 28 {
        return Err(Error::Unsupported(format!(
            "exhaustive colouring search is limited to 28 pairs, K_{n} has {pairs}"
        )));
    }
    if pairs == 0 {
        return count_labeled_copies(h, &Graph::empty(n), CopyMode::Subgraph).map(|c| 2 * c);
    }
    // Swapping colours preserves the count, so the first pair is fixed.
    let colourings = 1u64 << (pairs - 1);
    if colourings > budget.node_limit {
        return Err(Error::budget("colouring enumeration", colourings, budget.node_limit));
    }
    let matcher = Matcher::new(h, CopyMode::Subgraph, &[]);
    let unlimited = SearchBudget::default();
    let results = par::map_range(colourings as usize, |mask| {
        let colours: Vec<bool> = (0..pairs).map(|i| i > 0 && (mask >> (i - 1)) & 1 == 1).collect();
        let pc = PairColouring { n, colours };
        let meter = Meter::new(unlimited, "monochromatic copy count");
        let red = matcher.count(&pc.class(false), None, &meter)?;
        let blue = matcher.count(&pc.class(true), None, &meter)?;
        Ok(red + blue)
    });
    results
        .into_iter()
        .try_fold(u128::MAX, |acc, r: Result<u128>| Ok(acc.min(r?)))
}
