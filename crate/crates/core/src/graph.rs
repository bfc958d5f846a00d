//! Dense graphs, bipartite graphs, hypergraphs and the structural primitives
//! (neighborhoods, densities, orderings, partitions) built on them.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{uint, Rational};
use crate::vertex_set::VertexSet;

/// Simple undirected graph on `0..n` with one bit-row per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<VertexSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            rows: vec![VertexSet::empty(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 0..n {
            g.rows[v] = VertexSet::full(n);
            g.rows[v].remove(v);
        }
        g
    }

    /// Builds a graph from an edge list. Repeated edges collapse; loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds the graph whose edges are the pairs `u < v` with `adj(u, v)`.
    pub fn from_fn(n: usize, mut adj: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if adj(u, v) {
                    g.rows[u].insert(v);
                    g.rows[v].insert(u);
                }
            }
        }
        g
    }

    /// Inserts `{u, v}`; returns whether the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) out of range for {} vertices",
                self.n
            )));
        }
        let fresh = self.rows[u].insert(v);
        self.rows[v].insert(u);
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        self.rows[v].remove(u);
        self.rows[u].remove(v)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.rows[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// The common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Edges as pairs `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n {
            for v in self.rows[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for v in 0..self.n {
            let mut row = self.rows[v].complement();
            row.remove(v);
            g.rows[v] = row;
        }
        g
    }

    /// The subgraph induced by `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        Graph::from_fn(vertices.len(), |i, j| {
            self.has_edge(vertices[i], vertices[j])
        })
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.rows[perm[u]].insert(perm[v]);
            g.rows[perm[v]].insert(perm[u]);
        }
        g
    }

    /// Vertices adjacent to every vertex of `u`; all vertices when `u` is empty.
    pub fn common_neighborhood(&self, u: &VertexSet) -> VertexSet {
        let mut acc = VertexSet::full(self.n);
        for v in u.iter() {
            acc.intersect_with(&self.rows[v]);
        }
        acc
    }

    pub fn common_neighborhood_of(&self, u: &[usize]) -> VertexSet {
        let mut acc = VertexSet::full(self.n);
        for &v in u {
            acc.intersect_with(&self.rows[v]);
        }
        acc
    }

    /// Number of ordered pairs `(a, b)` in `a_set × b_set` that are edges.
    pub fn ordered_pairs_between(&self, a_set: &VertexSet, b_set: &VertexSet) -> u64 {
        a_set
            .iter()
            .map(|a| self.rows[a].intersection_len(b_set) as u64)
            .sum()
    }

    /// Edges with one endpoint in each of two disjoint sets.
    pub fn cross_edges(&self, a_set: &VertexSet, b_set: &VertexSet) -> u64 {
        self.ordered_pairs_between(a_set, b_set)
    }

    /// A proper two-colouring of the vertices, if one exists.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.rows[u].iter() {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return None;
                    }
                }
            }
        }
        let left = (0..self.n).filter(|&v| side[v] == 0).collect();
        let right = (0..self.n).filter(|&v| side[v] == 1).collect();
        Some((left, right))
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| self.rows[v].is_disjoint(set))
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| {
            let mut others = set.clone();
            others.remove(v);
            others.is_subset(&self.rows[v])
        })
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Which side of a bipartite graph a vertex set lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Graph with an explicit bipartition. Left vertices are `0..n1`, right
/// vertices `0..n2`; in the combined numbering right vertex `j` is `n1 + j`.
#[derive(Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n1: usize,
    n2: usize,
    left: Vec<VertexSet>,
    right: Vec<VertexSet>,
}

impl BipartiteGraph {
    pub fn empty(n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidGraph(format!(
                "bipartite parts must be nonempty, got {n1} and {n2}"
            )));
        }
        Ok(BipartiteGraph {
            n1,
            n2,
            left: vec![VertexSet::empty(n2); n1],
            right: vec![VertexSet::empty(n1); n2],
        })
    }

    pub fn complete(n1: usize, n2: usize) -> Result<Self> {
        let mut b = Self::empty(n1, n2)?;
        for i in 0..n1 {
            b.left[i] = VertexSet::full(n2);
        }
        for j in 0..n2 {
            b.right[j] = VertexSet::full(n1);
        }
        Ok(b)
    }

    /// Edges given as `(left, right)` local index pairs.
    pub fn from_edges(n1: usize, n2: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut b = Self::empty(n1, n2)?;
        for &(i, j) in edges {
            b.add_edge(i, j)?;
        }
        Ok(b)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        if i >= self.n1 || j >= self.n2 {
            return Err(Error::InvalidGraph(format!(
                "bipartite edge ({i}, {j}) out of range for parts {} and {}",
                self.n1, self.n2
            )));
        }
        self.right[j].insert(i);
        Ok(self.left[i].insert(j))
    }

    /// The edges of `g` running between `part1` and `part2`, relabelled to
    /// local indices in the given orders. Edges inside a part are dropped.
    pub fn from_cut(g: &Graph, part1: &[usize], part2: &[usize]) -> Result<Self> {
        let mut b = Self::empty(part1.len(), part2.len())?;
        let mut pos2 = vec![usize::MAX; g.n()];
        for (j, &v) in part2.iter().enumerate() {
            pos2[v] = j;
        }
        let p2 = VertexSet::from_iter(g.n(), part2.iter().copied());
        for (i, &u) in part1.iter().enumerate() {
            for w in g.neighbors(u).intersection(&p2).iter() {
                b.add_edge(i, pos2[w])?;
            }
        }
        Ok(b)
    }

    /// Interprets a bipartite `Graph` via its two-colouring. Returns the
    /// bipartite graph together with the vertex lists of both sides, so
    /// left vertex `i` is `left[i]` of the input and right vertex `j` is `right[j]`.
    pub fn from_graph(g: &Graph) -> Result<(Self, Vec<usize>, Vec<usize>)> {
        let (left, right) = g
            .bipartition()
            .ok_or_else(|| Error::InvalidGraph("graph is not bipartite".into()))?;
        let b = Self::from_cut(g, &left, &right)?;
        Ok((b, left, right))
    }

    #[inline]
    pub fn n1(&self) -> usize {
        self.n1
    }

    #[inline]
    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn part_len(&self, side: Side) -> usize {
        match side {
            Side::Left => self.n1,
            Side::Right => self.n2,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.left.iter().map(VertexSet::len).sum()
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n1 && self.left[i].contains(j)
    }

    /// Neighbours (on the opposite side) of vertex `v` of `side`.
    #[inline]
    pub fn neighbors(&self, side: Side, v: usize) -> &VertexSet {
        match side {
            Side::Left => &self.left[v],
            Side::Right => &self.right[v],
        }
    }

    pub fn max_degree(&self) -> usize {
        self.left
            .iter()
            .chain(&self.right)
            .map(VertexSet::len)
            .max()
            .unwrap_or(0)
    }

    /// Common neighbourhood on the opposite side of a set `u` of `side`
    /// vertices; the whole opposite part when `u` is empty.
    pub fn common_neighborhood(&self, side: Side, u: &VertexSet) -> VertexSet {
        let mut acc = VertexSet::full(self.part_len(side.other()));
        for v in u.iter() {
            acc.intersect_with(self.neighbors(side, v));
        }
        acc
    }

    pub fn common_neighborhood_of(&self, side: Side, u: &[usize]) -> VertexSet {
        let mut acc = VertexSet::full(self.part_len(side.other()));
        for &v in u {
            acc.intersect_with(self.neighbors(side, v));
        }
        acc
    }

    /// Swaps the roles of the two sides.
    pub fn flipped(&self) -> BipartiteGraph {
        BipartiteGraph {
            n1: self.n2,
            n2: self.n1,
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// The same graph as a plain `Graph` in the combined numbering.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n());
        for i in 0..self.n1 {
            for j in self.left[i].iter() {
                g.add_edge(i, self.n1 + j).expect("bipartite edge is valid");
            }
        }
        g
    }

    /// Combined-numbering part label: 0 for left vertices, 1 for right.
    pub fn part_labels(&self) -> Vec<usize> {
        (0..self.n()).map(|v| usize::from(v >= self.n1)).collect()
    }
}

impl std::fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let edges: Vec<(usize, usize)> = (0..self.n1)
            .flat_map(|i| self.left[i].iter().map(move |j| (i, j)))
            .collect();
        write!(f, "BipartiteGraph({}+{}, edges={edges:?})", self.n1, self.n2)
    }
}

/// Hypergraph on `0..n` with sorted, duplicate-free edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Normalises each edge (sorted, deduplicated) and drops repeated edges.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut norm: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if e.is_empty() {
                return Err(Error::InvalidGraph("hypergraph edge is empty".into()));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidGraph(format!(
                    "hyperedge vertex {v} out of range for {n} vertices"
                )));
            }
            if !norm.contains(&e) {
                norm.push(e);
            }
        }
        Ok(Hypergraph { n, edges: norm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Largest edge size.
    pub fn h(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    /// Largest number of edges through one vertex.
    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Hypergraph whose edges are the distinct neighbourhoods (inside the
    /// right part) of the left vertices of `h`.
    pub fn of_neighborhoods(h: &BipartiteGraph) -> Result<Self> {
        let edges = (0..h.n1())
            .map(|i| h.neighbors(Side::Left, i).to_vec())
            .filter(|e| !e.is_empty())
            .collect();
        Hypergraph::new(h.n2(), edges)
    }
}

/// How an embedding is to be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingMode {
    Subgraph,
    InducedPair,
    PartRespecting,
}

/// Injective map from pattern vertices to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
    pub mode: EmbeddingMode,
}

impl Embedding {
    pub fn new(map: Vec<usize>, mode: EmbeddingMode) -> Self {
        Embedding { map, mode }
    }

    pub fn image(&self, universe: usize) -> VertexSet {
        VertexSet::from_iter(universe, self.map.iter().copied())
    }
}

/// The extra requirements an embedding must meet beyond edge preservation.
#[derive(Clone, Copy, Debug)]
pub enum Contract<'a> {
    Subgraph,
    /// Every pattern non-edge must land on an edge of `second`.
    InducedPair { second: &'a Graph },
    /// Pattern vertex `v` must land in `host_parts[pattern_part[v]]`.
    PartRespecting {
        pattern_part: &'a [usize],
        host_parts: &'a [VertexSet],
    },
}

impl Contract<'_> {
    pub fn mode(&self) -> EmbeddingMode {
        match self {
            Contract::Subgraph => EmbeddingMode::Subgraph,
            Contract::InducedPair { .. } => EmbeddingMode::InducedPair,
            Contract::PartRespecting { .. } => EmbeddingMode::PartRespecting,
        }
    }
}

/// Checks `f` against `pattern`, `host` and the contract.
///
/// Structural defects of the map itself (wrong length, out-of-range image,
/// repeated image, mode mismatch) are errors; a well-formed map that breaks
/// an adjacency requirement yields `Ok(false)`.
pub fn validate_embedding(
    pattern: &Graph,
    host: &Graph,
    f: &Embedding,
    contract: &Contract<'_>,
) -> Result<bool> {
    if f.mode != contract.mode() {
        return Err(Error::InvalidEmbedding(format!(
            "embedding mode {:?} does not match contract {:?}",
            f.mode,
            contract.mode()
        )));
    }
    if f.map.len() != pattern.n() {
        return Err(Error::InvalidEmbedding(format!(
            "map has {} entries for a pattern with {} vertices",
            f.map.len(),
            pattern.n()
        )));
    }
    let mut seen = VertexSet::empty(host.n());
    for (v, &x) in f.map.iter().enumerate() {
        if x >= host.n() {
            return Err(Error::InvalidEmbedding(format!(
                "vertex {v} mapped to {x}, outside host of {} vertices",
                host.n()
            )));
        }
        if !seen.insert(x) {
            return Err(Error::InvalidEmbedding(format!(
                "host vertex {x} used twice"
            )));
        }
    }
    for (u, v) in pattern.edges() {
        if !host.has_edge(f.map[u], f.map[v]) {
            return Ok(false);
        }
    }
    match contract {
        Contract::Subgraph => Ok(true),
        Contract::InducedPair { second } => {
            if second.n() != host.n() {
                return Err(Error::InvalidEmbedding(
                    "second graph has a different vertex count".into(),
                ));
            }
            for u in 0..pattern.n() {
                for v in u + 1..pattern.n() {
                    if !pattern.has_edge(u, v) && !second.has_edge(f.map[u], f.map[v]) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        Contract::PartRespecting {
            pattern_part,
            host_parts,
        } => {
            if pattern_part.len() != pattern.n() {
                return Err(Error::InvalidEmbedding(
                    "part labels do not cover the pattern".into(),
                ));
            }
            Ok(pattern_part
                .iter()
                .zip(&f.map)
                .all(|(&p, &x)| host_parts.get(p).is_some_and(|s| s.contains(x))))
        }
    }
}

/// `m / C(n, 2)` exactly.
pub fn edge_density(g: &Graph) -> Result<Rational> {
    if g.n() < 2 {
        return Err(Error::DegenerateInput(format!(
            "edge density needs at least 2 vertices, got {}",
            g.n()
        )));
    }
    let pairs = (g.n() as u128) * (g.n() as u128 - 1) / 2;
    Ok(Rational::new(
        (g.m() as u64).into(),
        num_bigint::BigInt::from(pairs),
    ))
}

/// Fraction of ordered pairs in `a × b` that are edges.
pub fn density_between(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<Rational> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::DegenerateInput(
            "density between sets needs both sets nonempty".into(),
        ));
    }
    let e = g.ordered_pairs_between(a, b);
    Ok(uint(e as u128) / uint((a.len() * b.len()) as u128))
}

/// Minimum-degree peeling. Returns the reversed removal order and the
/// degeneracy `d`, so every vertex has at most `d` neighbours before it.
pub fn degeneracy_order(h: &Graph) -> (Vec<usize>, usize) {
    let n = h.n();
    let mut deg: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); maxd + 1];
    for v in (0..n).rev() {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    let mut low = 0;
    while order.len() < n {
        low = low.min(maxd);
        let v = loop {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().expect("bucket is nonempty");
            if !removed[v] && deg[v] == low {
                break v;
            }
        };
        removed[v] = true;
        d = d.max(deg[v]);
        order.push(v);
        for w in h.neighbors(v).iter() {
            if !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
                low = low.min(deg[w]);
            }
        }
    }
    order.reverse();
    (order, d)
}

/// Largest number of earlier neighbours of any vertex in `ordering`.
pub fn max_back_degree(h: &Graph, ordering: &[usize]) -> usize {
    let mut before = VertexSet::empty(h.n());
    let mut best = 0;
    for &v in ordering {
        best = best.max(h.neighbors(v).intersection_len(&before));
        before.insert(v);
    }
    best
}

fn is_permutation(n: usize, ordering: &[usize]) -> bool {
    if ordering.len() != n {
        return false;
    }
    let mut seen = VertexSet::empty(n);
    ordering.iter().all(|&v| v < n && seen.insert(v))
}

/// The smallest `p` for which `ordering` witnesses `p`-arrangeability, or
/// `None` if `ordering` is not a permutation of the vertices.
pub fn arrangeability(h: &Graph, ordering: &[usize]) -> Option<usize> {
    if !is_permutation(h.n(), ordering) {
        return None;
    }
    let mut pos = vec![0; h.n()];
    for (i, &v) in ordering.iter().enumerate() {
        pos[v] = i;
    }
    let mut prefix = VertexSet::empty(h.n());
    let mut worst = 0;
    for (i, &vi) in ordering.iter().enumerate() {
        prefix.insert(vi);
        let mut union = VertexSet::empty(h.n());
        for vj in h.neighbors(vi).iter().filter(|&w| pos[w] > i) {
            union.union_with(&h.neighbors(vj).intersection(&prefix));
        }
        worst = worst.max(union.len());
    }
    Some(worst)
}

/// Whether `ordering` shows that `h` is `p`-arrangeable. A non-permutation
/// ordering is never a witness.
pub fn verify_arrangeable(h: &Graph, ordering: &[usize], p: usize) -> bool {
    arrangeability(h, ordering).is_some_and(|q| q <= p)
}

/// Lower bound on cross edges promised by the averaging argument:
/// `⌈m · ⌊n/2⌋² / C(n, 2)⌉`.
pub fn max_cut_bound(g: &Graph) -> u64 {
    let n = g.n() as u128;
    if n < 2 {
        return 0;
    }
    let half = n / 2;
    let num = g.m() as u128 * half * half;
    let den = n * (n - 1) / 2;
    num.div_ceil(den) as u64
}

/// Expected number of cross edges of a uniformly random completion of a
/// partial equipartition, scaled by `r (r - 1)` (or by 1 when `r < 2`).
fn scaled_expectation(
    cross: i128,
    e1u: i128,
    e2u: i128,
    euu: i128,
    r1: i128,
    r2: i128,
) -> i128 {
    let r = r1 + r2;
    if r == 0 {
        return cross;
    }
    if r == 1 {
        return cross + e1u * r2 + e2u * r1;
    }
    cross * r * (r - 1) + (e1u * r2 + e2u * r1) * (r - 1) + euu * 2 * r1 * r2
}

/// Splits the vertices into sides of sizes `⌈n/2⌉` and `⌊n/2⌋` with at least
/// [`max_cut_bound`] edges across.
///
/// A seeded random vertex order is derandomised with conditional
/// expectations over equipartitions (which already guarantees the average),
/// then improved by a few sweeps of single-pair swaps.
pub fn balanced_max_cut_partition(g: &Graph, seed: u64) -> Result<(VertexSet, VertexSet)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::DegenerateInput(format!(
            "equipartition needs at least 2 vertices, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut s1 = VertexSet::empty(n);
    let mut s2 = VertexSet::empty(n);
    let mut unassigned = VertexSet::full(n);
    let (mut r1, mut r2) = (n.div_ceil(2) as i128, (n / 2) as i128);
    let mut cross: i128 = 0;
    let (mut e1u, mut e2u): (i128, i128) = (0, 0);
    let mut euu = g.m() as i128;

    for &v in &order {
        unassigned.remove(v);
        let row = g.neighbors(v);
        let d1 = row.intersection_len(&s1) as i128;
        let d2 = row.intersection_len(&s2) as i128;
        let du = row.intersection_len(&unassigned) as i128;
        let to_one = (r1 > 0).then(|| {
            scaled_expectation(cross + d2, e1u - d1 + du, e2u - d2, euu - du, r1 - 1, r2)
        });
        let to_two = (r2 > 0).then(|| {
            scaled_expectation(cross + d1, e1u - d1, e2u - d2 + du, euu - du, r1, r2 - 1)
        });
        let pick_one = match (to_one, to_two) {
            (Some(a), Some(b)) => a >= b,
            (Some(_), None) => true,
            _ => false,
        };
        if pick_one {
            s1.insert(v);
            r1 -= 1;
            cross += d2;
            e1u += du - d1;
            e2u -= d2;
        } else {
            s2.insert(v);
            r2 -= 1;
            cross += d1;
            e2u += du - d2;
            e1u -= d1;
        }
        euu -= du;
    }

    swap_improve(g, &mut s1, &mut s2, 3);

    let achieved = g.cross_edges(&s1, &s2);
    let bound = max_cut_bound(g);
    if achieved < bound {
        return Err(Error::Construction(format!(
            "equipartition has {achieved} cross edges, below the guaranteed {bound}"
        )));
    }
    Ok((s1, s2))
}

/// First-improvement swap sweeps; each accepted swap strictly increases the
/// cut, so the loop terminates even without the sweep cap.
fn swap_improve(g: &Graph, s1: &mut VertexSet, s2: &mut VertexSet, sweeps: usize) {
    let n = g.n();
    // gain[v] = (neighbours on own side) - (neighbours on the other side)
    let mut gain: Vec<i64> = (0..n)
        .map(|v| {
            let row = g.neighbors(v);
            let (own, other) = if s1.contains(v) { (&*s1, &*s2) } else { (&*s2, &*s1) };
            row.intersection_len(own) as i64 - row.intersection_len(other) as i64
        })
        .collect();
    for _ in 0..sweeps {
        let mut improved = false;
        let left: Vec<usize> = s1.to_vec();
        for u in left {
            if !s1.contains(u) {
                continue;
            }
            let best = s2
                .iter()
                .map(|w| {
                    let delta = gain[u] + gain[w] + if g.has_edge(u, w) { 2 } else { 0 };
                    (delta, w)
                })
                .max_by_key(|&(delta, w)| (delta, std::cmp::Reverse(w)));
            let Some((delta, w)) = best else { continue };
            if delta <= 0 {
                continue;
            }
            s1.remove(u);
            s2.remove(w);
            s1.insert(w);
            s2.insert(u);
            gain[u] = -gain[u];
            gain[w] = -gain[w];
            if g.has_edge(u, w) {
                gain[u] -= 2;
                gain[w] -= 2;
            }
            for x in g.neighbors(u).iter().filter(|&x| x != w) {
                gain[x] += if s1.contains(x) { -2 } else { 2 };
            }
            for x in g.neighbors(w).iter().filter(|&x| x != u) {
                gain[x] += if s2.contains(x) { -2 } else { 2 };
            }
            improved = true;
        }
        if !improved {
            break;
        }
    }
}

/// Density of a bipartite graph relative to `n1 · n2`.
pub fn bipartite_density(b: &BipartiteGraph) -> Rational {
    uint(b.edge_count() as u128) / uint((b.n1() * b.n2()) as u128)
}

/// `true` when `e(b) >= eps · n1 · n2`.
pub fn meets_bipartite_density(b: &BipartiteGraph, eps: &Rational) -> bool {
    bipartite_density(b) >= *eps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn common_neighborhood_examples() {
        let c5 = cycle(5);
        let u = VertexSet::from_iter(5, [0, 2]);
        assert_eq!(c5.common_neighborhood(&u).to_vec(), vec![1]);
        assert_eq!(c5.common_neighborhood(&VertexSet::empty(5)).len(), 5);
        let k33 = BipartiteGraph::complete(3, 3).unwrap();
        let one = VertexSet::from_iter(3, [1]);
        assert_eq!(k33.common_neighborhood(Side::Left, &one).len(), 3);
        assert_eq!(
            k33.common_neighborhood(Side::Right, &VertexSet::empty(3)).len(),
            3
        );
    }

    #[test]
    fn densities() {
        assert_eq!(edge_density(&Graph::complete(4)).unwrap(), rat(1, 1));
        assert_eq!(edge_density(&Graph::empty(10)).unwrap(), rat(0, 1));
        assert_eq!(edge_density(&cycle(5)).unwrap(), rat(1, 2));
        assert!(edge_density(&Graph::empty(1)).is_err());
        let c4 = cycle(4);
        let a = VertexSet::from_iter(4, [0, 1]);
        let b = VertexSet::from_iter(4, [2, 3]);
        assert_eq!(density_between(&c4, &a, &b).unwrap(), rat(1, 2));
        let single = VertexSet::from_iter(4, [0]);
        assert_eq!(density_between(&c4, &single, &single).unwrap(), rat(0, 1));
        assert!(density_between(&c4, &VertexSet::empty(4), &a).is_err());
    }

    #[test]
    fn self_loops_rejected() {
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(3, &[(1, 3)]).is_err());
    }

    #[test]
    fn degeneracy_examples() {
        let path = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(degeneracy_order(&path).1, 1);
        assert_eq!(degeneracy_order(&cycle(6)).1, 2);
        let (ord, d) = degeneracy_order(&Graph::complete(5));
        assert_eq!(d, 4);
        assert_eq!(max_back_degree(&Graph::complete(5), &ord), 4);
    }

    #[test]
    fn arrangeability_examples() {
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(verify_arrangeable(&path, &[0, 1, 2, 3], 1));
        assert!(!verify_arrangeable(&Graph::complete(4), &[0, 1, 2, 3], 1));
        assert!(verify_arrangeable(&cycle(4), &[0, 1, 2, 3], 2));
        assert!(!verify_arrangeable(&cycle(4), &[0, 1, 2], 2));
    }

    #[test]
    fn embedding_validation() {
        let k2 = Graph::complete(2);
        let k3 = Graph::complete(3);
        let f = Embedding::new(vec![2, 0], EmbeddingMode::Subgraph);
        assert!(validate_embedding(&k2, &k3, &f, &Contract::Subgraph).unwrap());
        assert!(!validate_embedding(&k2, &Graph::empty(3), &f, &Contract::Subgraph).unwrap());
        let dup = Embedding::new(vec![1, 1], EmbeddingMode::Subgraph);
        assert!(validate_embedding(&k2, &k3, &dup, &Contract::Subgraph).is_err());
    }

    #[test]
    fn max_cut_small_cases() {
        let k4 = Graph::complete(4);
        let (a, b) = balanced_max_cut_partition(&k4, 0).unwrap();
        assert_eq!((a.len(), b.len()), (2, 2));
        assert_eq!(k4.cross_edges(&a, &b), 4);
        let matching = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let (a, b) = balanced_max_cut_partition(&matching, 3).unwrap();
        assert!(matching.cross_edges(&a, &b) >= 1);
        let odd = cycle(7);
        let (a, b) = balanced_max_cut_partition(&odd, 1).unwrap();
        assert_eq!((a.len(), b.len()), (4, 3));
        assert!(odd.cross_edges(&a, &b) >= max_cut_bound(&odd));
    }

    #[test]
    fn bipartition_of_even_cycle() {
        let (b, left, right) = BipartiteGraph::from_graph(&cycle(6)).unwrap();
        assert_eq!((left.len(), right.len()), (3, 3));
        assert_eq!(b.edge_count(), 6);
        assert!(BipartiteGraph::from_graph(&cycle(5)).is_err());
    }
}
