//! Deterministic and seeded constructors for the graph families used as
//! patterns and hosts.

use num_traits::ToPrimitive;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{check_probability, format_rational, Rational};
use crate::graph::{BipartiteGraph, Graph};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a stream index so parallel trials get
/// independent, reproducible generators.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finaliser over the combined word
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `d`-dimensional cube: vertices are bit strings, adjacent when they
/// differ in one coordinate.
pub fn hypercube(d: u32) -> Result<Graph> {
    if !(1..=20).contains(&d) {
        return Err(Error::DegenerateInput(format!(
            "hypercube dimension must be in 1..=20, got {d}"
        )));
    }
    let n = 1usize << d;
    let mut g = Graph::empty(n);
    for v in 0..n {
        for b in 0..d {
            let w = v ^ (1 << b);
            if w > v {
                g.add_edge(v, w)?;
            }
        }
    }
    Ok(g)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::DegenerateInput(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Graph {
    Graph::from_fn(n, |u, v| v == u + 1)
}

pub fn star(leaves: usize) -> Graph {
    Graph::from_fn(leaves + 1, |u, _| u == 0)
}

/// `K_{a,b}` with the first `a` vertices on one side.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_fn(a + b, |u, v| u < a && v >= a)
}

/// Bipartite graph with left part `V(h)` and right part `E(h)` (in
/// lexicographic edge order), each edge vertex joined to its two endpoints.
pub fn one_subdivision(h: &Graph) -> Result<BipartiteGraph> {
    if let Some(v) = (0..h.n()).find(|&v| h.degree(v) == 0) {
        return Err(Error::Precondition(format!(
            "one_subdivision needs no isolated vertices, vertex {v} is isolated"
        )));
    }
    let edges = h.edges();
    let mut b = BipartiteGraph::empty(h.n(), edges.len())?;
    for (k, &(u, v)) in edges.iter().enumerate() {
        b.add_edge(u, k)?;
        b.add_edge(v, k)?;
    }
    Ok(b)
}

/// Returns `(num, den)` as machine words for Bernoulli draws.
fn probability_words(p: &Rational) -> Result<(u64, u64)> {
    check_probability("p", p)?;
    let num = p.numer().to_u64();
    let den = p.denom().to_u64();
    match (num, den) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(Error::Unsupported(format!(
            "probability {} has a denominator beyond 64 bits",
            format_rational(p)
        ))),
    }
}

#[inline]
fn bernoulli(rng: &mut ChaCha8Rng, num: u64, den: u64) -> bool {
    if num == 0 {
        false
    } else if num == den {
        true
    } else {
        rng.random_range(0..den) < num
    }
}

/// `G(n, p)`: pairs `u < v` are visited in lexicographic order, each
/// becoming an edge with probability exactly `p`.
pub fn random_graph(n: usize, p: &Rational, seed: u64) -> Result<Graph> {
    let (num, den) = probability_words(p)?;
    let mut rng = rng_from_seed(seed);
    Ok(Graph::from_fn(n, |_, _| bernoulli(&mut rng, num, den)))
}

/// Random bipartite graph with parts of size `n1` and `n2`; pairs are
/// visited left-major.
pub fn random_bipartite(n1: usize, n2: usize, p: &Rational, seed: u64) -> Result<BipartiteGraph> {
    let (num, den) = probability_words(p)?;
    let mut rng = rng_from_seed(seed);
    let mut b = BipartiteGraph::empty(n1, n2)?;
    for i in 0..n1 {
        for j in 0..n2 {
            if bernoulli(&mut rng, num, den) {
                b.add_edge(i, j)?;
            }
        }
    }
    Ok(b)
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= q {
        if q.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Paley graph over the prime field `F_q`, `q ≡ 1 (mod 4)`: `x ~ y` when
/// `x - y` is a nonzero square.
pub fn paley(q: u64) -> Result<Graph> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(Error::Unsupported(format!(
            "Paley graphs are built over prime fields with q = 1 mod 4; {q} is not such a prime"
        )));
    }
    let n = q as usize;
    let mut square = vec![false; n];
    for x in 1..q {
        square[((x * x) % q) as usize] = true;
    }
    Ok(Graph::from_fn(n, |u, v| square[(v - u) % n]))
}

/// Builds vertices `0..n` in order; vertex `i` picks exactly `min(d, i)`
/// distinct earlier neighbours uniformly among those still below degree
/// `max_degree`. Fails if some vertex cannot find enough such neighbours.
pub fn random_d_degenerate(n: usize, d: usize, max_degree: usize, seed: u64) -> Result<Graph> {
    if d == 0 || d >= n {
        return Err(Error::DegenerateInput(format!(
            "random_d_degenerate needs 1 <= d < n, got d = {d}, n = {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::empty(n);
    for i in 1..n {
        let want = d.min(i);
        if want > max_degree {
            return Err(Error::Construction(format!(
                "vertex {i} needs {want} neighbours but the degree cap is {max_degree}"
            )));
        }
        let eligible: Vec<usize> = (0..i).filter(|&u| g.degree(u) < max_degree).collect();
        if eligible.len() < want {
            return Err(Error::Construction(format!(
                "vertex {i} needs {want} earlier neighbours below degree {max_degree}, only {} exist",
                eligible.len()
            )));
        }
        for &u in eligible.choose_multiple(&mut rng, want) {
            g.add_edge(u, i)?;
        }
    }
    Ok(g)
}

/// Bipartite counterpart of [`random_d_degenerate`]: `n1 + n2` vertices are
/// placed in a seeded random order and each picks exactly `min(d, k)` earlier
/// neighbours on the opposite side (`k` = number available below the cap).
pub fn random_bipartite_degenerate(
    n1: usize,
    n2: usize,
    d: usize,
    max_degree: usize,
    seed: u64,
) -> Result<BipartiteGraph> {
    if d == 0 || max_degree < d {
        return Err(Error::DegenerateInput(format!(
            "need 1 <= d <= max_degree, got d = {d}, max_degree = {max_degree}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut b = BipartiteGraph::empty(n1, n2)?;
    let mut order: Vec<(bool, usize)> = (0..n1)
        .map(|i| (true, i))
        .chain((0..n2).map(|j| (false, j)))
        .collect();
    order.shuffle(&mut rng);
    let mut placed_left = Vec::new();
    let mut placed_right = Vec::new();
    let mut deg_left = vec![0usize; n1];
    let mut deg_right = vec![0usize; n2];
    for (is_left, v) in order {
        let (others, deg_other): (&Vec<usize>, &Vec<usize>) = if is_left {
            (&placed_right, &deg_right)
        } else {
            (&placed_left, &deg_left)
        };
        let eligible: Vec<usize> = others
            .iter()
            .copied()
            .filter(|&w| deg_other[w] < max_degree)
            .collect();
        let want = d.min(eligible.len());
        let picks: Vec<usize> = eligible.choose_multiple(&mut rng, want).copied().collect();
        for w in picks {
            if is_left {
                b.add_edge(v, w)?;
                deg_left[v] += 1;
                deg_right[w] += 1;
            } else {
                b.add_edge(w, v)?;
                deg_right[v] += 1;
                deg_left[w] += 1;
            }
        }
        if is_left {
            placed_left.push(v);
        } else {
            placed_right.push(v);
        }
    }
    Ok(b)
}

/// Parses short family names: `k5`, `c4`, `p3` (path on 3 vertices), `e4`
/// (edgeless), `s3` (star with 3 leaves), `q3` (cube), `k2,3`.
pub fn named(spec: &str) -> Result<Graph> {
    let s = spec.trim().to_ascii_lowercase();
    let bad = || Error::DegenerateInput(format!("unknown graph name {spec:?}"));
    let (head, rest) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
    if head == "k" {
        if let Some((a, b)) = rest.split_once(',') {
            let a: usize = a.parse().map_err(|_| bad())?;
            let b: usize = b.parse().map_err(|_| bad())?;
            return Ok(complete_bipartite(a, b));
        }
    }
    let k: usize = rest.parse().map_err(|_| bad())?;
    match head {
        "k" => Ok(Graph::complete(k)),
        "c" => cycle(k),
        "p" => Ok(path(k)),
        "e" => Ok(Graph::empty(k)),
        "s" => Ok(star(k)),
        "q" => hypercube(k as u32),
        _ => Err(bad()),
    }
}
