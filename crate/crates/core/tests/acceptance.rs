//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Expected values come from checks written here from first principles
//! (codegree sums, direct expectation sums, brute-force closure tests,
//! Goodman's formula, hand-rolled mixing deviations), never from the
//! routines under test. An invalid embedding in the validity sweep aborts
//! the run with a nonzero exit code; every other miss is reported as FAIL.

use std::collections::HashSet;
use std::time::Instant;

use depchoice::drc::drc_expectation_exact;
use depchoice::embed::bipartite::{embed_bipartite_dense, BipartiteParams};
use depchoice::embed::chromatic::{embed_chromatic, ChromaticParams};
use depchoice::embed::degenerate::{embed_arrangeable, embed_degenerate, embed_two_sided, DegenerateParams, TwoSidedParams};
use depchoice::embed::hypergraph::{count_hypergraph_copies, embed_hypergraph_greedy, ExplicitFamily, GreedyOptions};
use depchoice::embed::induced::{embed_induced, InducedParams};
use depchoice::embed::subdivision::{embed_subdivision, SubdivisionParams};
use depchoice::embed::{NestedFamily, Rigor};
use depchoice::exact::{rat, uint, Rational};
use depchoice::generators::{cycle, paley, random_bipartite, random_graph, rng_from_seed};
use depchoice::graph::{arrangeability, degeneracy_order};
use depchoice::oracles::{count_labeled_copies, graph_catalog, min_mono_copies, ramsey_exact, CopyMode, SearchBudget};
use depchoice::ramsey::{
    certify_pseudorandom, check_monochromatic, erdos_hajnal_driver, minimum_colouring, mono_embed_2color,
    BidenseParams, CertMethod, EdgeColoring, ErdosHajnal, MonoParams,
};
use depchoice::{BipartiteGraph, Graph, Hypergraph, VertexSet};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------------------
// Independent checks.

fn injective_in_range(map: &[usize], universe: usize) -> bool {
    let mut seen = HashSet::new();
    map.iter().all(|&x| x < universe && seen.insert(x))
}

fn is_subgraph_map(h: &Graph, g: &Graph, map: &[usize]) -> bool {
    map.len() == h.n()
        && injective_in_range(map, g.n())
        && (0..h.n()).all(|u| (u + 1..h.n()).all(|v| !h.has_edge(u, v) || g.has_edge(map[u], map[v])))
}

fn is_induced_map(h: &Graph, g: &Graph, map: &[usize]) -> bool {
    map.len() == h.n()
        && injective_in_range(map, g.n())
        && (0..h.n()).all(|u| (u + 1..h.n()).all(|v| h.has_edge(u, v) == g.has_edge(map[u], map[v])))
}

fn labeled_c4_by_codegrees(g: &Graph) -> u128 {
    let mut total = 0u128;
    for u in 0..g.n() {
        for w in 0..g.n() {
            if u != w {
                let c = g.neighbors(u).intersection_len(g.neighbors(w)) as u128;
                total += c * c.saturating_sub(1);
            }
        }
    }
    total
}

/// Subsets of `0..n` of size `k` containing `base`, by brute force.
fn supersets(n: usize, k: usize, base: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out.retain(|s| base.iter().all(|v| s.contains(v)));
    out
}

fn in_down_closure(n: usize, h: usize, non_nice: &HashSet<Vec<usize>>, s: &[usize]) -> bool {
    s.len() <= h && supersets(n, h, s).iter().any(|sup| !non_nice.contains(sup))
}

// ---------------------------------------------------------------------------
// 1. Labeled C4 count in dense random hosts.

fn criterion_1() -> Verdict {
    let big_n = 1100u128;
    let bound = big_n.pow(4) >> 20;
    let c4 = cycle(4).unwrap();
    let mut worst = u128::MAX;
    for seed in 0..5 {
        let g = random_graph(1100, &rat(11, 20), seed).unwrap();
        let density = Rational::new((2 * g.m()).into(), (1100u64 * 1100).into());
        if density < rat(1, 2) {
            return verdict(false, format!("seed {seed}: density {density} below 1/2"));
        }
        let count = count_labeled_copies(&c4, &g, CopyMode::Subgraph).unwrap();
        let check = labeled_c4_by_codegrees(&g);
        if count != check {
            return verdict(false, format!("seed {seed}: oracle {count} vs codegree sum {check}"));
        }
        worst = worst.min(count);
    }
    verdict(
        worst >= bound,
        format!("min labeled C4 count {worst} vs N^4/2^20 = {bound} over 5 seeds"),
    )
}

// ---------------------------------------------------------------------------
// 2. Expected common-neighbourhood size, all small bipartite graphs.

fn direct_expectation(g: &BipartiteGraph, t: usize) -> Rational {
    let n1 = g.n1() as i64;
    let mut total = Rational::zero();
    for j in 0..g.n2() {
        let deg = g.neighbors(depchoice::Side::Right, j).len() as i64;
        let mut term = Rational::one();
        for _ in 0..t {
            term *= rat(deg, n1);
        }
        total += term;
    }
    total
}

fn criterion_2() -> Verdict {
    let mut checked = 0u64;
    let mut failures = 0u64;
    let mut mismatches = 0u64;
    for n in 1..=4usize {
        let cells = n * n;
        for mask in 0u32..(1 << cells) {
            let edges: Vec<(usize, usize)> = (0..cells)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| (b / n, b % n))
                .collect();
            let g = BipartiteGraph::from_edges(n, n, &edges).unwrap();
            let eps = rat(edges.len() as i64, cells as i64);
            for t in 0..=3usize {
                let e = drc_expectation_exact(&g, t).unwrap();
                if e != direct_expectation(&g, t) {
                    mismatches += 1;
                }
                let mut bound = uint(n as u128);
                for _ in 0..t {
                    bound *= &eps;
                }
                if e < bound {
                    failures += 1;
                }
                checked += 1;
            }
        }
    }
    verdict(
        failures == 0 && mismatches == 0,
        format!("{checked} (graph, t) cases, {failures} below eps^t N, {mismatches} differ from the direct sum"),
    )
}

// ---------------------------------------------------------------------------
// 3. Copy count in a hypergraph with few non-nice pairs.

fn criterion_3() -> Verdict {
    let mut patterns: Vec<Hypergraph> = Vec::new();
    for n in 1..=4 {
        for g in graph_catalog(n).unwrap() {
            if g.max_degree() <= 2 {
                let edges: Vec<Vec<usize>> = if g.m() == 0 {
                    (0..n).map(|v| vec![v]).collect()
                } else {
                    g.edges().into_iter().map(|(u, v)| vec![u, v]).collect()
                };
                patterns.push(Hypergraph::new(n, edges).unwrap());
            }
        }
    }
    let mut cases = 0;
    let mut failures = Vec::new();
    for big_n in [16usize, 20, 24] {
        let pairs = big_n * (big_n - 1) / 2;
        let bad = (pairs / 64).saturating_sub(1);
        let all: Vec<Vec<usize>> = supersets(big_n, 2, &[]);
        let mut placements: Vec<Vec<Vec<usize>>> = Vec::new();
        placements.push((1..=bad).map(|v| vec![0, v]).collect());
        placements.push((0..bad).map(|i| vec![2 * i, 2 * i + 1]).collect());
        let mut rng = rng_from_seed(big_n as u64);
        for _ in 0..50 {
            let mut pool = all.clone();
            pool.shuffle(&mut rng);
            placements.push(pool.into_iter().take(bad).collect());
        }
        if bad == 0 {
            placements.truncate(1);
        }
        for hyp in &patterns {
            let mut worst = u128::MAX;
            for non_nice in &placements {
                let fam = ExplicitFamily::new(big_n, 2, non_nice.clone()).unwrap();
                let c = count_hypergraph_copies(hyp, &fam, 1 << 24).unwrap();
                worst = worst.min(c);
            }
            let need = (big_n as u128 / 2).pow(hyp.n() as u32);
            cases += 1;
            if worst < need {
                failures.push(format!("N={big_n} n={} worst {worst} < {need}", hyp.n()));
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{} patterns x N in {{16,20,24}}, worst of 52 placements each: {cases} cases, {} below (N/2)^n {}",
            patterns.len(),
            failures.len(),
            failures.join("; ")
        ),
    )
}

// ---------------------------------------------------------------------------
// 4. Validity of every returned embedding.

#[derive(Default)]
struct Tally {
    calls: u64,
    returned: u64,
    invalid: Vec<String>,
}

impl Tally {
    fn record(&mut self, name: &str, i: u64, outcome: Option<bool>) {
        self.calls += 1;
        if let Some(ok) = outcome {
            self.returned += 1;
            if !ok {
                self.invalid.push(format!("{name} #{i}"));
            }
        }
    }
}

fn random_pattern(rng: &mut impl Rng, n: usize, seed: u64) -> Graph {
    let mut g = random_graph(n, &rat(1, 2), seed).unwrap();
    if g.m() == 0 && n >= 2 {
        let u = rng.random_range(0..n - 1);
        g.add_edge(u, u + 1).unwrap();
    }
    g
}

fn random_bipartite_pattern(rng: &mut impl Rng, seed: u64, max_side: usize) -> BipartiteGraph {
    let n1 = rng.random_range(1..=max_side);
    let n2 = rng.random_range(1..=max_side);
    let mut b = random_bipartite(n1, n2, &rat(1, 2), seed).unwrap();
    if b.edge_count() == 0 {
        b.add_edge(0, 0).unwrap();
    }
    b
}

fn sweep_hypergraph(t: &mut Tally, runs: u64) {
    for i in 0..runs {
        let mut rng = rng_from_seed(1_000_000 + i);
        let big_n = rng.random_range(6..=14);
        let h = rng.random_range(2..=3);
        let n = rng.random_range(2..=5.min(big_n));
        let mut edges: Vec<Vec<usize>> = Vec::new();
        for _ in 0..rng.random_range(1..=4) {
            let k = rng.random_range(1..=h.min(n));
            let mut e: Vec<usize> = (0..n).collect();
            e.shuffle(&mut rng);
            e.truncate(k);
            e.sort_unstable();
            edges.push(e);
        }
        let hyp = Hypergraph::new(n, edges).unwrap();
        let all = supersets(big_n, h, &[]);
        let bad = rng.random_range(0..=all.len() / 8);
        let mut pool = all;
        pool.shuffle(&mut rng);
        pool.truncate(bad);
        let fam = ExplicitFamily::new(big_n, h, pool.clone()).unwrap();
        let non_nice: HashSet<Vec<usize>> = pool.into_iter().collect();
        let opts = GreedyOptions {
            shuffle_seed: Some(i),
            ..GreedyOptions::default()
        };
        let outcome = embed_hypergraph_greedy(&hyp, &fam, &opts).ok().map(|e| {
            injective_in_range(&e.map, big_n)
                && e.map.len() == n
                && hyp.edges().iter().all(|edge| {
                    let mut img: Vec<usize> = edge.iter().map(|&v| e.map[v]).collect();
                    img.sort_unstable();
                    in_down_closure(big_n, h, &non_nice, &img)
                })
        });
        t.record("hypergraph", i, outcome);
    }
}

fn sweep_bipartite(t: &mut Tally, runs: u64) {
    for i in 0..runs {
        let mut rng = rng_from_seed(2_000_000 + i);
        let mut h = random_bipartite_pattern(&mut rng, i, 3);
        while h.max_degree() > 2 {
            let s = rng.random();
            h = random_bipartite_pattern(&mut rng, s, 3);
        }
        let n = h.n();
        let size = 2 * (57 * n + rng.random_range(0..40));
        let g = random_graph(size, &rat(9, 10), i).unwrap();
        let p = BipartiteParams::new(rat(3, 4), i);
        let outcome = embed_bipartite_dense(&h, &g, &p)
            .ok()
            .map(|e| is_subgraph_map(&h.to_graph(), &g, &e.embedding.map));
        t.record("bipartite-dense", i, outcome);
    }
}

fn sweep_degenerate(t: &mut Tally, runs: u64) {
    for i in 0..runs {
        let mut rng = rng_from_seed(3_000_000 + i);
        let h = random_bipartite_pattern(&mut rng, i, 4);
        let hg = h.to_graph();
        let outcome = match i % 3 {
            0 => {
                let side = rng.random_range(20..=40);
                let host = random_bipartite(side, side, &rat(9, 10), i).unwrap().to_graph();
                let a1 = VertexSet::range(2 * side, 0, side);
                let a2 = VertexSet::range(2 * side, side, 2 * side);
                let mut p = TwoSidedParams::new(rng.random_range(8..=side));
                p.rigor = Rigor::BestEffort;
                embed_two_sided(&h, &host, &a1, &a2, &p).ok().map(|e| {
                    let map = &e.embedding.map;
                    is_subgraph_map(&hg, &host, map)
                        && (0..h.n()).all(|v| if v < h.n1() { map[v] < side } else { map[v] >= side })
                })
            }
            1 => {
                let host = random_graph(rng.random_range(120..=200), &rat(9, 10), i).unwrap();
                let mut p = DegenerateParams::new(rat(4, 5), rat(1, 1), i);
                p.rigor = Rigor::BestEffort;
                p.x_override = Some(rng.random_range(12..=24));
                embed_degenerate(&h, &host, &p)
                    .ok()
                    .map(|e| is_subgraph_map(&hg, &host, &e.embedding.map))
            }
            _ => {
                let host = random_graph(rng.random_range(120..=200), &rat(9, 10), i).unwrap();
                let (order, _) = degeneracy_order(&hg);
                let q = arrangeability(&hg, &order).unwrap();
                let mut p = DegenerateParams::new(rat(4, 5), rat(1, 1), i);
                p.rigor = Rigor::BestEffort;
                p.x_override = Some(rng.random_range(12..=24));
                embed_arrangeable(&h, &order, q, &host, &p)
                    .ok()
                    .map(|e| is_subgraph_map(&hg, &host, &e.embedding.map))
            }
        };
        t.record("degenerate", i, outcome);
    }
}

fn sweep_chromatic(t: &mut Tally, runs: u64) {
    for i in 0..runs {
        let mut rng = rng_from_seed(4_000_000 + i);
        let n = rng.random_range(2..=6);
        let h = random_pattern(&mut rng, n, i);
        let classes = minimum_colouring(&h);
        let size = rng.random_range(60..=100);
        let g = random_graph(size, &rat(9, 10), i).unwrap();
        let chain = NestedFamily::halving(size, &VertexSet::full(size), classes.len()).unwrap();
        let mut p = ChromaticParams::new(rng.random_range(8..=16));
        p.rigor = Rigor::BestEffort;
        p.seed = Some(i);
        let outcome = embed_chromatic(&h, &classes, &g, &chain, &p).ok().map(|e| {
            let map = &e.embedding.map;
            is_subgraph_map(&h, &g, map)
                && classes
                    .iter()
                    .enumerate()
                    .all(|(c, class)| class.iter().all(|&v| chain.level(c + 1).contains(map[v])))
        });
        t.record("chromatic", i, outcome);
    }
}

fn sweep_induced(t: &mut Tally, runs: u64) {
    for i in 0..runs {
        let mut rng = rng_from_seed(5_000_000 + i);
        let n = rng.random_range(1..=4);
        let h = random_graph(n, &rat(1, 2), i).unwrap();
        let size = rng.random_range(24..=48);
        let g = random_graph(size, &rat(1, 2), i).unwrap();
        let f = g.complement();
        let chain = NestedFamily::halving(size, &VertexSet::full(size), n).unwrap();
        let mut p = InducedParams::new(rng.random_range(1..=6));
        p.rigor = Rigor::BestEffort;
        p.seed = i;
        p.enum_budget = 200_000;
        let outcome = embed_induced(&h, &g, &f, &chain, &p)
            .ok()
            .map(|e| is_induced_map(&h, &g, &e.embedding.map));
        t.record("induced", i, outcome);
    }
}

fn sweep_subdivision(t: &mut Tally, runs: u64) {
    let patterns = [
        Graph::complete(2),
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap(),
        Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap(),
    ];
    for i in 0..runs {
        let mut rng = rng_from_seed(6_000_000 + i);
        let h = &patterns[(i % 3) as usize];
        let size = 2 * (128 * h.m() + rng.random_range(0..32));
        let g = random_graph(size, &rat(19, 20), i).unwrap();
        let mut p = SubdivisionParams::new(rat(1, 1), i);
        p.rigor = Rigor::BestEffort;
        let outcome = embed_subdivision(h, &g, &p).ok().map(|s| {
            let map = &s.embedded.embedding.map;
            map.len() == h.n() + h.m()
                && injective_in_range(map, g.n())
                && h.edges()
                    .iter()
                    .enumerate()
                    .all(|(k, &(u, v))| g.has_edge(map[h.n() + k], map[u]) && g.has_edge(map[h.n() + k], map[v]))
        });
        t.record("subdivision", i, outcome);
    }
}

fn criterion_4() -> Verdict {
    let mut parts = Vec::new();
    let mut total = Tally::default();
    type Sweep = fn(&mut Tally, u64);
    let sweeps: [(&str, Sweep, u64); 6] = [
        ("hypergraph", sweep_hypergraph, 3000),
        ("bipartite-dense", sweep_bipartite, 1200),
        ("degenerate", sweep_degenerate, 1800),
        ("chromatic", sweep_chromatic, 1500),
        ("induced", sweep_induced, 1500),
        ("subdivision", sweep_subdivision, 1200),
    ];
    let mut every_one_returned = true;
    for (name, sweep, runs) in sweeps {
        let mut t = Tally::default();
        sweep(&mut t, runs);
        parts.push(format!("{name} {}/{}", t.returned, t.calls));
        every_one_returned &= t.returned > 0;
        total.calls += t.calls;
        total.returned += t.returned;
        total.invalid.extend(t.invalid);
    }
    if !total.invalid.is_empty() {
        println!("FAIL 4: invalid embeddings returned: {}", total.invalid.join(", "));
        std::process::exit(1);
    }
    verdict(
        total.calls >= 10_000 && every_one_returned,
        format!(
            "{} invocations, {} embeddings returned, 0 invalid ({})",
            total.calls,
            total.returned,
            parts.join(", ")
        ),
    )
}

// ---------------------------------------------------------------------------
// 5. Subdivision of K4 in G(2N, 0.8).

fn criterion_5() -> Verdict {
    let h = Graph::complete(4);
    let eps = rat(4, 5);
    let big_n = (uint(128 * 6) / (&eps * &eps * &eps)).ceil().to_integer();
    let big_n: usize = big_n.try_into().unwrap();
    let mut ok = 0;
    let mut reduced_ok = true;
    let mut errors = Vec::new();
    for seed in 0..20u64 {
        let g = random_graph(2 * big_n, &eps, 500 + seed).unwrap();
        match embed_subdivision(&h, &g, &SubdivisionParams::new(eps.clone(), seed)) {
            Ok(s) => {
                reduced_ok &= s.reduced_edges <= h.m();
                let map = &s.embedded.embedding.map;
                let valid = map.len() == 10
                    && injective_in_range(map, g.n())
                    && h.edges()
                        .iter()
                        .enumerate()
                        .all(|(k, &(u, v))| g.has_edge(map[4 + k], map[u]) && g.has_edge(map[4 + k], map[v]));
                if valid {
                    ok += 1;
                } else {
                    errors.push(format!("seed {seed}: invalid map"));
                }
            }
            Err(e) => errors.push(format!("seed {seed}: {e}")),
        }
    }
    verdict(
        ok >= 19 && reduced_ok,
        format!(
            "N = {big_n}, {ok}/20 validated subdivisions, branch graphs within n edges: {reduced_ok} {}",
            errors.join("; ")
        ),
    )
}

// ---------------------------------------------------------------------------
// 6. Small Ramsey values.

fn criterion_6() -> Verdict {
    let k3 = Graph::complete(3);
    let c4 = cycle(4).unwrap();
    let r33 = ramsey_exact(&k3, &k3, 8).unwrap();
    let mono = min_mono_copies(&k3, 6).unwrap();
    let r44 = ramsey_exact(&c4, &c4, 8).unwrap();
    // Goodman: a two-colouring of K_{2m} has at least m(m-1)(m-2)/3
    // monochromatic triangles, each with 3! labelings.
    let m = 3u128;
    let goodman = m * (m - 1) * (m - 2) / 3 * 6;
    // The pentagon colouring of K_5 has no monochromatic triangle, so r > 5.
    let pentagon = cycle(5).unwrap();
    let mono_free = [pentagon.clone(), pentagon.complement()]
        .iter()
        .all(|c| count_labeled_copies(&k3, c, CopyMode::Subgraph).unwrap() == 0);
    let pass = r33 == Some(6) && mono == 12 && r44 == Some(6) && mono == goodman && mono_free;
    verdict(
        pass,
        format!("r(K3,K3) = {r33:?}, min labeled mono K3 in K6 = {mono} (Goodman {goodman}), r(C4,C4) = {r44:?}"),
    )
}

// ---------------------------------------------------------------------------
// 7. Paley certificates.

fn criterion_7() -> Verdict {
    let mut worst_slack = f64::INFINITY;
    let mut lines = Vec::new();
    let mut pass = true;
    for q in [13u64, 17, 29, 101] {
        let g = paley(q).unwrap();
        let cert = certify_pseudorandom(&g, CertMethod::Spectral, 0, q).unwrap();
        let sqrt_q = (q as f64).sqrt();
        let theory = (1.0 + sqrt_q) / 2.0;
        pass &= cert.lambda <= sqrt_q + 1e-6 && (cert.evidence - theory).abs() <= 1e-6;
        let p = 0.5;
        let n = q as usize;
        let mut rng = rng_from_seed(7_000 + q);
        for _ in 0..1000 {
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<usize> {
                let k = rng.random_range(1..=n);
                let mut all: Vec<usize> = (0..n).collect();
                all.shuffle(rng);
                all.truncate(k);
                all
            };
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            let e: usize = a.iter().map(|&u| b.iter().filter(|&&v| g.has_edge(u, v)).count()).sum();
            let size = (a.len() * b.len()) as f64;
            let dev = (e as f64 / size - p).abs() * size.sqrt();
            worst_slack = worst_slack.min(cert.lambda - dev);
            if dev > cert.lambda + 1e-6 {
                pass = false;
            }
        }
        lines.push(format!("q={q}: lambda {:.4} <= sqrt q {:.4}", cert.lambda, sqrt_q));
    }
    verdict(
        pass,
        format!("{}; 4000 sampled pairs, min slack {worst_slack:.4}", lines.join(", ")),
    )
}

// ---------------------------------------------------------------------------
// 8. Monochromatic C4 at the size bound.

fn criterion_8() -> Verdict {
    let c4 = cycle(4).unwrap();
    let mut ok = 0;
    let mut levels_ok = true;
    let mut errors = Vec::new();
    for seed in 0..10u64 {
        let col = EdgeColoring::random(Graph::complete(1024), 2, 800 + seed).unwrap();
        match mono_embed_2color(&c4, &col, &MonoParams::new(seed)) {
            Ok(e) => {
                let map = &e.embedded.embedding.map;
                let class = col.class(e.colour);
                let chain_ok = e.chain.iter().all(|s| s.ratio_ok);
                levels_ok &= chain_ok;
                if is_subgraph_map(&c4, class, map) && check_monochromatic(&c4, &col, e.colour, map).is_ok() {
                    ok += 1;
                } else {
                    errors.push(format!("seed {seed}: copy not monochromatic"));
                }
            }
            Err(err) => errors.push(format!("seed {seed}: {err}")),
        }
    }
    verdict(
        ok == 10 && levels_ok,
        format!(
            "N = 1024 = 2^((2d+2)(2q-3)+2) n, {ok}/10 monochromatic copies, every level within ratio: {levels_ok} {}",
            errors.join("; ")
        ),
    )
}

// ---------------------------------------------------------------------------
// 9. Independent set or biclique over a mixed corpus.

/// Two cliques with random cross edges (so no independent set of size 3)
/// and a planted pair across them: every vertex of `W1` (size `2t`, first
/// clique) misses fewer than `|W2| / (2t)` vertices of `W2` (second
/// clique), so `K_{t,t}` always exists.
fn planted(n: usize, t: usize, w2: usize, p: &Rational, seed: u64) -> Graph {
    let half = n / 2;
    let cross = random_bipartite(half, n - half, p, seed).unwrap();
    let mut g = Graph::from_fn(n, |u, v| (u < half) == (v < half) || cross.has_edge(u.min(v), u.max(v) - half));
    let mut rng = rng_from_seed(seed ^ 0x9e37);
    let mut left: Vec<usize> = (0..half).collect();
    let mut right: Vec<usize> = (half..n).collect();
    left.shuffle(&mut rng);
    right.shuffle(&mut rng);
    let w1 = &left[..2 * t];
    let w2 = &right[..w2];
    let max_miss = (w2.len() - 1) / (2 * t);
    for &u in w1 {
        let miss = rng.random_range(0..=max_miss);
        for (k, &v) in w2.iter().enumerate() {
            if k < miss {
                g.remove_edge(u, v);
            } else {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn criterion_9() -> Verdict {
    let t = 3;
    let mut corpus: Vec<(String, Graph, bool)> = Vec::new();
    for q in [13u64, 17, 29, 37, 41, 53, 61, 73, 89, 97, 101, 109, 113, 137, 149] {
        corpus.push((format!("paley {q}"), paley(q).unwrap(), false));
    }
    for i in 0..15u64 {
        let n = 40 + 8 * i as usize;
        let p = [rat(1, 2), rat(3, 4), rat(9, 10)][(i % 3) as usize].clone();
        corpus.push((format!("G({n}, {p})"), random_graph(n, &p, 900 + i).unwrap(), false));
    }
    for i in 0..20u64 {
        let n = 60 + 4 * i as usize;
        let p = [rat(1, 10), rat(1, 4), rat(1, 2), rat(3, 4)][(i % 4) as usize].clone();
        corpus.push((format!("planted {n}"), planted(n, t, 24, &p, 950 + i), true));
    }
    let mut invalid = 0;
    let mut failed_constructed = Vec::new();
    let mut failed_other = Vec::new();
    let (mut indep, mut bicl) = (0, 0);
    for (i, (name, g, constructed)) in corpus.iter().enumerate() {
        match erdos_hajnal_driver(g, t, SearchBudget::nodes(20_000_000), &BidenseParams::new(i as u64)) {
            Ok(out) => {
                let valid = match &out {
                    ErdosHajnal::IndependentSet { vertices } => {
                        indep += 1;
                        vertices.len() == t
                            && injective_in_range(vertices, g.n())
                            && vertices.iter().all(|&u| vertices.iter().all(|&v| u == v || !g.has_edge(u, v)))
                    }
                    ErdosHajnal::Biclique { left, right } => {
                        bicl += 1;
                        let both: Vec<usize> = left.iter().chain(right).copied().collect();
                        left.len() == t
                            && right.len() == t
                            && injective_in_range(&both, g.n())
                            && left.iter().all(|&u| right.iter().all(|&v| g.has_edge(u, v)))
                    }
                };
                if !valid {
                    invalid += 1;
                }
            }
            Err(e) => {
                let entry = format!("{name}: {e}");
                if *constructed {
                    failed_constructed.push(entry);
                } else {
                    failed_other.push(entry);
                }
            }
        }
    }
    let others = corpus.iter().filter(|c| !c.2).count();
    let pass = invalid == 0 && failed_constructed.is_empty() && failed_other.len() * 5 <= others;
    verdict(
        pass,
        format!(
            "{} graphs, t = {t}: {indep} independent sets, {bicl} bicliques, {invalid} invalid, \
             {} failures on constructed, {}/{others} elsewhere {}",
            corpus.len(),
            failed_constructed.len(),
            failed_other.len(),
            failed_constructed.iter().chain(&failed_other).cloned().collect::<Vec<_>>().join("; ")
        ),
    )
}

// ---------------------------------------------------------------------------

fn main() {
    type Criterion = (u32, &'static str, fn() -> Verdict);
    let criteria: [Criterion; 9] = [
        (1, "labeled C4 count bound in G(1100, 0.55)", criterion_1),
        (2, "expected common neighbourhood, all bipartite graphs up to 4+4", criterion_2),
        (3, "copy count with few non-nice pairs", criterion_3),
        (4, "every returned embedding validates", criterion_4),
        (5, "1-subdivision of K4 in G(2N, 0.8)", criterion_5),
        (6, "exact small Ramsey values", criterion_6),
        (7, "Paley pseudo-randomness certificates", criterion_7),
        (8, "monochromatic C4 in two-coloured K_1024", criterion_8),
        (9, "independent set or biclique over a 50-graph corpus", criterion_9),
    ];
    // Optional criterion ids select a subset, e.g. `cargo test --test acceptance -- 5 9`.
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut passed = std::collections::BTreeMap::new();
    for (id, name, run) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let v = run();
        passed.insert(id, v.pass);
        println!(
            "{} {id}: {name}: {} [{:.1}s]",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    // Host sizes demanded by the tower-type bounds, for t = 2 and n = 3.
    let induced_bits = 8.0 * 27.0 * 8f64.log2();
    let multicolour_bits = 500.0 * 27.0 * 2.0 * 2f64.log2();
    if [4, 7, 9].iter().any(|id| !passed.contains_key(id)) {
        return;
    }
    let covered = passed[&4] && passed[&7] && passed[&9];
    println!(
        "{} 10: tower-size hosts out of reach (log2 N >= {induced_bits:.0} and {multicolour_bits:.0} \
         even for n = 3); those pipelines rest on criteria 4, 7 and 9, which {}",
        if covered { "PASS" } else { "FAIL" },
        if covered { "passed" } else { "did not all pass" }
    );
}
