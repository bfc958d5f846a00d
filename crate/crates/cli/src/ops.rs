use std::path::Path;

use depchoice::drc::drc_find_witness_with_budget;
use depchoice::drc::DrcParams;
use depchoice::embed::bipartite::{embed_bipartite_dense, BipartiteParams};
use depchoice::embed::chromatic::{embed_chromatic, ChromaticParams};
use depchoice::embed::degenerate::{embed_arrangeable, embed_degenerate, DegenerateParams};
use depchoice::embed::induced::{embed_induced, InducedParams};
use depchoice::embed::subdivision::{embed_subdivision, SubdivisionParams};
use depchoice::embed::{NestedFamily, Rigor};
use depchoice::exact::{format_rational, parse_rational, Rational};
use depchoice::generators::{
    complete_bipartite, cycle, hypercube, named, paley, path, random_d_degenerate, random_graph, star,
};
use depchoice::graph::{arrangeability, bipartite_density, degeneracy_order};
use depchoice::io::{parse_graph, read_colouring, write_edge_list, write_graph6, GraphFile};
use depchoice::oracles::{
    are_isomorphic, count_labeled_copies_with_budget, find_copy, max_clique_with_budget,
    max_independent_set_with_budget, min_mono_copies_with_budget, ramsey_exact_with_budget,
    universality_check_with_budget, CopyMode, SearchBudget,
};
use depchoice::ramsey::{
    bidense_search, certify_pseudorandom, clique_or_independent_step, erdos_hajnal_driver, mono_embed_2color,
    multicolor_bipartite_driver, BidenseParams, CertMethod, EdgeColoring, InducedRamseyParams, MonoParams,
};
use depchoice::{
    balanced_max_cut_partition, validate_embedding, BipartiteGraph, Contract, Embedding, EmbeddingMode, Graph,
    VertexSet,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::args::*;
use crate::CliError;

type Res<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Res<T> {
    v.clone().ok_or_else(|| usage(format!("--{flag} is required here")))
}

fn rational(s: &str) -> Res<Rational> {
    Ok(parse_rational(s)?)
}

fn vertex_list(s: &str) -> Res<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| usage(format!("`{t}` is not a vertex index"))))
        .collect()
}

/// Everything read while resolving inputs feeds the digest.
pub struct Loader {
    pub digest: Sha256,
}

impl Loader {
    pub fn new() -> Self {
        Loader { digest: Sha256::new() }
    }

    /// A file path, or an inline spec: a short name (`k4`, `c5`, `k2,3`),
    /// `paley:<q>` or `gnp:<n>:<p>:<seed>`.
    pub fn graph_file(&mut self, spec: &str) -> Res<GraphFile> {
        let path = Path::new(spec);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(depchoice::Error::from)?;
            self.digest.update(text.as_bytes());
            return Ok(parse_graph(&text)?);
        }
        self.digest.update(spec.as_bytes());
        let parts: Vec<&str> = spec.split(':').collect();
        let g = match parts.as_slice() {
            ["paley", q] => paley(q.parse().map_err(|_| usage(format!("bad prime in {spec}")))?)?,
            ["gnp", n, p, seed] => random_graph(
                n.parse().map_err(|_| usage(format!("bad order in {spec}")))?,
                &rational(p)?,
                seed.parse().map_err(|_| usage(format!("bad seed in {spec}")))?,
            )?,
            _ => named(spec).map_err(|_| usage(format!("{spec} is neither a file nor a graph name")))?,
        };
        Ok(GraphFile::Plain(g))
    }

    pub fn graph(&mut self, spec: &str) -> Res<Graph> {
        Ok(self.graph_file(spec)?.into_graph())
    }

    /// Bipartite files keep their sides; plain graphs are 2-coloured.
    pub fn bipartite(&mut self, spec: &str) -> Res<BipartiteGraph> {
        match self.graph_file(spec)? {
            GraphFile::Bipartite(b) => Ok(b),
            GraphFile::Plain(g) => Ok(BipartiteGraph::from_graph(&g)?.0),
        }
    }

    pub fn colouring(&mut self, spec: &str) -> Res<EdgeColoring> {
        let text = std::fs::read_to_string(spec).map_err(depchoice::Error::from)?;
        self.digest.update(text.as_bytes());
        Ok(read_colouring(Path::new(spec))?)
    }

    pub fn finish(self) -> String {
        format!("{:x}", self.digest.finalize())
    }
}

pub fn generate(a: &GenArgs, seed: u64) -> Res<String> {
    let n = || need(&a.n, "n");
    let g = match a.family.as_str() {
        "hypercube" => hypercube(need(&a.d, "d")? as u32)?,
        "cycle" => cycle(n()?)?,
        "path" => path(n()?),
        "complete" => Graph::complete(n()?),
        "empty" => Graph::empty(n()?),
        "complete-bipartite" => complete_bipartite(need(&a.a, "a")?, need(&a.b, "b")?),
        "star" => star(n()?),
        "random" => random_graph(n()?, &rational(&need(&a.p, "p")?)?, seed)?,
        "paley" => paley(need(&a.q, "q")?)?,
        "degenerate" => {
            let d = need(&a.d, "d")?;
            random_d_degenerate(n()?, d, a.max_degree.unwrap_or(usize::MAX), seed)?
        }
        "named" => named(&need(&a.name, "name")?)?,
        other => return Err(usage(format!("unknown family {other}"))),
    };
    match a.format.as_str() {
        "edge-list" => Ok(write_edge_list(&g)),
        "graph6" => Ok(write_graph6(&g) + "\n"),
        other => Err(usage(format!("unknown format {other}"))),
    }
}

fn rigor(best_effort: bool) -> Rigor {
    if best_effort {
        Rigor::BestEffort
    } else {
        Rigor::Strict
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload types serialize")
}

pub fn drc(a: &DrcArgs, c: &Common, budget: u64, ld: &mut Loader) -> Res<Value> {
    let cut = match ld.graph_file(&a.host)? {
        GraphFile::Bipartite(b) => b,
        GraphFile::Plain(g) => {
            let (s1, s2) = balanced_max_cut_partition(&g, c.seed)?;
            BipartiteGraph::from_cut(&g, &s1.to_vec(), &s2.to_vec())?
        }
    };
    let epsilon = match &a.epsilon {
        Some(e) => rational(e)?,
        None => bipartite_density(&cut),
    };
    let params = DrcParams {
        a: a.a,
        d: a.d,
        t: a.t,
        x: a.x,
        epsilon,
    };
    let (o, source) = drc_find_witness_with_budget(&cut, &params, c.trials, c.seed, budget)?;
    Ok(json!({
        "a_set": o.a_set.to_vec(),
        "sample": o.sample,
        "bad_count": o.bad_count.to_string(),
        "size_floor": format_rational(&o.size_floor),
        "bad_bound": format_rational(&o.bad_bound),
        "meets_size_bound": o.meets_size_bound(),
        "meets_bad_bound": o.meets_bad_bound(),
        "source": to_value(&source),
    }))
}

pub fn embed(a: &EmbedArgs, c: &Common, budget: u64, ld: &mut Loader) -> Res<Value> {
    let host = ld.graph(&a.host)?;
    let eps = rational(&a.epsilon)?;
    let r = rigor(a.best_effort);
    let embedded = match a.alg.as_str() {
        "bipartite-dense" => {
            let h = ld.bipartite(&a.pattern)?;
            let mut p = BipartiteParams::new(eps, c.seed);
            p.rigor = r;
            p.trials = c.trials;
            p.enum_budget = budget;
            p.search_nodes = budget;
            embed_bipartite_dense(&h, &host, &p)?
        }
        "degenerate" | "arrangeable" => {
            let h = ld.bipartite(&a.pattern)?;
            let mut p = DegenerateParams::new(eps, rational(&a.delta)?, c.seed);
            p.rigor = r;
            p.x_override = a.x;
            p.retries = c.trials.min(u32::MAX as u64) as u32;
            p.enum_budget = budget;
            p.search_nodes = budget;
            if a.alg == "degenerate" {
                embed_degenerate(&h, &host, &p)?
            } else {
                let (order, _) = degeneracy_order(&h.to_graph());
                let q = match a.arrange_p {
                    Some(q) => q,
                    None => arrangeability(&h.to_graph(), &order)
                        .ok_or_else(|| usage("pattern too large to compute its arrangeability"))?,
                };
                embed_arrangeable(&h, &order, q, &host, &p)?
            }
        }
        "chromatic" => {
            let h = ld.graph(&a.pattern)?;
            let classes = depchoice::ramsey::minimum_colouring(&h);
            let chain = NestedFamily::halving(host.n(), &host.vertex_set(), classes.len().max(1))?;
            let mut p = ChromaticParams::new(need(&a.x, "x")?);
            p.rigor = r;
            p.seed = Some(c.seed);
            p.enum_budget = budget;
            p.search_nodes = budget;
            embed_chromatic(&h, &classes, &host, &chain, &p)?
        }
        "subdivision" => {
            let h = ld.graph(&a.pattern)?;
            let mut p = SubdivisionParams::new(eps, c.seed);
            p.rigor = r;
            p.retries = c.trials.min(u32::MAX as u64) as u32;
            p.search_nodes = budget;
            let s = embed_subdivision(&h, &host, &p)?;
            return Ok(json!({
                "alg": a.alg,
                "embedded": to_value(&s.embedded),
                "certified": s.embedded.certified(),
                "chain": to_value(&s.chain),
                "reduced_edges": s.reduced_edges,
            }));
        }
        "induced" => {
            let h = ld.graph(&a.pattern)?;
            let chain = NestedFamily::halving(host.n(), &host.vertex_set(), h.n().max(1))?;
            let mut p = InducedParams::new(need(&a.m, "m")?);
            p.rigor = r;
            p.seed = c.seed;
            p.enum_budget = budget;
            p.search_nodes = budget;
            embed_induced(&h, &host, &host.complement(), &chain, &p)?
        }
        other => return Err(usage(format!("unknown embedder {other}"))),
    };
    Ok(json!({
        "alg": a.alg,
        "certified": embedded.certified(),
        "embedded": to_value(&embedded),
    }))
}

pub fn oracle(a: &OracleArgs, budget: u64, ld: &mut Loader) -> Res<Value> {
    let sb = SearchBudget::nodes(budget);
    let v = match a.op.as_str() {
        "count" | "count-induced" => {
            let mode = if a.op == "count" { CopyMode::Subgraph } else { CopyMode::Induced };
            let h = ld.graph(&need(&a.pattern, "pattern")?)?;
            let g = ld.graph(&need(&a.host, "host")?)?;
            json!({ "count": count_labeled_copies_with_budget(&h, &g, mode, sb)?.to_string() })
        }
        "find" | "contains-induced" => {
            let mode = if a.op == "find" { CopyMode::Subgraph } else { CopyMode::Induced };
            let h = ld.graph(&need(&a.pattern, "pattern")?)?;
            let g = ld.graph(&need(&a.host, "host")?)?;
            let found = find_copy(&h, &g, mode, sb)?;
            json!({ "found": found.is_some(), "map": found })
        }
        "max-clique" | "max-independent" => {
            let g = ld.graph(&need(&a.host, "host")?)?;
            let s = if a.op == "max-clique" {
                max_clique_with_budget(&g, sb)?
            } else {
                max_independent_set_with_budget(&g, sb)?
            };
            json!({ "size": s.len(), "vertices": s.to_vec() })
        }
        "ramsey" => {
            let h1 = ld.graph(&need(&a.h1, "h1")?)?;
            let h2 = ld.graph(&need(&a.h2, "h2")?)?;
            let r = ramsey_exact_with_budget(&h1, &h2, need(&a.nmax, "nmax")?, sb)?;
            json!({ "value": r })
        }
        "min-mono" => {
            let h = ld.graph(&need(&a.pattern, "pattern")?)?;
            json!({ "count": min_mono_copies_with_budget(&h, need(&a.n, "n")?, sb)?.to_string() })
        }
        "universal" => {
            let g = ld.graph(&need(&a.host, "host")?)?;
            json!({ "universal": universality_check_with_budget(&g, need(&a.n, "n")?, sb)? })
        }
        "isomorphic" => {
            let h1 = ld.graph(&need(&a.h1, "h1")?)?;
            let h2 = ld.graph(&need(&a.h2, "h2")?)?;
            json!({ "isomorphic": are_isomorphic(&h1, &h2)? })
        }
        other => return Err(usage(format!("unknown oracle operation {other}"))),
    };
    Ok(v)
}

fn colouring_or_random(a: &RamseyArgs, seed: u64, ld: &mut Loader, host: Option<Graph>) -> Res<EdgeColoring> {
    match &a.colouring {
        Some(path) => ld.colouring(path),
        None => {
            let host = match host {
                Some(g) => g,
                None => Graph::complete(need(&a.n, "n")?),
            };
            ld.digest.update(format!("random colouring k={} seed={seed}", a.k).as_bytes());
            Ok(EdgeColoring::random(host, a.k, seed)?)
        }
    }
}

pub fn ramsey(a: &RamseyArgs, c: &Common, budget: u64, ld: &mut Loader) -> Res<Value> {
    let sb = SearchBudget::nodes(budget);
    let mut bp = BidenseParams::new(c.seed);
    bp.trials = c.trials;
    let v = match a.driver.as_str() {
        "mono" => {
            let h = ld.graph(&need(&a.pattern, "pattern")?)?;
            let col = colouring_or_random(a, c.seed, ld, None)?;
            let mut p = MonoParams::new(c.seed);
            p.allow_small = a.allow_small;
            p.trials = c.trials;
            p.enum_budget = budget;
            p.search_nodes = budget;
            to_value(&mono_embed_2color(&h, &col, &p)?)
        }
        "multicolor" => {
            let specs = need(&a.patterns, "patterns")?;
            let hs = specs
                .split(';')
                .map(|s| ld.bipartite(s.trim()))
                .collect::<Res<Vec<_>>>()?;
            let col = colouring_or_random(a, c.seed, ld, None)?;
            to_value(&multicolor_bipartite_driver(&hs, &col, c.seed)?)
        }
        "bidense" => {
            let g = ld.graph(&need(&a.host, "host")?)?;
            let eps = rational(&need(&a.epsilon, "epsilon")?)?;
            to_value(&bidense_search(&g, need(&a.z, "z")?, &eps, &bp)?)
        }
        "erdos-hajnal" => {
            let g = ld.graph(&need(&a.host, "host")?)?;
            to_value(&erdos_hajnal_driver(&g, need(&a.t, "t")?, sb, &bp)?)
        }
        "clique-step" => {
            let g = ld.graph(&need(&a.host, "host")?)?;
            let w1 = vertex_list(&need(&a.w1, "w1")?)?;
            let w2 = vertex_list(&need(&a.w2, "w2")?)?;
            let (x, y) = clique_or_independent_step(&g, &w1, &w2, sb)?;
            json!({ "x": x, "y": y })
        }
        "induced" => {
            let h = ld.graph(&need(&a.pattern, "pattern")?)?;
            let gamma = ld.graph(&need(&a.host, "host")?)?;
            let col = colouring_or_random(a, c.seed, ld, Some(gamma.clone()))?;
            let method = if gamma.regular_degree().is_some() { CertMethod::Spectral } else { CertMethod::Sampled };
            let cert = certify_pseudorandom(&gamma, method, 1000, c.seed)?;
            let mut p = InducedRamseyParams::new(need(&a.m, "m")?, c.seed);
            p.t = a.t;
            p.rigor = rigor(a.best_effort);
            p.trials = c.trials;
            p.enum_budget = budget;
            p.search_nodes = budget;
            let e = depchoice::ramsey::induced_ramsey_driver(&h, &gamma, &col, &cert, &p)?;
            json!({ "certificate": to_value(&cert), "result": to_value(&e) })
        }
        other => return Err(usage(format!("unknown driver {other}"))),
    };
    Ok(v)
}

pub fn certify(a: &CertifyArgs, c: &Common, ld: &mut Loader) -> Res<Value> {
    let g = ld.graph(&a.host)?;
    let method = match a.method.as_str() {
        "spectral" => CertMethod::Spectral,
        "sampled" => CertMethod::Sampled,
        other => return Err(usage(format!("unknown method {other}"))),
    };
    let cert = certify_pseudorandom(&g, method, a.pairs, c.seed)?;
    let worst = depchoice::ramsey::sampled_deviation(&g, depchoice::exact::to_f64(&cert.p), a.pairs, c.seed);
    Ok(json!({
        "certificate": to_value(&cert),
        "worst_sampled_deviation": worst,
        "sampled_within_lambda": worst <= cert.lambda + 1e-6,
    }))
}

pub fn verify(a: &VerifyArgs, ld: &mut Loader) -> Res<Value> {
    let h = ld.graph(&a.pattern)?;
    let g = ld.graph(&a.host)?;
    let map = vertex_list(&a.map)?;
    let comp;
    let (contract, mode) = match a.mode.as_str() {
        "subgraph" => (Contract::Subgraph, EmbeddingMode::Subgraph),
        "induced" => {
            comp = g.complement();
            (Contract::InducedPair { second: &comp }, EmbeddingMode::InducedPair)
        }
        other => return Err(usage(format!("unknown mode {other}"))),
    };
    let valid = validate_embedding(&h, &g, &Embedding::new(map.clone(), mode), &contract)?;
    if !valid {
        return Err(CliError::Invalid(format!("map {map:?} violates the {} contract", a.mode)));
    }
    let image = VertexSet::from_iter(g.n(), map.iter().copied());
    Ok(json!({ "valid": true, "image": image.to_vec() }))
}
