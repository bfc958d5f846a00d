use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "depchoice", version, about = "Dependent random choice experiments on dense graphs")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sampling rounds or retries, depending on the operation.
    #[arg(long, global = true, default_value_t = 64)]
    pub trials: u64,
    /// Enumeration and search node limit; defaults to `DEPCHOICE_BUDGET`.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Generate a graph and print it in edge-list (or graph6) form.
    Gen(GenArgs),
    /// One dependent-random-choice search on a host.
    Drc(DrcArgs),
    /// Run an embedder.
    Embed(EmbedArgs),
    /// Exact brute-force computations.
    Oracle(OracleArgs),
    /// End-to-end Ramsey-type drivers.
    Ramsey(RamseyArgs),
    /// Pseudo-randomness certificate of a host.
    Certify(CertifyArgs),
    /// Check a vertex map against a pattern and a host.
    Verify(VerifyArgs),
    /// Run a list of experiment configurations and write a CSV table.
    Batch(BatchArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GenArgs {
    /// hypercube, cycle, path, complete, complete-bipartite, star, empty,
    /// random, paley, degenerate or named.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Edge probability as `num/den` or decimal.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Short name for `--family named`, e.g. `k4` or `k2,3`.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, default_value = "edge-list")]
    pub format: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DrcArgs {
    #[arg(long)]
    pub host: String,
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub x: usize,
    /// Defaults to the host's own density.
    #[arg(long)]
    pub epsilon: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EmbedArgs {
    /// bipartite-dense, degenerate, arrangeable, chromatic, subdivision or induced.
    #[arg(long)]
    pub alg: String,
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub host: String,
    #[arg(long, default_value = "1/2")]
    pub epsilon: String,
    #[arg(long, default_value = "1/2")]
    pub delta: String,
    /// Common-neighbourhood threshold (chromatic) or override (degenerate).
    #[arg(long)]
    pub x: Option<usize>,
    /// Pair threshold of the induced embedder.
    #[arg(long)]
    pub m: Option<usize>,
    /// Arrangeability bound; computed from a degeneracy ordering if absent.
    #[arg(long)]
    pub arrange_p: Option<usize>,
    /// Record failed checks instead of aborting on them.
    #[arg(long)]
    pub best_effort: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OracleArgs {
    /// count, count-induced, find, contains-induced, max-clique,
    /// max-independent, ramsey, min-mono, universal or isomorphic.
    #[arg(long)]
    pub op: String,
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long)]
    pub host: Option<String>,
    #[arg(long)]
    pub h1: Option<String>,
    #[arg(long)]
    pub h2: Option<String>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RamseyArgs {
    /// mono, multicolor, bidense, erdos-hajnal, clique-step or induced.
    #[arg(long)]
    pub driver: String,
    #[arg(long)]
    pub pattern: Option<String>,
    /// Semicolon-separated patterns, one per colour.
    #[arg(long)]
    pub patterns: Option<String>,
    #[arg(long)]
    pub host: Option<String>,
    /// Colouring file; without it a random colouring is drawn from `--seed`.
    #[arg(long)]
    pub colouring: Option<String>,
    /// Order of the complete host when no colouring file is given.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub z: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Comma-separated vertex lists for clique-step.
    #[arg(long)]
    pub w1: Option<String>,
    #[arg(long)]
    pub w2: Option<String>,
    /// Accept hosts below the size bound (best effort).
    #[arg(long)]
    pub allow_small: bool,
    #[arg(long)]
    pub best_effort: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CertifyArgs {
    #[arg(long)]
    pub host: String,
    #[arg(long, default_value = "spectral")]
    pub method: String,
    /// Subset pairs checked against the bound (sampled evidence).
    #[arg(long, default_value_t = 1000)]
    pub pairs: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub host: String,
    /// Comma-separated host vertices, one per pattern vertex.
    #[arg(long)]
    pub map: String,
    /// subgraph or induced.
    #[arg(long, default_value = "subgraph")]
    pub mode: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BatchArgs {
    /// JSON lines (or a JSON array) of experiment configurations.
    #[arg(long)]
    pub config: PathBuf,
}
