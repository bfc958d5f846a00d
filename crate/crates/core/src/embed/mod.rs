//! Greedy embedders that track "good" subsets, plus the pipelines that set
//! up their hypotheses (partition, dependent random choice, nested chains).
//!
//! Every embedder checks its hypotheses by counting before it embeds and
//! validates its output before returning. In [`Rigor::Strict`] mode a failed
//! hypothesis is an error; in [`Rigor::BestEffort`] mode it is recorded as a
//! failed [`Check`] and the embedder carries on, falling back to a bounded
//! backtracking search if the greedy gets stuck.

pub mod bipartite;
pub mod chromatic;
pub mod degenerate;
pub mod hypergraph;
pub mod induced;
pub mod ledger;
mod leveled;
pub mod search;
pub mod subdivision;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{balanced_max_cut_partition, validate_embedding, Contract, Embedding, Graph};
use crate::vertex_set::VertexSet;

pub use ledger::{GeometricBudget, GoodnessLedger, PairBudget};

/// Default number of re-samples for randomized pipeline steps.
pub const DEFAULT_RETRIES: u32 = 64;

/// Default node limit of the backtracking fallback.
pub const DEFAULT_SEARCH_NODES: u64 = 5_000_000;

/// Whether failed hypotheses abort the run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rigor {
    #[default]
    Strict,
    BestEffort,
}

/// One verified inequality or structural condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Per-step bookkeeping of a greedy run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Trace {
    /// Host vertices ruled out by goodness at each step (occupied ones excluded).
    pub excluded: Vec<usize>,
    /// Admissible choices left at each step.
    pub choices: Vec<usize>,
}

/// A validated embedding with the evidence gathered on the way.
#[derive(Clone, Debug, Serialize)]
pub struct Embedded {
    pub embedding: Embedding,
    pub checks: Vec<Check>,
    pub trace: Trace,
    /// The greedy got stuck and the backtracking search produced the map.
    pub fallback: bool,
}

impl Embedded {
    /// All checks hold and the greedy finished on its own.
    pub fn certified(&self) -> bool {
        !self.fallback && self.checks.iter().all(|c| c.holds)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Collects checks and turns failures into errors under [`Rigor::Strict`].
#[derive(Debug)]
pub(crate) struct Checks {
    rigor: Rigor,
    list: Vec<Check>,
}

impl Checks {
    pub(crate) fn new(rigor: Rigor) -> Self {
        Checks {
            rigor,
            list: Vec::new(),
        }
    }

    pub(crate) fn rigor(&self) -> Rigor {
        self.rigor
    }

    /// Records a hypothesis; strict mode fails on a violation.
    pub(crate) fn hypothesis(
        &mut self,
        name: &str,
        holds: bool,
        level: Option<usize>,
        count: impl ToString,
        budget: impl ToString,
    ) -> Result<()> {
        let (count, budget) = (count.to_string(), budget.to_string());
        self.list.push(Check {
            name: name.to_string(),
            holds,
            detail: format!("value {count}, required bound {budget}"),
        });
        if !holds && self.rigor == Rigor::Strict {
            return Err(Error::hypothesis(name, level, count, budget));
        }
        Ok(())
    }

    /// Records a size precondition; strict mode fails with a precondition error.
    pub(crate) fn precondition(&mut self, name: &str, holds: bool, detail: String) -> Result<()> {
        self.list.push(Check {
            name: name.to_string(),
            holds,
            detail: detail.clone(),
        });
        if !holds && self.rigor == Rigor::Strict {
            return Err(Error::Precondition(format!("{name}: {detail}")));
        }
        Ok(())
    }

    /// Records an observation that never aborts.
    pub(crate) fn note(&mut self, name: &str, holds: bool, detail: String) {
        self.list.push(Check {
            name: name.to_string(),
            holds,
            detail,
        });
    }

    pub(crate) fn into_vec(self) -> Vec<Check> {
        self.list
    }
}

/// Final gate every embedder passes its output through.
pub(crate) fn finish(
    pattern: &Graph,
    host: &Graph,
    embedding: Embedding,
    contract: &Contract<'_>,
    checks: Checks,
    trace: Trace,
    fallback: bool,
) -> Result<Embedded> {
    if !validate_embedding(pattern, host, &embedding, contract)? {
        return Err(Error::InvalidEmbedding(
            "internal error: constructed map violates its contract".into(),
        ));
    }
    Ok(Embedded {
        embedding,
        checks: checks.into_vec(),
        trace,
        fallback,
    })
}

/// A chain `A_1 ⊇ A_2 ⊇ …` of vertex sets with per-level metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedFamily {
    levels: Vec<VertexSet>,
    /// Colour chosen when each level was built from the previous one.
    pub colours: Vec<Option<usize>>,
}

impl NestedFamily {
    /// Checks containment of consecutive levels.
    pub fn new(levels: Vec<VertexSet>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::DegenerateInput("a nested family needs a level".into()));
        }
        for (i, w) in levels.windows(2).enumerate() {
            if w[0].universe() != w[1].universe() {
                return Err(Error::DegenerateInput("levels live in different universes".into()));
            }
            if !w[1].is_subset(&w[0]) {
                return Err(Error::DegenerateInput(format!(
                    "level {} is not contained in level {}",
                    i + 2,
                    i + 1
                )));
            }
        }
        let colours = vec![None; levels.len()];
        Ok(NestedFamily { levels, colours })
    }

    pub fn with_colours(mut self, colours: Vec<Option<usize>>) -> Self {
        assert_eq!(colours.len(), self.levels.len());
        self.colours = colours;
        self
    }

    /// Halving chain: level `i+1` is the first half (by index) of level `i`.
    pub fn halving(universe: usize, start: &VertexSet, depth: usize) -> Result<Self> {
        let mut levels = vec![start.clone()];
        for _ in 1..depth {
            let prev = levels.last().expect("nonempty");
            let keep = prev.len().div_ceil(2);
            levels.push(VertexSet::from_iter(universe, prev.iter().take(keep)));
        }
        NestedFamily::new(levels)
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Level `i`, counted from 1.
    pub fn level(&self, i: usize) -> &VertexSet {
        &self.levels[i - 1]
    }

    pub fn levels(&self) -> &[VertexSet] {
        &self.levels
    }

    pub fn last(&self) -> &VertexSet {
        self.levels.last().expect("nonempty")
    }
}

/// Rejects a vertex set whose universe is not the host's vertex range.
pub(crate) fn same_universe(a: &VertexSet, g: &Graph) -> Result<()> {
    if a.universe() != g.n() {
        return Err(Error::DegenerateInput(format!(
            "vertex set over {} vertices used with a host of {}",
            a.universe(),
            g.n()
        )));
    }
    Ok(())
}

/// Equal halves of the host with many edges across. For an odd vertex count
/// the vertex of the larger side with fewest cross neighbours is dropped.
pub(crate) fn split_host(g: &Graph, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    let (s1, s2) = balanced_max_cut_partition(g, seed)?;
    let (mut big, small) = if s1.len() >= s2.len() { (s1, s2) } else { (s2, s1) };
    if big.len() > small.len() {
        let drop = big
            .iter()
            .min_by_key(|&v| (g.neighbors(v).intersection_len(&small), v))
            .expect("larger side is nonempty");
        big.remove(drop);
    }
    Ok((big.to_vec(), small.to_vec()))
}
