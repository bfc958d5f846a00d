//! Vertex-by-vertex greedy shared by the degenerate, arrangeable and
//! chromatic embedders.
//!
//! Each pattern vertex `w` has a target set and a context `(ground, measure)`.
//! Images of the earlier neighbours of `w` lie in `ground`; `w` itself lands
//! in `measure`. A set `S ⊆ ground` is bad-counted by the number of
//! `size`-sets `T` with `S ⊆ T ⊆ ground` and `|N(T) ∩ measure| < x`, and is
//! good when that count fits the context's geometric budget.

use rand::seq::IndexedRandom;

use crate::drc::count_bad_subsets;
use crate::embed::ledger::{GeometricBudget, GoodnessLedger};
use crate::embed::search::{backtrack, Constraints};
use crate::embed::{finish, Checks, Embedded, Rigor, Trace};
use crate::error::{Error, Result};
use crate::exact::binom;
use crate::generators::rng_from_seed;
use crate::graph::{Contract, Embedding, Graph};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug)]
pub(crate) struct Context {
    pub ground: VertexSet,
    pub measure: VertexSet,
    pub x: usize,
    pub budget: GeometricBudget,
}

pub(crate) struct Leveled<'a> {
    pub pattern: &'a Graph,
    pub host: &'a Graph,
    pub order: Vec<usize>,
    pub targets: Vec<VertexSet>,
    pub contexts: Vec<Context>,
    pub context_of: Vec<usize>,
    pub enum_budget: u64,
    pub seed: Option<u64>,
}

pub(crate) struct Run {
    /// `None` when some step had no admissible vertex.
    pub map: Option<Vec<usize>>,
    pub trace: Trace,
}

impl Leveled<'_> {
    /// Targets of earlier neighbours must sit inside the later vertex's ground.
    pub fn validate(&self) -> Result<()> {
        let n = self.pattern.n();
        if self.order.len() != n || self.targets.len() != n || self.context_of.len() != n {
            return Err(Error::DegenerateInput("per-vertex data does not cover the pattern".into()));
        }
        let pos = self.positions();
        for (u, w) in self.pattern.edges() {
            let (first, later) = if pos[u] < pos[w] { (u, w) } else { (w, u) };
            let ctx = &self.contexts[self.context_of[later]];
            if !self.targets[first].is_subset(&ctx.ground) {
                return Err(Error::Precondition(format!(
                    "target of vertex {first} is not inside the ground set of its later neighbour {later}"
                )));
            }
        }
        Ok(())
    }

    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Bad `size`-sets of context `c` containing the sorted set `s`.
    pub fn bad_count(&self, c: usize, s: &[usize]) -> Result<u128> {
        let ctx = &self.contexts[c];
        let size = ctx.budget.size;
        if s.len() > size {
            return Err(Error::DegenerateInput(format!(
                "tracked set of size {} exceeds the set size {size}",
                s.len()
            )));
        }
        let mut base = ctx.measure.clone();
        for &v in s {
            base.intersect_with(self.host.neighbors(v));
        }
        let k = size - s.len();
        if k == 0 {
            return Ok(u128::from(base.len() < ctx.x));
        }
        let mut rest = ctx.ground.clone();
        for &v in s {
            rest.remove(v);
        }
        let total = binom(rest.len() as u64, k as u64);
        if total > self.enum_budget.into() {
            return Err(Error::budget(
                format!("counting bad {k}-extensions in a {}-set", rest.len()),
                total,
                self.enum_budget,
            ));
        }
        let rows: Vec<VertexSet> = rest
            .iter()
            .map(|u| self.host.neighbors(u).intersection(&base))
            .collect();
        Ok(count_bad_subsets(&rows, self.host.n(), k, ctx.x))
    }

    pub fn is_good_fresh(&self, c: usize, s: &[usize]) -> Result<bool> {
        Ok(self.contexts[c].budget.allows(s.len(), self.bad_count(c, s)?))
    }

    pub fn run(&self) -> Result<Run> {
        self.validate()?;
        let n = self.pattern.n();
        let pos = self.positions();
        let mut ledger: GoodnessLedger<(usize, Vec<usize>)> = GoodnessLedger::new();
        let mut rng = self.seed.map(rng_from_seed);
        let mut f: Vec<Option<usize>> = vec![None; n];
        let mut used = VertexSet::empty(self.host.n());
        let mut trace = Trace::default();

        for (step, &v) in self.order.iter().enumerate() {
            let mut cand = self.targets[v].difference(&used);
            for u in self.pattern.neighbors(v).iter() {
                if let Some(x) = f[u] {
                    cand.intersect_with(self.host.neighbors(x));
                }
            }
            // Tracked sets of the later neighbours of v, without repeats.
            let mut tracked: Vec<(usize, Vec<usize>)> = Vec::new();
            for w in self.pattern.neighbors(v).iter() {
                if pos[w] <= step {
                    continue;
                }
                let mut s: Vec<usize> = self
                    .pattern
                    .neighbors(w)
                    .iter()
                    .filter_map(|u| f[u])
                    .collect();
                s.sort_unstable();
                let key = (self.context_of[w], s);
                if !tracked.contains(&key) {
                    tracked.push(key);
                }
            }
            let mut admissible = Vec::new();
            let mut excluded = 0;
            for c in cand.iter() {
                let mut ok = true;
                for (ctx, s) in &tracked {
                    let mut t = s.clone();
                    let at = t.binary_search(&c).unwrap_or_else(|e| e);
                    t.insert(at, c);
                    let key = (*ctx, t);
                    if !ledger.verdict(&key, || self.is_good_fresh(key.0, &key.1))? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    admissible.push(c);
                } else {
                    excluded += 1;
                }
            }
            trace.excluded.push(excluded);
            trace.choices.push(admissible.len());
            let pick = match &mut rng {
                Some(r) => admissible.choose(r).copied(),
                None => admissible.first().copied(),
            };
            let Some(c) = pick else {
                return Ok(Run { map: None, trace });
            };
            f[v] = Some(c);
            used.insert(c);
        }
        if !ledger.audit(|(c, s)| self.is_good_fresh(*c, s))?.is_empty() {
            return Err(Error::InvalidEmbedding(
                "internal error: memoized goodness verdict disagrees with recount".into(),
            ));
        }
        Ok(Run {
            map: Some(f.into_iter().map(|x| x.expect("every vertex placed")).collect()),
            trace,
        })
    }

    /// Backtracking over the hard constraints only.
    pub fn search(&self, nodes: u64) -> Option<Vec<usize>> {
        let c = Constraints {
            pattern: self.pattern,
            host: self.host,
            second: None,
            targets: self.targets.clone(),
        };
        backtrack(&c, &self.order, nodes)
    }

    /// Runs the greedy, falls back to search in best-effort mode, and passes
    /// the result through the final validation.
    pub fn conclude(
        &self,
        mut checks: Checks,
        contract: &Contract<'_>,
        exclusion_cap: usize,
        search_nodes: u64,
    ) -> Result<Embedded> {
        let run = self.run()?;
        let worst = run.trace.excluded.iter().copied().max().unwrap_or(0);
        checks.note(
            "per-step exclusion within cap",
            worst <= exclusion_cap,
            format!("max excluded {worst}, cap {exclusion_cap}"),
        );
        let (map, fallback) = match run.map {
            Some(m) => (m, false),
            None if checks.rigor() == Rigor::Strict => {
                return Err(Error::EmbeddingFailed(format!(
                    "no admissible vertex at step {}",
                    run.trace.choices.len()
                )))
            }
            None => match self.search(search_nodes) {
                Some(m) => (m, true),
                None => {
                    return Err(Error::EmbeddingFailed(
                        "greedy stuck and bounded search found no copy".into(),
                    ))
                }
            },
        };
        finish(
            self.pattern,
            self.host,
            Embedding::new(map, contract.mode()),
            contract,
            checks,
            run.trace,
            fallback,
        )
    }
}
