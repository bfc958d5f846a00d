//! Good/bad bookkeeping shared by the greedy embedders.
//!
//! A tracked set is good when the number of bad completions containing it
//! is strictly below a budget that grows geometrically as the set shrinks.
//! The ledger memoizes verdicts; [`GoodnessLedger::audit`] recomputes every
//! memoized verdict from scratch.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;

use crate::error::Result;
use crate::exact::binom;

/// `base^{s-size} · C(top, size-s)` for tracked sets of size `s ≤ size`.
///
/// Goodness is decided in integers as `bad · base^{size-s} < C(top, size-s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricBudget {
    pub base: u64,
    pub top: u64,
    pub size: usize,
}

impl GeometricBudget {
    pub fn allows(&self, s: usize, bad: u128) -> bool {
        debug_assert!(s <= self.size);
        let k = self.size - s;
        BigUint::from(bad) * num_traits::pow(BigUint::from(self.base), k) < binom(self.top, k as u64)
    }

    /// The budget as `"C / base^k"` text, for diagnostics.
    pub fn describe(&self, s: usize) -> String {
        let k = self.size - s;
        format!("{}/{}^{}", binom(self.top, k as u64), self.base, k)
    }
}

/// `(2n)^{s1+s2-2n} · C(m, n-s1) · C(m, n-s2)` for pairs of tracked sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairBudget {
    pub n: usize,
    pub m: u64,
}

impl PairBudget {
    pub fn allows(&self, s1: usize, s2: usize, bad: u128) -> bool {
        let k1 = self.n - s1;
        let k2 = self.n - s2;
        let scale = num_traits::pow(BigUint::from(2 * self.n as u64), k1 + k2);
        BigUint::from(bad) * scale < binom(self.m, k1 as u64) * binom(self.m, k2 as u64)
    }

    pub fn describe(&self, s1: usize, s2: usize) -> String {
        let (k1, k2) = (self.n - s1, self.n - s2);
        format!(
            "{}/{}^{}",
            binom(self.m, k1 as u64) * binom(self.m, k2 as u64),
            2 * self.n,
            k1 + k2
        )
    }
}

/// Memo of good/bad verdicts keyed by tracked set (plus whatever context the
/// caller folds into the key).
#[derive(Debug)]
pub struct GoodnessLedger<K> {
    memo: HashMap<K, bool>,
    evaluations: u64,
    lookups: u64,
}

impl<K> Default for GoodnessLedger<K> {
    fn default() -> Self {
        GoodnessLedger {
            memo: HashMap::new(),
            evaluations: 0,
            lookups: 0,
        }
    }
}

impl<K: Hash + Eq + Clone> GoodnessLedger<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// The memoized verdict for `key`, computing it with `eval` on first use.
    pub fn verdict(&mut self, key: &K, eval: impl FnOnce() -> Result<bool>) -> Result<bool> {
        self.lookups += 1;
        if let Some(&v) = self.memo.get(key) {
            return Ok(v);
        }
        let v = eval()?;
        self.evaluations += 1;
        self.memo.insert(key.clone(), v);
        Ok(v)
    }

    /// Recomputes every memoized verdict; returns the keys that disagree.
    pub fn audit(&self, mut eval: impl FnMut(&K) -> Result<bool>) -> Result<Vec<K>> {
        let mut bad = Vec::new();
        for (k, &v) in &self.memo {
            if eval(k)? != v {
                bad.push(k.clone());
            }
        }
        Ok(bad)
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// `(distinct evaluations, total lookups)`.
    pub fn usage(&self) -> (u64, u64) {
        (self.evaluations, self.lookups)
    }
}
