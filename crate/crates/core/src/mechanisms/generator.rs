use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::universe::{ConceptClass, Index, Instance, LanguageSpec, Sample};

/// Default number of unseen candidates a generator inspects before giving up.
pub const DEFAULT_SCAN_BUDGET: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorStrategy {
    /// Least unseen element of `⋂ {L_j : j in window, prefix ⊆ L_j}`.
    Intersection,
    /// Least unseen element of `L_{i*}` for the least consistent `i*` in the window.
    LeastConsistentIndex,
}

impl GeneratorStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorStrategy::Intersection => "intersection",
            GeneratorStrategy::LeastConsistentIndex => "least_consistent_index",
        }
    }
}

/// A generator in the limit. Its outputs are never elements of the prefix;
/// whether they lie in the target is measured by the caller.
#[derive(Clone, Debug)]
pub struct Generator {
    class: ConceptClass,
    strategy: GeneratorStrategy,
    scan_budget: u64,
}

impl Generator {
    pub fn new(class: ConceptClass, strategy: GeneratorStrategy) -> Self {
        Generator { class, strategy, scan_budget: DEFAULT_SCAN_BUDGET }
    }

    pub fn with_scan_budget(mut self, budget: u64) -> Self {
        self.scan_budget = budget.max(1);
        self
    }

    pub fn class(&self) -> &ConceptClass {
        &self.class
    }

    pub fn strategy(&self) -> GeneratorStrategy {
        self.strategy
    }

    fn propose<'a, L>(&self, sample: &Sample, consistent: L, excluded: &BTreeSet<Instance>) -> Result<Instance>
    where
        L: IntoIterator<Item = &'a LanguageSpec>,
    {
        let mut langs: Vec<&LanguageSpec> = consistent.into_iter().collect();
        if langs.is_empty() {
            return Err(Error::NoConsistentIndex);
        }
        if self.strategy == GeneratorStrategy::LeastConsistentIndex {
            langs.truncate(1);
        }
        sample
            .unseen()
            .filter(|x| !excluded.contains(x))
            .take(self.scan_budget as usize)
            .find(|&x| langs.iter().all(|l| l.contains(x)))
            .ok_or(Error::Exhausted { scanned: self.scan_budget })
    }
}

/// One output of `gen` on `prefix`, consulting the first `n_bound` indices
/// `{0, …, n_bound − 1}` of the class.
pub fn generate_next(gen: &Generator, prefix: &[Instance], n_bound: u64) -> Result<Instance> {
    if n_bound == 0 {
        return Err(Error::InvalidArgument("n_bound must be at least 1".into()));
    }
    let sample = Sample::from_slice(prefix);
    let mut consistent = Vec::new();
    for j in 0..n_bound {
        let j = Index::from(j);
        if !gen.class.in_range(&j) {
            break;
        }
        if gen.class.consistent(&j, &sample) {
            consistent.push(gen.class.language(&j)?);
        }
    }
    gen.propose(&sample, &consistent, &BTreeSet::new())
}

/// Incremental form of [`generate_next`] for long runs: inconsistency is
/// permanent once the prefix only grows, so consistent indices are pruned
/// per observation and new indices are examined once as the window widens.
#[derive(Clone, Debug)]
pub struct GenerationState<'g> {
    gen: &'g Generator,
    sample: Sample,
    consistent: BTreeMap<Index, LanguageSpec>,
    next_index: Index,
}

impl<'g> GenerationState<'g> {
    pub fn new(gen: &'g Generator) -> Self {
        GenerationState { gen, sample: Sample::new(), consistent: BTreeMap::new(), next_index: Index::default() }
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }

    pub fn observe(&mut self, x: Instance) {
        self.sample.insert(x);
        self.consistent.retain(|_, l| l.contains(x));
    }

    /// Widens the window to the first `n_bound` indices.
    fn widen(&mut self, n_bound: u64) -> Result<()> {
        let bound = Index::from(n_bound);
        while self.next_index < bound && self.gen.class.in_range(&self.next_index) {
            if self.gen.class.consistent(&self.next_index, &self.sample) {
                let lang = self.gen.class.language(&self.next_index)?;
                self.consistent.insert(self.next_index.clone(), lang);
            }
            self.next_index += Index::one();
        }
        Ok(())
    }

    /// Output on the current prefix with window `n_bound`; never returns a
    /// seen or excluded instance. `n_bound` must not shrink between calls.
    pub fn generate(&mut self, n_bound: u64, excluded: &BTreeSet<Instance>) -> Result<Instance> {
        if n_bound == 0 {
            return Err(Error::InvalidArgument("n_bound must be at least 1".into()));
        }
        self.widen(n_bound)?;
        self.gen.propose(&self.sample, self.consistent.values(), excluded)
    }
}
