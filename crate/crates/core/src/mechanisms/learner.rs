use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::universe::{encode_subset, ClassKind, ConceptClass, Index, Instance, Sample};

/// A conjectured index, or ⊥ when the strategy has no consistent answer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Conjecture {
    Index(Index),
    Bottom,
}

impl Conjecture {
    pub fn index(&self) -> Option<&Index> {
        match self {
            Conjecture::Index(i) => Some(i),
            Conjecture::Bottom => None,
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conjecture::Index(i) => write!(f, "{i}"),
            Conjecture::Bottom => write!(f, "bot"),
        }
    }
}

/// How an identifier picks its conjecture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LearnerStrategy {
    /// Least `i ∈ {0..t}` with the sample inside `L_i` (`t` = observations).
    LeastWithinPrefix,
    /// Greatest consistent index: `min(sample)` on THRESHOLDS, `gcd(sample)`
    /// on MULTIPLES, and the greatest consistent `i ∈ {0..t}` elsewhere.
    Greatest,
    /// Ignores the data.
    ConstantIndex(Index),
    /// SUPERFINITE only: conjectures exactly the set observed so far.
    EchoSample,
}

impl LearnerStrategy {
    pub fn name(&self) -> String {
        match self {
            LearnerStrategy::LeastWithinPrefix => "least_within_prefix".into(),
            LearnerStrategy::Greatest => "greatest".into(),
            LearnerStrategy::ConstantIndex(i) => format!("constant({i})"),
            LearnerStrategy::EchoSample => "echo_sample".into(),
        }
    }
}

/// Built-in learner choices, as named in configs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    LeastWithinPrefix,
    Greatest,
    /// Always conjectures the index of ℕ.
    ConstantAll,
    EchoSample,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 4] =
        [LearnerKind::LeastWithinPrefix, LearnerKind::Greatest, LearnerKind::ConstantAll, LearnerKind::EchoSample];

    pub fn name(&self) -> &'static str {
        match self {
            LearnerKind::LeastWithinPrefix => "least_within_prefix",
            LearnerKind::Greatest => "greatest",
            LearnerKind::ConstantAll => "constant_all",
            LearnerKind::EchoSample => "echo_sample",
        }
    }

    pub fn build(&self, class: &ConceptClass) -> Result<Learner> {
        let strategy = match self {
            LearnerKind::LeastWithinPrefix => LearnerStrategy::LeastWithinPrefix,
            LearnerKind::Greatest => LearnerStrategy::Greatest,
            LearnerKind::ConstantAll => LearnerStrategy::ConstantIndex(
                class
                    .index_of(&crate::universe::LanguageSpec::All)
                    .ok_or_else(|| Error::InvalidArgument(format!("{class} does not contain the full space")))?,
            ),
            LearnerKind::EchoSample => LearnerStrategy::EchoSample,
        };
        Learner::new(class.clone(), strategy)
    }
}

/// A stateful identifier in the limit.
#[derive(Clone, Debug)]
pub struct Learner {
    class: ConceptClass,
    strategy: LearnerStrategy,
    sample: Sample,
    conjecture: Option<Conjecture>,
    mind_changes: u64,
}

impl Learner {
    pub fn new(class: ConceptClass, strategy: LearnerStrategy) -> Result<Self> {
        if strategy == LearnerStrategy::EchoSample && class.kind() != ClassKind::Superfinite {
            return Err(Error::InvalidArgument(format!("echo_sample learner needs SUPERFINITE, got {class}")));
        }
        Ok(Learner { class, strategy, sample: Sample::new(), conjecture: None, mind_changes: 0 })
    }

    pub fn class(&self) -> &ConceptClass {
        &self.class
    }

    pub fn strategy(&self) -> &LearnerStrategy {
        &self.strategy
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }

    pub fn conjecture(&self) -> Option<&Conjecture> {
        self.conjecture.as_ref()
    }

    pub fn mind_changes(&self) -> u64 {
        self.mind_changes
    }

    /// Appends `x` and returns the new conjecture.
    pub fn observe_and_conjecture(&mut self, x: Instance) -> Conjecture {
        self.sample.insert(x);
        let next = self.compute();
        if self.conjecture.as_ref().is_some_and(|c| *c != next) {
            self.mind_changes += 1;
        }
        self.conjecture = Some(next.clone());
        next
    }

    fn compute(&self) -> Conjecture {
        let t = self.sample.len();
        let consistent = |j: u64| self.class.consistent(&Index::from(j), &self.sample);
        let found = |j: Option<u64>| j.map_or(Conjecture::Bottom, |j| Conjecture::Index(j.into()));
        match &self.strategy {
            LearnerStrategy::LeastWithinPrefix => found((0..=t).find(|&j| consistent(j))),
            LearnerStrategy::Greatest => match self.class.kind() {
                ClassKind::Thresholds => found(self.sample.min()),
                ClassKind::Multiples => match self.sample.gcd() {
                    // only 0 observed: every period fits, no greatest exists
                    0 => Conjecture::Bottom,
                    g => found(Some(g - 1)),
                },
                _ => found((0..=t).rev().find(|&j| consistent(j))),
            },
            LearnerStrategy::ConstantIndex(i) => Conjecture::Index(i.clone()),
            LearnerStrategy::EchoSample => Conjecture::Index(encode_subset(&self.sample.sorted()) + BigUint::one()),
        }
    }
}

/// Feeds `x` to the learner; free-function form of
/// [`Learner::observe_and_conjecture`].
pub fn observe_and_conjecture(learner: &mut Learner, x: Instance) -> Conjecture {
    learner.observe_and_conjecture(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn run(class: ConceptClass, strategy: LearnerStrategy, xs: &[u64]) -> Learner {
        let mut l = Learner::new(class, strategy).unwrap();
        for &x in xs {
            l.observe_and_conjecture(x);
        }
        l
    }

    #[test]
    fn greatest_threshold_is_sample_min() {
        let l = run(ConceptClass::thresholds(), LearnerStrategy::Greatest, &[7, 4, 9]);
        assert_eq!(l.conjecture(), Some(&Conjecture::Index(4u32.into())));
        // oracle: scan every threshold up to the max sample
        let oracle = (0..=9u64).filter(|&i| [7, 4, 9].iter().all(|&x| x >= i)).max().unwrap();
        assert_eq!(oracle, 4);
    }

    #[test]
    fn greatest_multiples_is_gcd() {
        let l = run(ConceptClass::multiples(), LearnerStrategy::Greatest, &[6, 9]);
        // period 3 sits at index 2
        assert_eq!(l.conjecture(), Some(&Conjecture::Index(2u32.into())));
        let oracle = (1..=9u64).filter(|p| 6 % p == 0 && 9 % p == 0).max().unwrap();
        assert_eq!(oracle, 3);
        let zero = run(ConceptClass::multiples(), LearnerStrategy::Greatest, &[0, 0]);
        assert_eq!(zero.conjecture(), Some(&Conjecture::Bottom));
    }

    #[test]
    fn least_within_prefix_on_superfinite_is_all() {
        let l = run(ConceptClass::superfinite(), LearnerStrategy::LeastWithinPrefix, &[3, 1, 4, 1, 5]);
        assert_eq!(l.conjecture(), Some(&Conjecture::Index(0u32.into())));
        assert_eq!(l.mind_changes(), 0);
    }

    #[test]
    fn mind_changes_count_index_changes() {
        let l = run(ConceptClass::thresholds(), LearnerStrategy::Greatest, &[9, 9, 7, 8, 3, 3]);
        assert_eq!(l.mind_changes(), 2);
    }

    #[test]
    fn echo_requires_superfinite() {
        assert!(Learner::new(ConceptClass::thresholds(), LearnerStrategy::EchoSample).is_err());
        let l = run(ConceptClass::superfinite(), LearnerStrategy::EchoSample, &[0, 2]);
        assert_eq!(l.conjecture(), Some(&Conjecture::Index(6u32.into())));
    }

    #[test]
    fn greatest_falls_back_to_prefix_scan() {
        let l = run(ConceptClass::superfinite(), LearnerStrategy::Greatest, &[50]);
        // indices {0, 1}: only 0 (ℕ) contains 50
        assert_eq!(l.conjecture(), Some(&Conjecture::Index(0u32.into())));
    }

    proptest! {
        #[test]
        fn multiples_gcd_matches_scan(xs in proptest::collection::vec(1u64..300, 1..8)) {
            let l = run(ConceptClass::multiples(), LearnerStrategy::Greatest, &xs);
            let max = *xs.iter().max().unwrap();
            let scan = (1..=max).filter(|p| xs.iter().all(|x| x % p == 0)).max().unwrap();
            prop_assert_eq!(l.conjecture(), Some(&Conjecture::Index((scan - 1).into())));
        }

        #[test]
        fn conjecture_is_consistent(
            target in 0u64..64,
            xs in proptest::collection::vec(0u64..64, 1..30),
        ) {
            for (class, strategy) in [
                (ConceptClass::thresholds(), LearnerStrategy::Greatest),
                (ConceptClass::multiples(), LearnerStrategy::Greatest),
                (ConceptClass::cofinite(), LearnerStrategy::LeastWithinPrefix),
                (ConceptClass::superfinite(), LearnerStrategy::LeastWithinPrefix),
                (ConceptClass::superfinite(), LearnerStrategy::Greatest),
            ] {
                let lang = class.language(&Index::from(target)).unwrap();
                let data: Vec<u64> = xs.iter().copied().filter(|&x| lang.contains(x)).collect();
                let mut l = Learner::new(class.clone(), strategy).unwrap();
                for (t, &x) in data.iter().enumerate() {
                    if let Conjecture::Index(i) = l.observe_and_conjecture(x) {
                        let conj = class.language(&i).unwrap();
                        prop_assert!(data[..=t].iter().all(|&y| conj.contains(y)));
                    }
                }
            }
        }
    }
}
