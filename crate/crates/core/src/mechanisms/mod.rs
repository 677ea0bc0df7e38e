//! Mechanisms of the unified template: total hypotheses, fuel-bounded
//! deciders, identifiers in the limit, generators in the limit, and ERM.

mod generator;
mod hypothesis;
mod learner;

pub use generator::{generate_next, GenerationState, Generator, GeneratorStrategy, DEFAULT_SCAN_BUDGET};
pub use hypothesis::{decide_bounded, BoundedDecider, Decision, Hypothesis, HypothesisDescriptor};
pub use learner::{observe_and_conjecture, Conjecture, Learner, LearnerKind, LearnerStrategy};

use crate::error::{Error, Result};
use crate::universe::Instance;

/// Number of labeled points `h` gets wrong.
pub fn empirical_errors(h: &Hypothesis, sample: &[(Instance, bool)]) -> u64 {
    sample.iter().filter(|&&(x, y)| h.eval(x) != y).count() as u64
}

/// Empirical risk minimization: the least index whose error count on
/// `sample` is minimal. An empty sample selects index 0.
pub fn erm(hypotheses: &[Hypothesis], sample: &[(Instance, bool)]) -> Result<usize> {
    let weighted: Vec<(Instance, bool, u64)> = sample.iter().map(|&(x, y)| (x, y, 1)).collect();
    erm_weighted(hypotheses, &weighted)
}

/// [`erm`] over a sample given as `(instance, label, multiplicity)` triples.
pub fn erm_weighted(hypotheses: &[Hypothesis], sample: &[(Instance, bool, u64)]) -> Result<usize> {
    if hypotheses.is_empty() {
        return Err(Error::InvalidArgument("erm needs at least one hypothesis".into()));
    }
    let mut best = (u64::MAX, 0);
    for (j, h) in hypotheses.iter().enumerate() {
        let errors: u64 = sample.iter().filter(|&&(x, y, _)| h.eval(x) != y).map(|&(_, _, c)| c).sum();
        if errors < best.0 {
            best = (errors, j);
        }
    }
    Ok(best.1)
}
