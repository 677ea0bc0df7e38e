use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::universe::{Instance, LanguageSpec};

/// A total binary predicate `X → {0,1}`: a language's characteristic
/// function with an optional finite set of pointwise overrides.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "HypothesisDescriptor", into = "HypothesisDescriptor")]
pub struct Hypothesis {
    base: LanguageSpec,
    overrides: BTreeMap<Instance, bool>,
}

impl Hypothesis {
    pub fn new(base: LanguageSpec) -> Self {
        Hypothesis { base, overrides: BTreeMap::new() }
    }

    pub fn constant(bit: bool) -> Self {
        if bit {
            Self::new(LanguageSpec::All)
        } else {
            Self::new(LanguageSpec::finite_set([]))
        }
    }

    pub fn with_override(mut self, x: Instance, bit: bool) -> Self {
        self.overrides.insert(x, bit);
        self
    }

    /// Flips the output at `x`.
    pub fn flipped_at(self, x: Instance) -> Self {
        let bit = !self.eval(x);
        self.with_override(x, bit)
    }

    pub fn eval(&self, x: Instance) -> bool {
        match self.overrides.get(&x) {
            Some(&b) => b,
            None => self.base.contains(x),
        }
    }

    pub fn base(&self) -> &LanguageSpec {
        &self.base
    }

    pub fn overrides(&self) -> &BTreeMap<Instance, bool> {
        &self.overrides
    }

    pub fn step_cost(&self, x: Instance) -> u64 {
        let lookup = 1 + (usize::BITS - self.overrides.len().leading_zeros()) as u64;
        lookup + self.base.step_cost(x)
    }
}

impl From<LanguageSpec> for Hypothesis {
    fn from(l: LanguageSpec) -> Self {
        Hypothesis::new(l)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisDescriptor {
    pub language: LanguageSpec,
    #[serde(default)]
    pub overrides: Vec<(Instance, bool)>,
}

impl From<HypothesisDescriptor> for Hypothesis {
    fn from(d: HypothesisDescriptor) -> Self {
        Hypothesis { base: d.language, overrides: d.overrides.into_iter().collect() }
    }
}

impl From<Hypothesis> for HypothesisDescriptor {
    fn from(h: Hypothesis) -> Self {
        HypothesisDescriptor { language: h.base, overrides: h.overrides.into_iter().collect() }
    }
}

/// Outcome of a fuel-bounded evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Halted(bool),
    Diverged,
}

/// A decider that halts with `base(x)` everywhere except on `diverge_on`,
/// where it runs until its fuel is gone. An empty divergence set models a
/// total machine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundedDecider {
    pub base: Hypothesis,
    #[serde(default)]
    pub diverge_on: BTreeSet<Instance>,
}

impl BoundedDecider {
    pub fn total(base: Hypothesis) -> Self {
        BoundedDecider { base, diverge_on: BTreeSet::new() }
    }

    pub fn new(base: Hypothesis, diverge_on: impl IntoIterator<Item = Instance>) -> Self {
        BoundedDecider { base, diverge_on: diverge_on.into_iter().collect() }
    }

    pub fn is_total(&self) -> bool {
        self.diverge_on.is_empty()
    }

    pub fn decide(&self, x: Instance, fuel: u64) -> Decision {
        if self.diverge_on.contains(&x) || self.base.step_cost(x) > fuel {
            Decision::Diverged
        } else {
            Decision::Halted(self.base.eval(x))
        }
    }
}

pub fn decide_bounded(d: &BoundedDecider, x: Instance, fuel: u64) -> Decision {
    d.decide(x, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_take_precedence() {
        let h = Hypothesis::new(LanguageSpec::Threshold(5)).flipped_at(5);
        assert!(!h.eval(5));
        assert!(h.eval(6));
        assert!(!h.eval(4));
        assert!(!Hypothesis::constant(false).eval(3));
    }

    #[test]
    fn decider_examples() {
        let base = Hypothesis::new(LanguageSpec::Threshold(3));
        let total = BoundedDecider::total(base.clone());
        assert_eq!(decide_bounded(&total, 7, 100), Decision::Halted(true));
        let partial = BoundedDecider::new(base, [3]);
        for fuel in [1, 100, u64::MAX] {
            assert_eq!(decide_bounded(&partial, 3, fuel), Decision::Diverged);
        }
        assert_eq!(decide_bounded(&partial, 4, 100), Decision::Halted(true));
        assert_eq!(decide_bounded(&partial, 2, 100), Decision::Halted(false));
    }

    #[test]
    fn insufficient_fuel_diverges() {
        let d = BoundedDecider::total(Hypothesis::new(LanguageSpec::cofinite(0..1000)));
        assert_eq!(d.decide(5, 1), Decision::Diverged);
        assert_eq!(d.decide(5, 100), Decision::Halted(false));
    }

    #[test]
    fn hypothesis_json() {
        let h = Hypothesis::new(LanguageSpec::Threshold(5)).with_override(5, false);
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"language":{"kind":"threshold","params":{"min":5}},"overrides":[[5,false]]}"#);
        assert_eq!(serde_json::from_str::<Hypothesis>(&s).unwrap(), h);
    }
}
