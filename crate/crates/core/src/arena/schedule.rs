use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::universe::{Instance, LanguageSpec};

/// How a target language is presented, one element per position.
///
/// All kinds may repeat elements; the set of delivered elements is what has
/// to match the target. Finite targets are padded by cycling through their
/// elements once exhausted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum Schedule {
    /// Position `k` delivers the rank-`k` element.
    Fair,
    /// Fair order permuted inside consecutive blocks of `window` ranks.
    SeededShuffle { window: u64, seed: u64 },
    /// Fair for the first `after` positions, then re-delivers those elements.
    PaddedRepeat { after: u64 },
    /// Driven by the learner's conjectures; see `adversarial_superfinite_run`.
    AdversarialSuperfinite,
}

impl Schedule {
    pub fn name(&self) -> String {
        match self {
            Schedule::Fair => "fair".into(),
            Schedule::SeededShuffle { window, seed } => format!("shuffle(w={window},seed={seed})"),
            Schedule::PaddedRepeat { after } => format!("padded_repeat(after={after})"),
            Schedule::AdversarialSuperfinite => "adversarial_superfinite".into(),
        }
    }

    /// The enumeration of `target` this schedule produces.
    pub fn enumerate<'t>(&self, target: &'t LanguageSpec) -> Result<Enumeration<'t>> {
        let card = target.cardinality();
        if card == Some(0) {
            return Err(Error::InvalidArgument("the empty language has no enumeration".into()));
        }
        match self {
            Schedule::SeededShuffle { window: 0, .. } => {
                return Err(Error::InvalidArgument("shuffle window must be at least 1".into()))
            }
            Schedule::PaddedRepeat { after: 0 } => {
                return Err(Error::InvalidArgument("padded_repeat needs after >= 1".into()))
            }
            Schedule::AdversarialSuperfinite => {
                return Err(Error::InvalidArgument(
                    "the adversarial schedule is driven by a learner, not a fixed target".into(),
                ))
            }
            _ => {}
        }
        Ok(Enumeration { schedule: self.clone(), target, card, position: 0, block: Vec::new(), block_index: u64::MAX })
    }
}

/// Iterator over delivered instances. Ends early only if the target's
/// elements run past the `u64` instance space.
#[derive(Clone, Debug)]
pub struct Enumeration<'t> {
    schedule: Schedule,
    target: &'t LanguageSpec,
    card: Option<u64>,
    position: u64,
    block: Vec<u64>,
    block_index: u64,
}

impl Enumeration<'_> {
    fn rank_at(&mut self, k: u64) -> u64 {
        let fresh_limit = match (&self.schedule, self.card) {
            (Schedule::PaddedRepeat { after }, Some(c)) => (*after).min(c),
            (Schedule::PaddedRepeat { after }, None) => *after,
            (_, Some(c)) => c,
            (_, None) => u64::MAX,
        };
        if k >= fresh_limit {
            return (k - fresh_limit) % fresh_limit;
        }
        match self.schedule {
            Schedule::SeededShuffle { window, seed } => {
                let b = k / window;
                if b != self.block_index {
                    let start = b * window;
                    let end = start.saturating_add(window).min(fresh_limit);
                    self.block = (start..end).collect();
                    self.block.shuffle(&mut rng::substream(seed, b));
                    self.block_index = b;
                }
                self.block[(k - b * window) as usize]
            }
            _ => k,
        }
    }
}

impl Iterator for Enumeration<'_> {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        let k = self.position;
        self.position += 1;
        let rank = self.rank_at(k);
        self.target.enumerate_element(rank).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fair_delivers_ranks_in_order() {
        let t = LanguageSpec::Threshold(4);
        let got: Vec<u64> = Schedule::Fair.enumerate(&t).unwrap().take(3).collect();
        assert_eq!(got, vec![4, 5, 6]);
    }

    #[test]
    fn finite_targets_are_padded() {
        let t = LanguageSpec::finite_set([2, 5]);
        let got: Vec<u64> = Schedule::Fair.enumerate(&t).unwrap().take(5).collect();
        assert_eq!(got, vec![2, 5, 2, 5, 2]);
        let pad = Schedule::PaddedRepeat { after: 3 };
        let got: Vec<u64> = pad.enumerate(&LanguageSpec::All).unwrap().take(8).collect();
        assert_eq!(got, vec![0, 1, 2, 0, 1, 2, 0, 1]);
    }

    #[test]
    fn shuffle_permutes_within_windows_deterministically() {
        let t = LanguageSpec::cofinite([7]);
        let s = Schedule::SeededShuffle { window: 8, seed: 3 };
        let a: Vec<u64> = s.enumerate(&t).unwrap().take(64).collect();
        let b: Vec<u64> = s.enumerate(&t).unwrap().take(64).collect();
        assert_eq!(a, b);
        for w in 0..8 {
            let mut block: Vec<u64> = a[w * 8..(w + 1) * 8].to_vec();
            block.sort_unstable();
            let fair: Vec<u64> = (w as u64 * 8..(w as u64 + 1) * 8).map(|k| t.enumerate_element(k).unwrap()).collect();
            assert_eq!(block, fair);
        }
        assert_ne!(a, Schedule::Fair.enumerate(&t).unwrap().take(64).collect::<Vec<_>>());
    }

    #[test]
    fn invalid_schedules() {
        let t = LanguageSpec::All;
        assert!(Schedule::SeededShuffle { window: 0, seed: 1 }.enumerate(&t).is_err());
        assert!(Schedule::AdversarialSuperfinite.enumerate(&t).is_err());
        assert!(Schedule::Fair.enumerate(&LanguageSpec::finite_set([])).is_err());
    }

    #[test]
    fn json_shape() {
        let s = Schedule::SeededShuffle { window: 8, seed: 1 };
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"kind":"seeded_shuffle","params":{"window":8,"seed":1}}"#);
        assert_eq!(serde_json::to_string(&Schedule::Fair).unwrap(), r#"{"kind":"fair"}"#);
    }
}
