use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;

use super::Instance;

/// A growing multiset of observed instances.
///
/// Besides membership it keeps the summary statistics the closed-form
/// learners need (minimum, gcd) and the set of *unseen* naturals below the
/// maximum as disjoint intervals, so that "least unseen element" queries do
/// not rescan the whole prefix.
#[derive(Clone, Debug, Default)]
pub struct Sample {
    seen: HashSet<Instance>,
    observations: u64,
    min: Option<Instance>,
    max: Option<Instance>,
    gcd: u64,
    // start -> end (inclusive) of unseen runs below `max`
    gaps: BTreeMap<Instance, Instance>,
}

impl Sample {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_slice(xs: &[Instance]) -> Self {
        let mut s = Self::new();
        for &x in xs {
            s.insert(x);
        }
        s
    }

    pub fn insert(&mut self, x: Instance) {
        self.observations += 1;
        self.gcd = self.gcd.gcd(&x);
        self.min = Some(self.min.map_or(x, |m| m.min(x)));
        if !self.seen.insert(x) {
            return;
        }
        match self.max {
            None => {
                if x > 0 {
                    self.gaps.insert(0, x - 1);
                }
                self.max = Some(x);
            }
            Some(m) if x > m => {
                if x > m + 1 {
                    self.gaps.insert(m + 1, x - 1);
                }
                self.max = Some(x);
            }
            Some(_) => {
                // x was a gap element: split its interval
                let (&start, &end) = self.gaps.range(..=x).next_back().expect("unseen element below max lies in a gap");
                debug_assert!(start <= x && x <= end);
                self.gaps.remove(&start);
                if start < x {
                    self.gaps.insert(start, x - 1);
                }
                if x < end {
                    self.gaps.insert(x + 1, end);
                }
            }
        }
    }

    pub fn contains(&self, x: Instance) -> bool {
        self.seen.contains(&x)
    }

    /// Number of observations, counting repeats.
    pub fn len(&self) -> u64 {
        self.observations
    }

    pub fn is_empty(&self) -> bool {
        self.observations == 0
    }

    pub fn distinct(&self) -> usize {
        self.seen.len()
    }

    pub fn min(&self) -> Option<Instance> {
        self.min
    }

    pub fn max(&self) -> Option<Instance> {
        self.max
    }

    /// gcd of all observations; 0 when every observation is 0 or the sample is empty.
    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    pub fn iter(&self) -> impl Iterator<Item = &Instance> {
        self.seen.iter()
    }

    /// Distinct observations in ascending order.
    pub fn sorted(&self) -> Vec<Instance> {
        let mut v: Vec<Instance> = self.seen.iter().copied().collect();
        v.sort_unstable();
        v
    }

    /// Every natural number not yet observed, ascending.
    pub fn unseen(&self) -> impl Iterator<Item = Instance> + '_ {
        let tail_start = self.max.map_or(Some(0), |m| m.checked_add(1));
        self.gaps.iter().flat_map(|(&s, &e)| s..=e).chain(tail_start.into_iter().flat_map(|t| t..=Instance::MAX))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn statistics() {
        let s = Sample::from_slice(&[6, 9, 6]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.distinct(), 2);
        assert_eq!(s.min(), Some(6));
        assert_eq!(s.gcd(), 3);
        assert_eq!(s.unseen().take(8).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4, 5, 7, 8]);
        assert_eq!(Sample::from_slice(&[0]).gcd(), 0);
        assert_eq!(Sample::new().unseen().next(), Some(0));
    }

    proptest! {
        #[test]
        fn unseen_matches_brute_force(xs in proptest::collection::vec(0u64..200, 0..80)) {
            let s = Sample::from_slice(&xs);
            let expected: Vec<u64> = (0..300).filter(|x| !xs.contains(x)).collect();
            let got: Vec<u64> = s.unseen().take_while(|&x| x < 300).collect();
            prop_assert_eq!(got, expected);
        }
    }
}
