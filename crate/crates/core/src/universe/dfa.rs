use std::collections::{BTreeMap, VecDeque};

use super::Instance;
use crate::error::{Error, Result};

/// Longest suffix after the leading `1` of a 64-bit instance.
const MAX_SUFFIX: usize = 63;

/// A complete DFA over `{0, 1}` with start state 0.
///
/// Instances are read through their canonical binary expansion, so the
/// automaton only ever sees the string `"0"` or strings starting with `1`.
/// Two automata denote the same language over ℕ iff they agree on that
/// domain, which is what [`Dfa::canonical_signature`] captures.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    transitions: Vec<[u32; 2]>,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(transitions: Vec<[u32; 2]>, accepting: Vec<bool>) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::InvalidLanguage("dfa needs at least one state".into()));
        }
        if transitions.len() != accepting.len() {
            return Err(Error::InvalidLanguage(format!(
                "dfa has {} transition rows but {} accepting flags",
                transitions.len(),
                accepting.len()
            )));
        }
        let n = transitions.len() as u32;
        if let Some((q, _)) = transitions.iter().enumerate().find(|(_, row)| row.iter().any(|&t| t >= n)) {
            return Err(Error::InvalidLanguage(format!("dfa state {q} has a transition to a non-existent state")));
        }
        Ok(Dfa { transitions, accepting })
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn transitions(&self) -> &[[u32; 2]] {
        &self.transitions
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    fn step(&self, q: usize, bit: u8) -> usize {
        self.transitions[q][bit as usize] as usize
    }

    /// Runs the automaton on an arbitrary bit string.
    pub fn accepts_bits(&self, bits: &[u8]) -> bool {
        let q = bits.iter().fold(0usize, |q, &b| self.step(q, b & 1));
        self.accepting[q]
    }

    pub fn accepts(&self, x: Instance) -> bool {
        if x == 0 {
            return self.accepting[self.step(0, 0)];
        }
        let width = 64 - x.leading_zeros();
        let q = (0..width).rev().fold(0usize, |q, b| self.step(q, ((x >> b) & 1) as u8));
        self.accepting[q]
    }

    fn suffix_start(&self) -> usize {
        self.step(0, 1)
    }

    fn accepts_zero(&self) -> bool {
        self.accepting[self.step(0, 0)]
    }

    /// `counts[len][q]`: accepted strings of length `len` read from state `q`.
    fn suffix_counts(&self) -> Vec<Vec<u64>> {
        let n = self.num_states();
        let mut counts = vec![vec![0u64; n]; MAX_SUFFIX + 1];
        counts[0] = self.accepting.iter().map(|&a| a as u64).collect();
        for len in 1..=MAX_SUFFIX {
            for q in 0..n {
                let c0 = counts[len - 1][self.step(q, 0)];
                let c1 = counts[len - 1][self.step(q, 1)];
                counts[len][q] = c0.saturating_add(c1);
            }
        }
        counts
    }

    /// `None` if the language (as a subset of ℕ) is infinite.
    pub fn cardinality(&self) -> Option<u64> {
        let n = self.num_states();
        let counts = self.suffix_counts();
        let s1 = self.suffix_start();
        // A regular language is infinite iff it has a word with length in [n, 2n).
        if (n..2 * n).any(|len| len <= MAX_SUFFIX && counts[len][s1] > 0) {
            return None;
        }
        let total: u64 = (0..n.min(MAX_SUFFIX + 1)).map(|len| counts[len][s1]).sum();
        Some(total + self.accepts_zero() as u64)
    }

    /// The `k`-th smallest accepted instance, found by counting rather than
    /// scanning so that sparse languages (e.g. powers of two) stay cheap.
    pub fn kth_element(&self, k: u64) -> Option<Instance> {
        let mut k = k;
        if self.accepts_zero() {
            if k == 0 {
                return Some(0);
            }
            k -= 1;
        }
        let counts = self.suffix_counts();
        let s1 = self.suffix_start();
        for len in 0..=MAX_SUFFIX {
            let c = counts[len][s1];
            if k >= c {
                k -= c;
                continue;
            }
            let mut value: u64 = 1;
            let mut q = s1;
            for remaining in (1..=len).rev() {
                let zero = self.step(q, 0);
                let c0 = counts[remaining - 1][zero];
                if k < c0 {
                    value <<= 1;
                    q = zero;
                } else {
                    k -= c0;
                    value = (value << 1) | 1;
                    q = self.step(q, 1);
                }
            }
            return Some(value);
        }
        None
    }

    /// A canonical description of the language this automaton denotes over
    /// ℕ: whether `0` is accepted, followed by the minimal automaton of the
    /// suffix language after the leading `1`, numbered in breadth-first order.
    pub fn canonical_signature(&self) -> Vec<u32> {
        let s1 = self.suffix_start();
        // reachable states from s1
        let mut reach = vec![false; self.num_states()];
        let mut order = vec![s1];
        reach[s1] = true;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for b in 0..2 {
                let t = self.step(q, b);
                if !reach[t] {
                    reach[t] = true;
                    order.push(t);
                }
            }
        }
        // Moore partition refinement over reachable states.
        let mut class: Vec<u32> = vec![0; self.num_states()];
        for &q in &order {
            class[q] = self.accepting[q] as u32;
        }
        let mut num_classes = 0;
        loop {
            let mut keys: BTreeMap<(u32, u32, u32), u32> = BTreeMap::new();
            let mut next = class.clone();
            for &q in &order {
                let key = (class[q], class[self.step(q, 0)], class[self.step(q, 1)]);
                let len = keys.len() as u32;
                next[q] = *keys.entry(key).or_insert(len);
            }
            let count = keys.len();
            class = next;
            if count == num_classes {
                break;
            }
            num_classes = count;
        }
        // canonical BFS numbering of the quotient automaton
        let mut rep: BTreeMap<u32, usize> = BTreeMap::new();
        for &q in &order {
            rep.entry(class[q]).or_insert(q);
        }
        let mut number: BTreeMap<u32, u32> = BTreeMap::new();
        let mut queue = VecDeque::from([class[s1]]);
        number.insert(class[s1], 0);
        let mut sig = vec![self.accepts_zero() as u32];
        while let Some(c) = queue.pop_front() {
            let q = rep[&c];
            sig.push(self.accepting[q] as u32);
            for b in 0..2 {
                let tc = class[self.step(q, b)];
                let len = number.len() as u32;
                let id = *number.entry(tc).or_insert_with(|| {
                    queue.push_back(tc);
                    len
                });
                sig.push(id);
            }
        }
        sig
    }

    /// Language equality over ℕ.
    pub fn equivalent(&self, other: &Dfa) -> bool {
        self.canonical_signature() == other.canonical_signature()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::encode_bits;

    fn even_ones() -> Dfa {
        // accepts strings with an even number of 1s
        Dfa::new(vec![[0, 1], [1, 0]], vec![true, false]).unwrap()
    }

    fn ends_in_zero() -> Dfa {
        Dfa::new(vec![[1, 0], [1, 0]], vec![false, true]).unwrap()
    }

    #[test]
    fn rejects_malformed() {
        assert!(Dfa::new(vec![], vec![]).is_err());
        assert!(Dfa::new(vec![[0, 2]], vec![true]).is_err());
        assert!(Dfa::new(vec![[0, 0]], vec![true, false]).is_err());
    }

    #[test]
    fn accepts_matches_bit_simulation() {
        let d = even_ones();
        for x in 0..2000u64 {
            assert_eq!(d.accepts(x), d.accepts_bits(&encode_bits(x)), "x = {x}");
            assert_eq!(d.accepts(x), x.count_ones() % 2 == 0);
        }
        let e = ends_in_zero();
        for x in 0..2000u64 {
            assert_eq!(e.accepts(x), x % 2 == 0);
        }
    }

    #[test]
    fn kth_element_matches_scan() {
        for d in [even_ones(), ends_in_zero()] {
            let members: Vec<u64> = (0..5000u64).filter(|&x| d.accepts(x)).collect();
            for (k, &x) in members.iter().enumerate().take(1000) {
                assert_eq!(d.kth_element(k as u64), Some(x));
            }
        }
    }

    #[test]
    fn sparse_language_enumerates_by_counting() {
        // 1 0*: powers of two
        let d = Dfa::new(vec![[2, 1], [1, 2], [2, 2]], vec![false, true, false]).unwrap();
        assert_eq!(d.kth_element(0), Some(1));
        assert_eq!(d.kth_element(40), Some(1 << 40));
        assert_eq!(d.kth_element(64), None);
    }

    #[test]
    fn cardinality_and_equivalence() {
        assert_eq!(even_ones().cardinality(), None);
        let only_one = Dfa::new(vec![[2, 1], [2, 2], [2, 2]], vec![false, true, false]).unwrap();
        assert_eq!(only_one.cardinality(), Some(1));
        let empty = Dfa::new(vec![[0, 0]], vec![false]).unwrap();
        assert_eq!(empty.cardinality(), Some(0));
        // same language with a redundant state
        let padded = Dfa::new(vec![[0, 1], [1, 2], [2, 1]], vec![true, false, true]).unwrap();
        assert!(padded.equivalent(&even_ones()));
        assert!(!even_ones().equivalent(&ends_in_zero()));
    }
}
