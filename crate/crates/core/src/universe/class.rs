use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::dfa::Dfa;
use super::sample::Sample;
use super::spec::{FiniteSubset, LanguageSpec};
use super::{decode_subset, encode_subset, Index, Instance};
use crate::error::{Error, Result};

/// Largest automaton size accepted by `REGULAR_SMALL`. Four states would
/// already mean enumerating about a million raw automata.
pub const MAX_REGULAR_STATES: u32 = 3;

/// Which family of languages a [`ConceptClass`] indexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", deny_unknown_fields)]
pub enum ClassKind {
    /// `i ↦ Threshold(i)`
    #[serde(rename = "thresholds")]
    Thresholds,
    /// `i ↦ Multiples(i + 1)`
    #[serde(rename = "multiples")]
    Multiples,
    /// `i ↦ CoFinite(decode(i))`; index 0 is ℕ.
    #[serde(rename = "cofinite")]
    CoFinite,
    /// `0 ↦ ℕ`, `i + 1 ↦ FiniteSet(decode(i))`.
    #[serde(rename = "superfinite")]
    Superfinite,
    /// Distinct languages of complete binary DFAs with at most `max_states`
    /// states, in canonical enumeration order.
    #[serde(rename = "regular_small")]
    RegularSmall { max_states: u32 },
}

/// An effectively indexed concept class.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ClassKind", into = "ClassKind")]
pub struct ConceptClass {
    kind: ClassKind,
    regular: Option<Arc<RegularIndex>>,
}

#[derive(Debug)]
struct RegularIndex {
    automata: Vec<Dfa>,
    by_signature: HashMap<Vec<u32>, usize>,
}

impl RegularIndex {
    /// Enumerates automata by state count, then by the transition table read
    /// as a base-`n` numeral (state 0 on `0` most significant), then by the
    /// accepting-set bitmask; keeps the first automaton of each language.
    fn build(max_states: u32) -> Self {
        let mut automata = Vec::new();
        let mut by_signature = HashMap::new();
        for n in 1..=max_states as usize {
            let digits = 2 * n;
            let total = (n as u64).pow(digits as u32);
            for code in 0..total {
                let mut c = code;
                let mut flat = vec![0u32; digits];
                for d in (0..digits).rev() {
                    flat[d] = (c % n as u64) as u32;
                    c /= n as u64;
                }
                let transitions: Vec<[u32; 2]> = flat.chunks(2).map(|p| [p[0], p[1]]).collect();
                for mask in 0..(1u32 << n) {
                    let accepting = (0..n).map(|q| mask >> q & 1 == 1).collect();
                    let dfa = Dfa::new(transitions.clone(), accepting).expect("enumerated automata are complete");
                    let sig = dfa.canonical_signature();
                    if let std::collections::hash_map::Entry::Vacant(e) = by_signature.entry(sig) {
                        e.insert(automata.len());
                        automata.push(dfa);
                    }
                }
            }
        }
        RegularIndex { automata, by_signature }
    }
}

impl TryFrom<ClassKind> for ConceptClass {
    type Error = Error;

    fn try_from(kind: ClassKind) -> Result<Self> {
        ConceptClass::new(kind)
    }
}

impl From<ConceptClass> for ClassKind {
    fn from(c: ConceptClass) -> Self {
        c.kind
    }
}

impl PartialEq for ConceptClass {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl fmt::Display for ConceptClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ClassKind::Thresholds => write!(f, "THRESHOLDS"),
            ClassKind::Multiples => write!(f, "MULTIPLES"),
            ClassKind::CoFinite => write!(f, "COFINITE"),
            ClassKind::Superfinite => write!(f, "SUPERFINITE"),
            ClassKind::RegularSmall { max_states } => write!(f, "REGULAR_SMALL({max_states})"),
        }
    }
}

/// Canonical representative of languages that several variants can denote.
fn normalize(lang: &LanguageSpec) -> LanguageSpec {
    match lang {
        LanguageSpec::Threshold(0) => LanguageSpec::All,
        LanguageSpec::Multiples(p) if p.get() == 1 => LanguageSpec::All,
        LanguageSpec::CoFinite(ex) if ex.is_empty() => LanguageSpec::All,
        LanguageSpec::Lookup(t) => {
            let exceptions = t.table.iter().filter(|(_, &b)| b != t.default).map(|(&x, _)| x);
            if t.default {
                normalize(&LanguageSpec::CoFinite(FiniteSubset::new(exceptions)))
            } else {
                LanguageSpec::FiniteSet(FiniteSubset::new(exceptions))
            }
        }
        other => other.clone(),
    }
}

fn small_index(i: &Index) -> Option<u64> {
    i.to_u64()
}

impl ConceptClass {
    pub fn new(kind: ClassKind) -> Result<Self> {
        let regular = match kind {
            ClassKind::RegularSmall { max_states } => {
                if max_states == 0 || max_states > MAX_REGULAR_STATES {
                    return Err(Error::InvalidArgument(format!(
                        "regular_small max_states must be in 1..={MAX_REGULAR_STATES}, got {max_states}"
                    )));
                }
                Some(Arc::new(RegularIndex::build(max_states)))
            }
            _ => None,
        };
        Ok(ConceptClass { kind, regular })
    }

    pub fn thresholds() -> Self {
        ConceptClass { kind: ClassKind::Thresholds, regular: None }
    }

    pub fn multiples() -> Self {
        ConceptClass { kind: ClassKind::Multiples, regular: None }
    }

    pub fn cofinite() -> Self {
        ConceptClass { kind: ClassKind::CoFinite, regular: None }
    }

    pub fn superfinite() -> Self {
        ConceptClass { kind: ClassKind::Superfinite, regular: None }
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    /// Number of languages for finite index ranges, `None` for ℕ-indexed classes.
    pub fn size(&self) -> Option<usize> {
        self.regular.as_ref().map(|r| r.automata.len())
    }

    /// Whether `i` lies in the index range. Threshold and multiples
    /// parameters are instances, so their indices are capped at `u64`.
    pub fn in_range(&self, i: &Index) -> bool {
        match self.kind {
            ClassKind::Thresholds => small_index(i).is_some(),
            ClassKind::Multiples => small_index(i).is_some_and(|v| v < u64::MAX),
            ClassKind::CoFinite | ClassKind::Superfinite => true,
            ClassKind::RegularSmall { .. } => small_index(i).is_some_and(|v| (v as usize) < self.size().unwrap_or(0)),
        }
    }

    fn out_of_range(&self, i: &Index) -> Error {
        Error::IndexOutOfRange { class: self.to_string(), index: i.to_string() }
    }

    /// `i ↦ L_i` under the canonical indexing.
    pub fn language(&self, i: &Index) -> Result<LanguageSpec> {
        if !self.in_range(i) {
            return Err(self.out_of_range(i));
        }
        Ok(match self.kind {
            ClassKind::Thresholds => LanguageSpec::Threshold(small_index(i).unwrap()),
            ClassKind::Multiples => LanguageSpec::multiples(small_index(i).unwrap() + 1)?,
            ClassKind::CoFinite => {
                if i.is_zero() {
                    LanguageSpec::All
                } else {
                    LanguageSpec::CoFinite(FiniteSubset::new(decode_subset(i)))
                }
            }
            ClassKind::Superfinite => {
                if i.is_zero() {
                    LanguageSpec::All
                } else {
                    let j = i - BigUint::one();
                    LanguageSpec::FiniteSet(FiniteSubset::new(decode_subset(&j)))
                }
            }
            ClassKind::RegularSmall { .. } => {
                let r = self.regular.as_ref().expect("regular index built");
                LanguageSpec::Dfa(r.automata[small_index(i).unwrap() as usize].clone())
            }
        })
    }

    /// Inverse of [`ConceptClass::language`]: the index of a language equal
    /// (as a set) to `lang`, if the class contains it.
    pub fn index_of(&self, lang: &LanguageSpec) -> Option<Index> {
        let lang = normalize(lang);
        match (self.kind, &lang) {
            (ClassKind::Thresholds, LanguageSpec::All) => Some(Index::zero()),
            (ClassKind::Thresholds, LanguageSpec::Threshold(i)) => Some(Index::from(*i)),
            (ClassKind::Thresholds, LanguageSpec::CoFinite(ex)) => {
                let k = ex.len() as u64;
                let prefix = ex.as_slice().iter().enumerate().all(|(j, &e)| e == j as u64);
                prefix.then(|| Index::from(k))
            }
            (ClassKind::Multiples, LanguageSpec::All) => Some(Index::zero()),
            (ClassKind::Multiples, LanguageSpec::Multiples(p)) => Some(Index::from(p.get() - 1)),
            (ClassKind::CoFinite, LanguageSpec::All) => Some(Index::zero()),
            (ClassKind::CoFinite, LanguageSpec::CoFinite(ex)) => Some(encode_subset(ex.as_slice())),
            (ClassKind::CoFinite, LanguageSpec::Threshold(i)) => {
                let all: Vec<Instance> = (0..*i).collect();
                Some(encode_subset(&all))
            }
            (ClassKind::Superfinite, LanguageSpec::All) => Some(Index::zero()),
            (ClassKind::Superfinite, LanguageSpec::FiniteSet(el)) => {
                Some(encode_subset(el.as_slice()) + BigUint::one())
            }
            (ClassKind::RegularSmall { .. }, LanguageSpec::Dfa(d)) => {
                let r = self.regular.as_ref()?;
                r.by_signature.get(&d.canonical_signature()).map(|&i| Index::from(i))
            }
            _ => None,
        }
    }

    /// Uniform membership procedure `(i, x) ↦ χ_{L_i}(x)`, computed directly
    /// from the index without materializing the language.
    pub fn member(&self, i: &Index, x: Instance) -> Result<bool> {
        if !self.in_range(i) {
            return Err(self.out_of_range(i));
        }
        Ok(match self.kind {
            ClassKind::Thresholds => x >= small_index(i).unwrap(),
            ClassKind::Multiples => x.is_multiple_of(small_index(i).unwrap() + 1),
            ClassKind::CoFinite => !i.bit(x),
            ClassKind::Superfinite => i.is_zero() || (i - BigUint::one()).bit(x),
            ClassKind::RegularSmall { .. } => {
                let r = self.regular.as_ref().expect("regular index built");
                r.automata[small_index(i).unwrap() as usize].accepts(x)
            }
        })
    }

    /// Whether every observation lies in `L_i`. Out-of-range indices are
    /// never consistent.
    pub fn consistent(&self, i: &Index, sample: &Sample) -> bool {
        if !self.in_range(i) {
            return false;
        }
        match self.kind {
            ClassKind::Thresholds => sample.min().is_none_or(|m| m >= small_index(i).unwrap()),
            ClassKind::Multiples => sample.gcd().is_multiple_of(small_index(i).unwrap() + 1),
            ClassKind::CoFinite => decode_subset(i).iter().all(|&e| !sample.contains(e)),
            ClassKind::Superfinite => {
                if i.is_zero() {
                    return true;
                }
                let j = i - BigUint::one();
                sample.iter().all(|&x| j.bit(x))
            }
            ClassKind::RegularSmall { .. } => {
                let r = self.regular.as_ref().expect("regular index built");
                let d = &r.automata[small_index(i).unwrap() as usize];
                sample.iter().all(|&x| d.accepts(x))
            }
        }
    }

    /// True when every language of the class is infinite.
    pub fn all_infinite(&self) -> bool {
        match self.kind {
            ClassKind::Thresholds | ClassKind::Multiples | ClassKind::CoFinite => true,
            ClassKind::Superfinite => false,
            ClassKind::RegularSmall { .. } => {
                self.regular.as_ref().is_some_and(|r| r.automata.iter().all(|d| d.cardinality().is_none()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn idx(i: u64) -> Index {
        Index::from(i)
    }

    #[test]
    fn indexing_examples() {
        assert_eq!(ConceptClass::thresholds().language(&idx(5)), Ok(LanguageSpec::Threshold(5)));
        assert_eq!(ConceptClass::superfinite().language(&idx(0)), Ok(LanguageSpec::All));
        assert_eq!(ConceptClass::superfinite().language(&idx(6)), Ok(LanguageSpec::finite_set([0, 2])));
        assert_eq!(ConceptClass::cofinite().language(&idx(0)), Ok(LanguageSpec::All));
        assert_eq!(ConceptClass::cofinite().language(&idx(128)), Ok(LanguageSpec::cofinite([7])));
        assert_eq!(ConceptClass::multiples().language(&idx(0)), Ok(LanguageSpec::multiples(1).unwrap()));
    }

    #[test]
    fn regular_range_is_finite() {
        let c = ConceptClass::new(ClassKind::RegularSmall { max_states: 2 }).unwrap();
        let n = c.size().unwrap();
        assert!(c.language(&idx(n as u64 - 1)).is_ok());
        assert!(matches!(c.language(&idx(n as u64)), Err(Error::IndexOutOfRange { .. })));
        assert!(ConceptClass::new(ClassKind::RegularSmall { max_states: 9 }).is_err());
        // index 0 is the empty language, index 1 is ℕ
        assert_eq!(c.language(&idx(0)).unwrap().cardinality(), Some(0));
        assert!(!c.all_infinite());
    }

    #[test]
    fn regular_languages_are_pairwise_distinct() {
        let c = ConceptClass::new(ClassKind::RegularSmall { max_states: 2 }).unwrap();
        let n = c.size().unwrap();
        let traces: Vec<Vec<bool>> =
            (0..n).map(|i| (0..256u64).map(|x| c.member(&idx(i as u64), x).unwrap()).collect()).collect();
        for a in 0..n {
            for b in a + 1..n {
                assert_ne!(traces[a], traces[b], "indices {a} and {b} denote the same language");
            }
        }
    }

    #[test]
    fn index_of_handles_equivalent_variants() {
        assert_eq!(ConceptClass::thresholds().index_of(&LanguageSpec::All), Some(idx(0)));
        assert_eq!(ConceptClass::thresholds().index_of(&LanguageSpec::cofinite([0, 1, 2])), Some(idx(3)));
        assert_eq!(ConceptClass::cofinite().index_of(&LanguageSpec::Threshold(2)), Some(idx(3)));
        assert_eq!(ConceptClass::cofinite().index_of(&LanguageSpec::finite_set([1])), None);
        assert_eq!(ConceptClass::superfinite().index_of(&LanguageSpec::multiples(1).unwrap()), Some(idx(0)));
    }

    #[test]
    fn consistency_fast_paths() {
        let s = Sample::from_slice(&[6, 9]);
        assert!(ConceptClass::multiples().consistent(&idx(2), &s));
        assert!(!ConceptClass::multiples().consistent(&idx(5), &s));
        assert!(ConceptClass::thresholds().consistent(&idx(6), &s));
        assert!(!ConceptClass::thresholds().consistent(&idx(7), &s));
        // superfinite index of {6, 9} is 1 + 2^6 + 2^9
        let sf = encode_subset(&[6, 9]) + BigUint::one();
        assert!(ConceptClass::superfinite().consistent(&sf, &s));
        assert!(!ConceptClass::superfinite().consistent(&idx(2), &s));
    }

    proptest! {
        #[test]
        fn uniform_membership_matches_language(i in 0u64..(1 << 12), x in 0u64..40) {
            for class in [
                ConceptClass::thresholds(),
                ConceptClass::multiples(),
                ConceptClass::cofinite(),
                ConceptClass::superfinite(),
            ] {
                let lang = class.language(&idx(i)).unwrap();
                prop_assert_eq!(class.member(&idx(i), x).unwrap(), lang.contains(x));
            }
        }

        #[test]
        fn consistency_matches_subset_test(i in 0u64..(1 << 10), xs in proptest::collection::vec(0u64..12, 0..6)) {
            let sample = Sample::from_slice(&xs);
            for class in [
                ConceptClass::thresholds(),
                ConceptClass::multiples(),
                ConceptClass::cofinite(),
                ConceptClass::superfinite(),
            ] {
                let lang = class.language(&idx(i)).unwrap();
                prop_assert_eq!(class.consistent(&idx(i), &sample), super::super::is_consistent(&lang, &xs));
            }
        }
    }
}
