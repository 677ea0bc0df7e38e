//! Instance space, languages and effectively indexed concept classes.
//!
//! The instance space is ℕ (represented as `u64`). Every language answers
//! membership with a statically bounded amount of work, and every concept
//! class comes with a total indexing `i ↦ L_i` whose membership predicate
//! `(i, x) ↦ [x ∈ L_i]` is computed by a single uniform procedure
//! ([`ConceptClass::member`]).

mod class;
mod dfa;
mod sample;
mod spec;

pub use class::{ClassKind, ConceptClass, MAX_REGULAR_STATES};
pub use dfa::Dfa;
pub use sample::Sample;
pub use spec::{FiniteSubset, LanguageSpec, LookupTable};

use num_bigint::BigUint;

/// An element of the canonical instance space ℕ.
pub type Instance = u64;

/// A language index. Indices of the superfinite and co-finite classes encode
/// arbitrary finite subsets of ℕ, so they are unbounded naturals.
pub type Index = BigUint;

/// Binary expansion of `x`, most significant bit first. `0` encodes as `[0]`;
/// every other value has no leading zeros.
pub fn encode_bits(x: Instance) -> Vec<u8> {
    if x == 0 {
        return vec![0];
    }
    let width = 64 - x.leading_zeros();
    (0..width).rev().map(|b| ((x >> b) & 1) as u8).collect()
}

/// Inverse of [`encode_bits`]. Returns `None` for strings that are not
/// canonical encodings (empty, leading zeros, non-binary symbols, > 64 bits).
pub fn decode_bits(bits: &[u8]) -> Option<Instance> {
    match bits {
        [] => None,
        [0] => Some(0),
        [0, ..] => None,
        _ if bits.len() > 64 => None,
        _ => bits.iter().try_fold(0u64, |acc, &b| match b {
            0 | 1 => Some((acc << 1) | b as u64),
            _ => None,
        }),
    }
}

/// The standard bijection ℕ → finite subsets of ℕ: bit `k` of `i` is set iff
/// `k` belongs to the subset. Returned in ascending order.
pub fn decode_subset(i: &Index) -> Vec<Instance> {
    let mut out = Vec::new();
    for (word_idx, word) in i.iter_u64_digits().enumerate() {
        let mut w = word;
        while w != 0 {
            let tz = w.trailing_zeros() as u64;
            out.push(word_idx as u64 * 64 + tz);
            w &= w - 1;
        }
    }
    out
}

/// Inverse of [`decode_subset`].
pub fn encode_subset(elements: &[Instance]) -> Index {
    let mut i = BigUint::default();
    for &e in elements {
        i.set_bit(e, true);
    }
    i
}

/// Subset test underlying consistency: every element of `sample` lies in `lang`.
/// The empty sample is consistent with every language.
pub fn is_consistent<'a, I>(lang: &LanguageSpec, sample: I) -> bool
where
    I: IntoIterator<Item = &'a Instance>,
{
    sample.into_iter().all(|&x| lang.contains(x))
}
