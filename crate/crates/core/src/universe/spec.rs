use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroU64;

use serde::{Deserialize, Serialize};

use super::dfa::Dfa;
use super::Instance;
use crate::error::{Error, Result};

/// A finite, sorted, duplicate-free set of instances.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSubset(Vec<Instance>);

impl FiniteSubset {
    pub fn new(elements: impl IntoIterator<Item = Instance>) -> Self {
        let mut v: Vec<Instance> = elements.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        FiniteSubset(v)
    }

    /// Accepts only input that is already sorted and duplicate-free.
    pub fn from_sorted(elements: Vec<Instance>) -> Result<Self> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidLanguage("finite set must be sorted ascending without duplicates".into()));
        }
        Ok(FiniteSubset(elements))
    }

    pub fn contains(&self, x: Instance) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn as_slice(&self) -> &[Instance] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `k`-th smallest natural number *not* in the set.
    pub fn kth_missing(&self, k: u64) -> Option<Instance> {
        let mut x = k;
        for &e in &self.0 {
            if e <= x {
                x = x.checked_add(1)?;
            } else {
                break;
            }
        }
        Some(x)
    }
}

/// A finite table of explicit outputs plus a default bit for every other instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LookupTable {
    pub table: BTreeMap<Instance, bool>,
    pub default: bool,
}

impl LookupTable {
    pub fn new(table: impl IntoIterator<Item = (Instance, bool)>, default: bool) -> Self {
        LookupTable { table: table.into_iter().collect(), default }
    }

    pub fn get(&self, x: Instance) -> bool {
        self.table.get(&x).copied().unwrap_or(self.default)
    }

    /// Instances whose output differs from the default, ascending.
    fn exceptions(&self) -> FiniteSubset {
        FiniteSubset(self.table.iter().filter(|(_, &b)| b != self.default).map(|(&x, _)| x).collect())
    }
}

/// A decidable language over ℕ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LanguageDescriptor", into = "LanguageDescriptor")]
pub enum LanguageSpec {
    /// `{x : x ≥ min}`
    Threshold(Instance),
    /// `{x : period | x}`
    Multiples(NonZeroU64),
    /// ℕ minus a finite set.
    CoFinite(FiniteSubset),
    FiniteSet(FiniteSubset),
    All,
    /// Read through the binary expansion of the instance.
    Dfa(Dfa),
    Lookup(LookupTable),
}

impl LanguageSpec {
    pub fn multiples(period: u64) -> Result<Self> {
        NonZeroU64::new(period)
            .map(LanguageSpec::Multiples)
            .ok_or_else(|| Error::InvalidLanguage("multiples period must be at least 1".into()))
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = Instance>) -> Self {
        LanguageSpec::CoFinite(FiniteSubset::new(excluded))
    }

    pub fn finite_set(elements: impl IntoIterator<Item = Instance>) -> Self {
        LanguageSpec::FiniteSet(FiniteSubset::new(elements))
    }

    /// Characteristic function χ_L.
    pub fn contains(&self, x: Instance) -> bool {
        match self {
            LanguageSpec::Threshold(min) => x >= *min,
            LanguageSpec::Multiples(p) => x.is_multiple_of(p.get()),
            LanguageSpec::CoFinite(ex) => !ex.contains(x),
            LanguageSpec::FiniteSet(el) => el.contains(x),
            LanguageSpec::All => true,
            LanguageSpec::Dfa(d) => d.accepts(x),
            LanguageSpec::Lookup(t) => t.get(x),
        }
    }

    /// Upper bound on the elementary steps one membership query takes.
    pub fn step_cost(&self, x: Instance) -> u64 {
        fn log_cost(n: usize) -> u64 {
            1 + (usize::BITS - n.leading_zeros()) as u64
        }
        match self {
            LanguageSpec::Threshold(_) | LanguageSpec::Multiples(_) | LanguageSpec::All => 1,
            LanguageSpec::CoFinite(s) | LanguageSpec::FiniteSet(s) => log_cost(s.len()),
            LanguageSpec::Dfa(_) => (64 - x.leading_zeros()).max(1) as u64,
            LanguageSpec::Lookup(t) => log_cost(t.table.len()),
        }
    }

    /// `None` when the language is infinite.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            LanguageSpec::FiniteSet(s) => Some(s.len() as u64),
            LanguageSpec::Dfa(d) => d.cardinality(),
            LanguageSpec::Lookup(t) if !t.default => Some(t.exceptions().len() as u64),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.cardinality().is_none()
    }

    /// The `k`-th smallest element (`k = 0` is the minimum).
    pub fn enumerate_element(&self, k: u64) -> Result<Instance> {
        let out = match self {
            LanguageSpec::Threshold(min) => min.checked_add(k),
            LanguageSpec::Multiples(p) => p.get().checked_mul(k),
            LanguageSpec::CoFinite(ex) => ex.kth_missing(k),
            LanguageSpec::FiniteSet(el) => el.as_slice().get(k as usize).copied(),
            LanguageSpec::All => Some(k),
            LanguageSpec::Dfa(d) => d.kth_element(k),
            LanguageSpec::Lookup(t) => {
                let exceptions = t.exceptions();
                if t.default {
                    exceptions.kth_missing(k)
                } else {
                    exceptions.as_slice().get(k as usize).copied()
                }
            }
        };
        out.ok_or(Error::RankOutOfRange { rank: k })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            LanguageSpec::Threshold(_) => "threshold",
            LanguageSpec::Multiples(_) => "multiples",
            LanguageSpec::CoFinite(_) => "cofinite",
            LanguageSpec::FiniteSet(_) => "finite_set",
            LanguageSpec::All => "all",
            LanguageSpec::Dfa(_) => "dfa",
            LanguageSpec::Lookup(_) => "lookup",
        }
    }
}

fn fmt_set(f: &mut fmt::Formatter<'_>, s: &[Instance]) -> fmt::Result {
    write!(f, "{{")?;
    for (i, x) in s.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "}}")
}

impl fmt::Display for LanguageSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LanguageSpec::Threshold(i) => write!(f, "Threshold({i})"),
            LanguageSpec::Multiples(p) => write!(f, "Multiples({p})"),
            LanguageSpec::CoFinite(ex) => {
                write!(f, "CoFinite(")?;
                fmt_set(f, ex.as_slice())?;
                write!(f, ")")
            }
            LanguageSpec::FiniteSet(el) => {
                write!(f, "FiniteSet(")?;
                fmt_set(f, el.as_slice())?;
                write!(f, ")")
            }
            LanguageSpec::All => write!(f, "All"),
            LanguageSpec::Dfa(d) => write!(f, "Dfa({} states)", d.num_states()),
            LanguageSpec::Lookup(t) => {
                write!(f, "Lookup({} entries, default {})", t.table.len(), t.default as u8)
            }
        }
    }
}

/// JSON shape `{"kind": ..., "params": ...}` of a language.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", deny_unknown_fields)]
pub enum LanguageDescriptor {
    #[serde(rename = "threshold")]
    Threshold { min: u64 },
    #[serde(rename = "multiples")]
    Multiples { period: u64 },
    #[serde(rename = "cofinite")]
    CoFinite { excluded: Vec<u64> },
    #[serde(rename = "finite_set")]
    FiniteSet { elements: Vec<u64> },
    #[serde(rename = "all")]
    All,
    #[serde(rename = "dfa")]
    Dfa { transitions: Vec<[u32; 2]>, accepting: Vec<bool> },
    #[serde(rename = "lookup")]
    Lookup { table: Vec<(u64, bool)>, default: bool },
}

impl TryFrom<LanguageDescriptor> for LanguageSpec {
    type Error = Error;

    fn try_from(d: LanguageDescriptor) -> Result<Self> {
        Ok(match d {
            LanguageDescriptor::Threshold { min } => LanguageSpec::Threshold(min),
            LanguageDescriptor::Multiples { period } => LanguageSpec::multiples(period)?,
            LanguageDescriptor::CoFinite { excluded } => LanguageSpec::CoFinite(FiniteSubset::from_sorted(excluded)?),
            LanguageDescriptor::FiniteSet { elements } => LanguageSpec::FiniteSet(FiniteSubset::from_sorted(elements)?),
            LanguageDescriptor::All => LanguageSpec::All,
            LanguageDescriptor::Dfa { transitions, accepting } => LanguageSpec::Dfa(Dfa::new(transitions, accepting)?),
            LanguageDescriptor::Lookup { table, default } => {
                let mut map = BTreeMap::new();
                for (x, b) in table {
                    if map.insert(x, b).is_some() {
                        return Err(Error::InvalidLanguage(format!("lookup table lists instance {x} twice")));
                    }
                }
                LanguageSpec::Lookup(LookupTable { table: map, default })
            }
        })
    }
}

impl From<LanguageSpec> for LanguageDescriptor {
    fn from(l: LanguageSpec) -> Self {
        match l {
            LanguageSpec::Threshold(min) => LanguageDescriptor::Threshold { min },
            LanguageSpec::Multiples(p) => LanguageDescriptor::Multiples { period: p.get() },
            LanguageSpec::CoFinite(ex) => LanguageDescriptor::CoFinite { excluded: ex.0 },
            LanguageSpec::FiniteSet(el) => LanguageDescriptor::FiniteSet { elements: el.0 },
            LanguageSpec::All => LanguageDescriptor::All,
            LanguageSpec::Dfa(d) => {
                LanguageDescriptor::Dfa { transitions: d.transitions().to_vec(), accepting: d.accepting().to_vec() }
            }
            LanguageSpec::Lookup(t) => {
                LanguageDescriptor::Lookup { table: t.table.into_iter().collect(), default: t.default }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_examples() {
        assert!(LanguageSpec::Threshold(3).contains(7));
        assert!(!LanguageSpec::multiples(4).unwrap().contains(6));
        assert!(!LanguageSpec::cofinite([2, 7]).contains(7));
        assert!(LanguageSpec::cofinite([2, 7]).contains(8));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(LanguageSpec::multiples(3).unwrap().enumerate_element(0), Ok(0));
        assert_eq!(LanguageSpec::cofinite([0, 1]).enumerate_element(0), Ok(2));
        assert_eq!(LanguageSpec::Threshold(4).enumerate_element(2), Ok(6));
        assert_eq!(LanguageSpec::finite_set([3, 5]).enumerate_element(2), Err(Error::RankOutOfRange { rank: 2 }));
        let lookup = LanguageSpec::Lookup(LookupTable::new([(0, false), (2, false), (5, true)], true));
        assert_eq!(lookup.enumerate_element(0), Ok(1));
        assert_eq!(lookup.enumerate_element(1), Ok(3));
    }

    #[test]
    fn multiples_rejects_zero_period() {
        assert!(LanguageSpec::multiples(0).is_err());
    }

    #[test]
    fn json_shape() {
        let l = LanguageSpec::cofinite([2, 7]);
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"kind":"cofinite","params":{"excluded":[2,7]}}"#);
        let back: LanguageSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        assert_eq!(serde_json::to_string(&LanguageSpec::All).unwrap(), r#"{"kind":"all"}"#);
        assert!(serde_json::from_str::<LanguageSpec>(r#"{"kind":"cofinite","params":{"excluded":[7,2]}}"#).is_err());
        assert!(serde_json::from_str::<LanguageSpec>(r#"{"kind":"multiples","params":{"period":0}}"#).is_err());
    }
}
