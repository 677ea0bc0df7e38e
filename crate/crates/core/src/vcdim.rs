//! Brute-force shattering and VC dimension over finite universes, the
//! lookup-table construction, and the VC sample bound.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanisms::Hypothesis;
use crate::universe::{FiniteSubset, Instance, LanguageSpec, LookupTable};

/// Largest subset `shatters` and `vc_dimension` will examine.
pub const MAX_SHATTER_SIZE: usize = 20;
/// Upper limit on the number of subsets `vc_dimension` may have to scan.
pub const SUBSET_BUDGET: u64 = 5_000_000;
/// Upper limit on the number of distinct members a class may enumerate.
pub const MAX_MEMBERS: u64 = 1 << 22;

/// Shape of a [`HypothesisClass`]; the universe is supplied separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassShape {
    Thresholds,
    Intervals,
    UnionsOfIntervals {
        k: u32,
    },
    /// Tables that output 1 on at most `size_cap` points (all subsets when absent).
    LookupTables {
        size_cap: Option<u32>,
    },
}

impl ClassShape {
    pub fn name(&self) -> String {
        match self {
            ClassShape::Thresholds => "thresholds".into(),
            ClassShape::Intervals => "intervals".into(),
            ClassShape::UnionsOfIntervals { k } => format!("unions_of_{k}_intervals"),
            ClassShape::LookupTables { size_cap: None } => "lookup_tables".into(),
            ClassShape::LookupTables { size_cap: Some(c) } => format!("lookup_tables(cap={c})"),
        }
    }
}

/// A finite hypothesis class restricted to a sorted universe. Members are
/// stored as bit patterns over universe positions, one per distinct
/// restriction.
#[derive(Clone, Debug)]
pub struct HypothesisClass {
    label: String,
    shape: Option<ClassShape>,
    universe: Vec<Instance>,
    words: usize,
    patterns: Vec<u64>,
    hypotheses: Option<Vec<Hypothesis>>,
}

struct Builder {
    n: usize,
    words: usize,
    patterns: Vec<u64>,
    seen: HashSet<Vec<u64>>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder { n, words: n.div_ceil(64).max(1), patterns: Vec::new(), seen: HashSet::new() }
    }

    fn push_positions(&mut self, positions: impl IntoIterator<Item = usize>) -> Result<bool> {
        let mut p = vec![0u64; self.words];
        for i in positions {
            p[i / 64] |= 1 << (i % 64);
        }
        self.push(p)
    }

    fn push(&mut self, p: Vec<u64>) -> Result<bool> {
        if self.seen.contains(&p) {
            return Ok(false);
        }
        if self.seen.len() as u64 >= MAX_MEMBERS {
            return Err(Error::BudgetExceeded(format!("class has more than {MAX_MEMBERS} members")));
        }
        self.patterns.extend_from_slice(&p);
        self.seen.insert(p);
        Ok(true)
    }

    fn runs(&mut self, start: usize, runs_left: u32, current: &mut Vec<(usize, usize)>) -> Result<()> {
        if runs_left == 0 {
            return Ok(());
        }
        for s in start..self.n {
            for e in s..self.n {
                current.push((s, e));
                let cur = current.clone();
                self.push_positions(cur.iter().flat_map(|&(a, b)| a..=b))?;
                self.runs(e + 2, runs_left - 1, current)?;
                current.pop();
            }
        }
        Ok(())
    }

    fn subsets(&mut self, start: usize, left: u32, current: &mut Vec<usize>) -> Result<()> {
        if left == 0 {
            return Ok(());
        }
        for i in start..self.n {
            current.push(i);
            let cur = current.clone();
            self.push_positions(cur)?;
            self.subsets(i + 1, left - 1, current)?;
            current.pop();
        }
        Ok(())
    }
}

fn sorted_universe(universe: impl IntoIterator<Item = Instance>) -> Vec<Instance> {
    let mut u: Vec<Instance> = universe.into_iter().collect();
    u.sort_unstable();
    u.dedup();
    u
}

impl HypothesisClass {
    /// Enumerates the members of `shape` over `universe`.
    ///
    /// Orders: thresholds by cut position (the empty function last);
    /// intervals empty first, then by `(start, end)`; unions as nested runs
    /// separated by a gap; lookup tables by the subset of ones, depth first.
    pub fn new(shape: ClassShape, universe: impl IntoIterator<Item = Instance>) -> Result<Self> {
        let universe = sorted_universe(universe);
        if universe.is_empty() {
            return Err(Error::InvalidArgument("hypothesis class universe is empty".into()));
        }
        let n = universe.len();
        let mut b = Builder::new(n);
        match shape {
            ClassShape::Thresholds => {
                for a in 0..=n {
                    b.push_positions(a..n)?;
                }
            }
            ClassShape::Intervals => {
                b.push_positions([])?;
                for s in 0..n {
                    for e in s..n {
                        b.push_positions(s..=e)?;
                    }
                }
            }
            ClassShape::UnionsOfIntervals { k } => {
                if k == 0 {
                    return Err(Error::InvalidArgument("unions need k >= 1".into()));
                }
                b.push_positions([])?;
                b.runs(0, k, &mut Vec::new())?;
            }
            ClassShape::LookupTables { size_cap } => {
                let cap = size_cap.map_or(n as u32, |c| c.min(n as u32));
                b.push_positions([])?;
                b.subsets(0, cap, &mut Vec::new())?;
            }
        }
        Ok(HypothesisClass {
            label: shape.name(),
            shape: Some(shape),
            universe,
            words: b.words,
            patterns: b.patterns,
            hypotheses: None,
        })
    }

    /// A class from explicit hypotheses, deduplicated by their restriction
    /// to `universe` (first occurrence kept).
    pub fn from_hypotheses(
        label: impl Into<String>,
        hypotheses: impl IntoIterator<Item = Hypothesis>,
        universe: impl IntoIterator<Item = Instance>,
    ) -> Result<Self> {
        let universe = sorted_universe(universe);
        if universe.is_empty() {
            return Err(Error::InvalidArgument("hypothesis class universe is empty".into()));
        }
        let mut b = Builder::new(universe.len());
        let mut kept = Vec::new();
        for h in hypotheses {
            let ones: Vec<usize> = (0..universe.len()).filter(|&i| h.eval(universe[i])).collect();
            if b.push_positions(ones)? {
                kept.push(h);
            }
        }
        if kept.is_empty() {
            return Err(Error::InvalidArgument("hypothesis class is empty".into()));
        }
        Ok(HypothesisClass {
            label: label.into(),
            shape: None,
            universe,
            words: b.words,
            patterns: b.patterns,
            hypotheses: Some(kept),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn shape(&self) -> Option<ClassShape> {
        self.shape
    }

    pub fn universe(&self) -> &[Instance] {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.patterns.len() / self.words
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn position(&self, x: Instance) -> Option<usize> {
        self.universe.binary_search(&x).ok()
    }

    fn pattern(&self, j: usize) -> &[u64] {
        &self.patterns[j * self.words..(j + 1) * self.words]
    }

    fn bit(&self, j: usize, pos: usize) -> bool {
        self.pattern(j)[pos / 64] >> (pos % 64) & 1 == 1
    }

    /// Member `j` as a total hypothesis. Off the universe, enumerated
    /// members output 0, except thresholds which stay upward closed.
    pub fn hypothesis(&self, j: usize) -> Hypothesis {
        if let Some(hs) = &self.hypotheses {
            return hs[j].clone();
        }
        let ones: Vec<Instance> =
            (0..self.universe.len()).filter(|&p| self.bit(j, p)).map(|p| self.universe[p]).collect();
        match self.shape {
            Some(ClassShape::Thresholds) => match ones.first() {
                Some(&a) => LanguageSpec::Threshold(a).into(),
                None => Hypothesis::constant(false),
            },
            _ => LanguageSpec::FiniteSet(FiniteSubset::new(ones)).into(),
        }
    }

    /// Whether member `j` labels `x` with 1; `None` off the universe.
    pub fn eval(&self, j: usize, x: Instance) -> Option<bool> {
        self.position(x).map(|p| self.bit(j, p))
    }

    /// Least member agreeing with `lang` everywhere on the universe.
    pub fn realizes(&self, lang: &LanguageSpec) -> Option<usize> {
        (0..self.len()).find(|&j| (0..self.universe.len()).all(|p| self.bit(j, p) == lang.contains(self.universe[p])))
    }

    /// Least member with the fewest errors on `sample`; every sample point
    /// must lie in the universe.
    pub fn erm(&self, sample: &[(Instance, bool)]) -> Result<usize> {
        let mut hist = std::collections::BTreeMap::<Instance, (u64, u64)>::new();
        for &(x, y) in sample {
            let e = hist.entry(x).or_default();
            if y {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        let counts: Vec<(Instance, u64, u64)> = hist.into_iter().map(|(x, (o, z))| (x, o, z)).collect();
        self.erm_counts(&counts)
    }

    /// [`erm`](Self::erm) over a histogram of `(instance, ones, zeros)`.
    pub fn erm_counts(&self, counts: &[(Instance, u64, u64)]) -> Result<usize> {
        let mut by_pos = Vec::with_capacity(counts.len());
        for &(x, ones, zeros) in counts {
            by_pos.push((self.position(x).ok_or(Error::OutsideUniverse(x))?, ones, zeros));
        }
        let mut best = (u64::MAX, 0);
        for j in 0..self.len() {
            let errors: u64 = by_pos.iter().map(|&(p, ones, zeros)| if self.bit(j, p) { zeros } else { ones }).sum();
            if errors < best.0 {
                best = (errors, j);
                if errors == 0 {
                    break;
                }
            }
        }
        Ok(best.1)
    }
}

fn positions_of(hc: &HypothesisClass, subset: &[Instance]) -> Result<Vec<usize>> {
    let mut ps = Vec::with_capacity(subset.len());
    for &x in subset {
        ps.push(hc.position(x).ok_or(Error::OutsideUniverse(x))?);
    }
    let mut sorted = ps.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ps.len() {
        return Err(Error::InvalidArgument("subset lists an instance twice".into()));
    }
    Ok(ps)
}

fn shatters_positions(hc: &HypothesisClass, ps: &[usize]) -> bool {
    let need = 1usize << ps.len();
    if hc.len() < need {
        return false;
    }
    let mut seen = vec![false; need];
    let mut count = 0;
    for j in 0..hc.len() {
        let label = ps.iter().enumerate().fold(0usize, |acc, (i, &p)| acc | (hc.bit(j, p) as usize) << i);
        if !seen[label] {
            seen[label] = true;
            count += 1;
            if count == need {
                return true;
            }
        }
    }
    false
}

/// Whether every labeling of `subset` is realized by some member.
pub fn shatters(hc: &HypothesisClass, subset: &[Instance]) -> Result<bool> {
    if subset.len() > MAX_SHATTER_SIZE {
        return Err(Error::BudgetExceeded(format!(
            "subset of size {} exceeds the shattering limit {MAX_SHATTER_SIZE}",
            subset.len()
        )));
    }
    Ok(shatters_positions(hc, &positions_of(hc, subset)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcResult {
    pub vc: u32,
    /// False when `vc` equals the cap: the dimension may be larger.
    pub exact: bool,
    pub cap: u32,
    pub universe_size: usize,
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Largest `k ≤ cap` such that some `k`-subset of `universe` is shattered.
pub fn vc_dimension(hc: &HypothesisClass, universe: &[Instance], cap: u32) -> Result<VcResult> {
    if cap as usize > MAX_SHATTER_SIZE {
        return Err(Error::InvalidArgument(format!("cap {cap} exceeds {MAX_SHATTER_SIZE}")));
    }
    let points = sorted_universe(universe.iter().copied());
    let ps = positions_of(hc, &points)?;
    let n = ps.len() as u64;
    let top = (cap as u64).min(n);
    let budget: u64 = (1..=top).fold(0u64, |acc, k| acc.saturating_add(binomial(n, k)));
    if budget > SUBSET_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{budget} subsets of a {n}-point universe up to size {cap} exceed {SUBSET_BUDGET}"
        )));
    }
    let mut vc = 0u32;
    for k in 1..=top as usize {
        if !any_k_subset_shattered(hc, &ps, k) {
            break;
        }
        vc = k as u32;
    }
    Ok(VcResult { vc, exact: vc < cap, cap, universe_size: points.len() })
}

fn any_k_subset_shattered(hc: &HypothesisClass, ps: &[usize], k: usize) -> bool {
    let n = ps.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut chosen = vec![0usize; k];
    loop {
        for (c, &i) in chosen.iter_mut().zip(&idx) {
            *c = ps[i];
        }
        if shatters_positions(hc, &chosen) {
            return true;
        }
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return false;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The table that outputs `labels[i]` on `points[i]` and 0 elsewhere.
pub fn lemma1_lookup(points: &[Instance], labels: &[bool]) -> Result<Hypothesis> {
    if points.len() != labels.len() {
        return Err(Error::InvalidArgument(format!("{} points but {} labels", points.len(), labels.len())));
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != points.len() {
        return Err(Error::InvalidArgument("lookup points must be distinct".into()));
    }
    let table = LookupTable::new(points.iter().copied().zip(labels.iter().copied()), false);
    Ok(Hypothesis::new(LanguageSpec::Lookup(table)))
}

/// `ceil(c · (d + ln(1/δ)) / ε)`, with values within `1e-9` of an integer
/// snapped to it so float noise never adds a sample.
pub fn sample_bound(d: u32, eps: f64, delta: f64, c: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps {eps} outside (0, 1)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta {delta} outside (0, 1)")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("constant {c} must be positive")));
    }
    let v = c * (d as f64 + (1.0 / delta).ln()) / eps;
    let r = v.round();
    let m = if (v - r).abs() <= 1e-9 * v.max(1.0) { r } else { v.ceil() };
    Ok(m as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u10() -> Vec<u64> {
        (0..10).collect()
    }

    /// Independent realizability oracles: thresholds are upward closed, an
    /// interval labeling has its ones contiguous, a union of k intervals has
    /// at most k runs of ones.
    fn runs_of_ones(labels: &[bool]) -> usize {
        labels.windows(2).filter(|w| !w[0] && w[1]).count() + labels.first().map_or(0, |&b| b as usize)
    }

    fn oracle_shatters(shape: ClassShape, subset: &[u64]) -> bool {
        let mut s = subset.to_vec();
        s.sort_unstable();
        (0..1u32 << s.len()).all(|mask| {
            let labels: Vec<bool> = (0..s.len()).map(|i| mask >> i & 1 == 1).collect();
            match shape {
                ClassShape::Thresholds => labels.windows(2).all(|w| !w[0] || w[1]),
                ClassShape::Intervals => runs_of_ones(&labels) <= 1,
                ClassShape::UnionsOfIntervals { k } => runs_of_ones(&labels) <= k as usize,
                ClassShape::LookupTables { size_cap } => {
                    labels.iter().filter(|&&b| b).count() <= size_cap.unwrap_or(u32::MAX) as usize
                }
            }
        })
    }

    #[test]
    fn shatter_examples() {
        let iv = HypothesisClass::new(ClassShape::Intervals, u10()).unwrap();
        assert_eq!(shatters(&iv, &[2, 5]), Ok(true));
        assert_eq!(shatters(&iv, &[1, 3, 5]), Ok(false));
        let th = HypothesisClass::new(ClassShape::Thresholds, u10()).unwrap();
        assert_eq!(shatters(&th, &[2, 5]), Ok(false));
        assert!(oracle_shatters(ClassShape::Intervals, &[2, 5]));
        assert!(!oracle_shatters(ClassShape::Intervals, &[1, 3, 5]));
        assert!(!oracle_shatters(ClassShape::Thresholds, &[2, 5]));
        assert!(matches!(shatters(&th, &[11]), Err(Error::OutsideUniverse(11))));
        let big = HypothesisClass::new(ClassShape::Thresholds, 0..30).unwrap();
        assert!(matches!(shatters(&big, &(0..21).collect::<Vec<_>>()), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn member_counts() {
        let n = 10;
        assert_eq!(HypothesisClass::new(ClassShape::Thresholds, u10()).unwrap().len(), n + 1);
        assert_eq!(HypothesisClass::new(ClassShape::Intervals, u10()).unwrap().len(), 1 + n * (n + 1) / 2);
        // every mask with at most two runs of ones
        let two = (0..1u32 << n)
            .filter(|m| {
                let labels: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
                runs_of_ones(&labels) <= 2
            })
            .count();
        let hc = HypothesisClass::new(ClassShape::UnionsOfIntervals { k: 2 }, u10()).unwrap();
        assert_eq!(hc.len(), two);
        let lt = HypothesisClass::new(ClassShape::LookupTables { size_cap: None }, u10()).unwrap();
        assert_eq!(lt.len(), 1 << n);
    }

    #[test]
    fn vc_examples() {
        let u = u10();
        let th = HypothesisClass::new(ClassShape::Thresholds, u.clone()).unwrap();
        let r = vc_dimension(&th, &u, 4).unwrap();
        assert_eq!((r.vc, r.exact), (1, true));
        let iv = HypothesisClass::new(ClassShape::Intervals, u.clone()).unwrap();
        let r = vc_dimension(&iv, &u, 4).unwrap();
        assert_eq!((r.vc, r.exact), (2, true));
        let lt = HypothesisClass::new(ClassShape::LookupTables { size_cap: None }, u.clone()).unwrap();
        let r = vc_dimension(&lt, &u, 6).unwrap();
        assert_eq!((r.vc, r.exact), (6, false));
        for k in 1..=3 {
            let u: Vec<u64> = (0..4 * k as u64 + 2).collect();
            let hc = HypothesisClass::new(ClassShape::UnionsOfIntervals { k }, u.clone()).unwrap();
            let r = vc_dimension(&hc, &u, 2 * k + 1).unwrap();
            assert_eq!((r.vc, r.exact), (2 * k, true));
        }
        assert!(vc_dimension(&th, &u, 21).is_err());
        let wide: Vec<u64> = (0..200).collect();
        let th = HypothesisClass::new(ClassShape::Thresholds, wide.clone()).unwrap();
        assert!(matches!(vc_dimension(&th, &wide, 10), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn lookup_construction() {
        let f = lemma1_lookup(&[2, 5], &[true, false]).unwrap();
        assert!(f.eval(2) && !f.eval(5) && !f.eval(3) && !f.eval(1000));
        let zero = lemma1_lookup(&[], &[]).unwrap();
        assert!((0..100).all(|x| !zero.eval(x)));
        assert!(lemma1_lookup(&[1, 2], &[true]).is_err());

        let s = [1u64, 2, 3];
        let tables: Vec<Hypothesis> =
            (0..8u32).map(|m| lemma1_lookup(&s, &[m & 1 == 1, m & 2 == 2, m & 4 == 4]).unwrap()).collect();
        let hc = HypothesisClass::from_hypotheses("explicit_tables", tables, s).unwrap();
        assert_eq!(hc.len(), 8);
        assert_eq!(shatters(&hc, &s), Ok(true));
    }

    #[test]
    fn enumerated_tables_match_the_construction() {
        let u = [3u64, 4, 8, 9];
        let lt = HypothesisClass::new(ClassShape::LookupTables { size_cap: None }, u).unwrap();
        for j in 0..lt.len() {
            let labels: Vec<bool> = u.iter().map(|&x| lt.eval(j, x).unwrap()).collect();
            let f = lemma1_lookup(&u, &labels).unwrap();
            assert!(u.iter().all(|&x| f.eval(x) == lt.hypothesis(j).eval(x)));
        }
    }

    #[test]
    fn bound_examples() {
        // 4 · (1 + ln 20) / 0.1 = 159.829...
        assert_eq!(sample_bound(1, 0.1, 0.05, 4.0), Ok(160));
        assert_eq!(sample_bound(0, 0.5, (-1.0f64).exp(), 1.0), Ok(2));
        assert_eq!(sample_bound(1, 0.05, 0.05, 4.0), Ok(320));
        assert!(sample_bound(1, 0.0, 0.05, 4.0).is_err());
        assert!(sample_bound(1, 0.1, 1.0, 4.0).is_err());
    }

    #[test]
    fn bound_monotone_on_grid() {
        let eps = [0.01, 0.05, 0.1, 0.2, 0.5, 0.9];
        let deltas = [0.001, 0.01, 0.05, 0.1, 0.5];
        for d in 0..6 {
            for (i, &e) in eps.iter().enumerate() {
                for (k, &dl) in deltas.iter().enumerate() {
                    let m = sample_bound(d, e, dl, 4.0).unwrap();
                    if i > 0 {
                        assert!(sample_bound(d, eps[i - 1], dl, 4.0).unwrap() >= m);
                    }
                    if k > 0 {
                        assert!(sample_bound(d, e, deltas[k - 1], 4.0).unwrap() >= m);
                    }
                    assert!(sample_bound(d + 1, e, dl, 4.0).unwrap() >= m);
                }
            }
        }
    }

    #[test]
    fn class_erm_matches_list_erm() {
        let u = u10();
        let hc = HypothesisClass::new(ClassShape::Intervals, u.clone()).unwrap();
        let list: Vec<Hypothesis> = (0..hc.len()).map(|j| hc.hypothesis(j)).collect();
        let target = LanguageSpec::finite_set([3, 4, 5]);
        let sample: Vec<(u64, bool)> = [1, 4, 4, 7, 5, 9, 3].iter().map(|&x| (x, target.contains(x))).collect();
        assert_eq!(hc.erm(&sample).unwrap(), crate::mechanisms::erm(&list, &sample).unwrap());
        assert!(hc.erm(&[(40, true)]).is_err());
    }

    proptest! {
        #[test]
        fn shatters_matches_oracle(
            subset in proptest::collection::btree_set(0u64..10, 0..6),
            which in 0usize..4,
        ) {
            let shape = [
                ClassShape::Thresholds,
                ClassShape::Intervals,
                ClassShape::UnionsOfIntervals { k: 2 },
                ClassShape::LookupTables { size_cap: Some(3) },
            ][which];
            let s: Vec<u64> = subset.into_iter().collect();
            let hc = HypothesisClass::new(shape, u10()).unwrap();
            let got = shatters(&hc, &s).unwrap();
            prop_assert_eq!(got, oracle_shatters(shape, &s));
            // downward closure
            if got {
                for drop in 0..s.len() {
                    let mut t = s.clone();
                    t.remove(drop);
                    prop_assert!(shatters(&hc, &t).unwrap());
                }
            }
        }

        #[test]
        fn class_erm_is_optimal(
            sample in proptest::collection::vec((0u64..10, any::<bool>()), 0..30),
            k in 1u32..3,
        ) {
            let hc = HypothesisClass::new(ClassShape::UnionsOfIntervals { k }, u10()).unwrap();
            let list: Vec<Hypothesis> = (0..hc.len()).map(|j| hc.hypothesis(j)).collect();
            prop_assert_eq!(hc.erm(&sample).unwrap(), crate::mechanisms::erm(&list, &sample).unwrap());
        }
    }
}
