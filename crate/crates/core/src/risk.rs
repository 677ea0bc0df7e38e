//! Risk functionals evaluated on finite universes, finite-support
//! distributions and finite enumeration windows.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arena::{simulate_generation, Schedule};
use crate::error::{Error, Result};
use crate::mechanisms::{
    decide_bounded, BoundedDecider, Decision, Generator, GeneratorStrategy, Hypothesis, LearnerKind,
};
use crate::rng::{self, LabRng};
use crate::universe::{ConceptClass, Instance, LanguageSpec};
use crate::vcdim::{ClassShape, HypothesisClass};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

/// Tolerance on the total mass of a [`Distribution`].
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A finite-support probability distribution over instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionDescriptor", into = "DistributionDescriptor")]
pub struct Distribution {
    support: Vec<(Instance, f64)>,
    cumulative: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDescriptor {
    pub support: Vec<(Instance, f64)>,
}

impl TryFrom<DistributionDescriptor> for Distribution {
    type Error = Error;

    fn try_from(d: DistributionDescriptor) -> Result<Self> {
        Distribution::new(d.support)
    }
}

impl From<Distribution> for DistributionDescriptor {
    fn from(d: Distribution) -> Self {
        DistributionDescriptor { support: d.support }
    }
}

impl Distribution {
    pub fn new(support: Vec<(Instance, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let mut seen = BTreeSet::new();
        for &(x, p) in &support {
            if !seen.insert(x) {
                return Err(Error::InvalidDistribution(format!("instance {x} listed twice")));
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidDistribution(format!("mass {p} at {x}")));
            }
        }
        let mut acc = 0.0;
        let cumulative: Vec<f64> = support
            .iter()
            .map(|&(_, p)| {
                acc += p;
                acc
            })
            .collect();
        if (acc - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("total mass {acc} is not 1")));
        }
        Ok(Distribution { support, cumulative })
    }

    pub fn uniform(points: impl IntoIterator<Item = Instance>) -> Result<Self> {
        let points: Vec<Instance> = points.into_iter().collect();
        let p = 1.0 / points.len() as f64;
        Self::new(points.into_iter().map(|x| (x, p)).collect())
    }

    pub fn point_mass(x: Instance) -> Self {
        Distribution { support: vec![(x, 1.0)], cumulative: vec![1.0] }
    }

    pub fn support(&self) -> &[(Instance, f64)] {
        &self.support
    }

    pub fn points(&self) -> impl Iterator<Item = Instance> + '_ {
        self.support.iter().map(|&(x, _)| x)
    }

    pub fn sample(&self, rng: &mut LabRng) -> Instance {
        let total = *self.cumulative.last().expect("non-empty support");
        let u = rng::unit(rng) * total;
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.support[i.min(self.support.len() - 1)].0
    }

    /// Mass of the points where `pred` holds, relative to the total mass, so
    /// that the whole support measures exactly 1.
    pub fn mass_where(&self, mut pred: impl FnMut(Instance) -> bool) -> f64 {
        let total = *self.cumulative.last().expect("non-empty support");
        let hit: f64 = self.support.iter().filter(|&&(x, _)| pred(x)).map(|&(_, p)| p).sum();
        hit / total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskKind {
    Expr,
    Comp,
    PacExact,
    PacMc,
    Gen,
    Nov,
}

impl RiskKind {
    pub fn name(&self) -> &'static str {
        match self {
            RiskKind::Expr => "expr",
            RiskKind::Comp => "comp",
            RiskKind::PacExact => "pac_exact",
            RiskKind::PacMc => "pac_mc",
            RiskKind::Gen => "gen",
            RiskKind::Nov => "nov",
        }
    }
}

/// An evaluated risk. `witnesses` holds disagreement points for the
/// pointwise kinds and violation positions for `gen`/`nov`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub kind: RiskKind,
    pub value: f64,
    pub witnesses: Vec<u64>,
    pub universe_or_window: String,
    pub m: Option<u64>,
    pub ci_halfwidth: Option<f64>,
    pub seed: Option<u64>,
}

impl RiskReport {
    fn new(kind: RiskKind, value: f64, witnesses: Vec<u64>, scope: String) -> Self {
        RiskReport { kind, value, witnesses, universe_or_window: scope, m: None, ci_halfwidth: None, seed: None }
    }
}

/// Compact rendering of a point set: `{0..9}` when contiguous.
pub fn describe_points(points: &[Instance]) -> String {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    match (sorted.first(), sorted.last()) {
        (Some(&a), Some(&b)) if sorted.len() > 2 && b - a + 1 == sorted.len() as u64 => format!("{{{a}..{b}}}"),
        _ => {
            let items: Vec<String> = sorted.iter().map(u64::to_string).collect();
            format!("{{{}}}", items.join(","))
        }
    }
}

fn check_universe(universe: &[Instance]) -> Result<()> {
    if universe.is_empty() {
        return Err(Error::InvalidArgument("evaluation universe is empty".into()));
    }
    Ok(())
}

fn sorted_distinct(universe: &[Instance]) -> Vec<Instance> {
    let set: BTreeSet<Instance> = universe.iter().copied().collect();
    set.into_iter().collect()
}

/// Zero-one sup of `|f(x) − χ_L(x)|` over `universe`.
pub fn risk_expr(f: &Hypothesis, lang: &LanguageSpec, universe: &[Instance]) -> Result<RiskReport> {
    check_universe(universe)?;
    let points = sorted_distinct(universe);
    let witnesses: Vec<u64> = points.iter().copied().filter(|&x| f.eval(x) != lang.contains(x)).collect();
    let value = if witnesses.is_empty() { 0.0 } else { 1.0 };
    Ok(RiskReport::new(RiskKind::Expr, value, witnesses, format!("universe{}", describe_points(&points))))
}

/// Result of [`risk_comp`]: a risk, or the points where the decider did not halt.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompOutcome {
    Risk(RiskReport),
    TotalityViolation { diverging: Vec<Instance>, universe: String },
}

pub fn risk_comp(d: &BoundedDecider, lang: &LanguageSpec, universe: &[Instance], fuel: u64) -> Result<CompOutcome> {
    check_universe(universe)?;
    if fuel == 0 {
        return Err(Error::InvalidArgument("fuel must be at least 1".into()));
    }
    let points = sorted_distinct(universe);
    let scope = format!("universe{}", describe_points(&points));
    let mut diverging = Vec::new();
    let mut witnesses = Vec::new();
    for &x in &points {
        match decide_bounded(d, x, fuel) {
            Decision::Diverged => diverging.push(x),
            Decision::Halted(b) if b != lang.contains(x) => witnesses.push(x),
            Decision::Halted(_) => {}
        }
    }
    if !diverging.is_empty() {
        return Ok(CompOutcome::TotalityViolation { diverging, universe: scope });
    }
    let value = if witnesses.is_empty() { 0.0 } else { 1.0 };
    Ok(CompOutcome::Risk(RiskReport::new(RiskKind::Comp, value, witnesses, scope)))
}

/// Exact `Pr_{x~D}[h(x) ≠ χ_L(x)]` by enumerating the support.
pub fn risk_pac_exact(h: &Hypothesis, lang: &LanguageSpec, d: &Distribution) -> RiskReport {
    let witnesses: Vec<u64> = d.points().filter(|&x| h.eval(x) != lang.contains(x)).collect();
    let value = d.mass_where(|x| h.eval(x) != lang.contains(x)).clamp(0.0, 1.0);
    let points: Vec<u64> = d.points().collect();
    RiskReport::new(RiskKind::PacExact, value, witnesses, format!("support{}", describe_points(&points)))
}

/// Monte Carlo estimate from `m` draws with a 99% normal-approximation
/// half-width `Z_99 · sqrt(p(1−p)/m)`.
pub fn risk_pac_mc(h: &Hypothesis, lang: &LanguageSpec, d: &Distribution, m: u64, seed: u64) -> Result<RiskReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let mut rng = rng::substream(seed, 0);
    let mut errors = 0u64;
    let mut witnesses = BTreeSet::new();
    for _ in 0..m {
        let x = d.sample(&mut rng);
        if h.eval(x) != lang.contains(x) {
            errors += 1;
            witnesses.insert(x);
        }
    }
    let p = errors as f64 / m as f64;
    let points: Vec<u64> = d.points().collect();
    let mut report = RiskReport::new(
        RiskKind::PacMc,
        p,
        witnesses.into_iter().collect(),
        format!("support{}", describe_points(&points)),
    );
    report.m = Some(m);
    report.ci_halfwidth = Some(Z_99 * (p * (1.0 - p) / m as f64).sqrt());
    report.seed = Some(seed);
    Ok(report)
}

/// Validity and novelty risks over positions `1..=n1`, proxied by "any
/// violation at a position ≥ n0". Witnesses list every violating position.
pub fn risk_limit_window(
    gen: &Generator,
    target: &LanguageSpec,
    schedule: &Schedule,
    n0: u64,
    n1: u64,
) -> Result<(RiskReport, RiskReport)> {
    if n0 > n1 {
        return Err(Error::InvalidArgument(format!("window start {n0} exceeds end {n1}")));
    }
    if !target.is_infinite() {
        return Err(Error::FiniteTarget);
    }
    let steps = simulate_generation(gen, target, schedule, n1, false)?;
    let scope = format!("window[{n0},{n1}]");
    let report = |kind, bad: &dyn Fn(&crate::arena::GenerationStep) -> bool| {
        let witnesses: Vec<u64> = steps.iter().filter(|s| bad(s)).map(|s| s.position).collect();
        let value = if witnesses.iter().any(|&p| p >= n0) { 1.0 } else { 0.0 };
        RiskReport::new(kind, value, witnesses, scope.clone())
    };
    Ok((report(RiskKind::Gen, &|s| !s.valid), report(RiskKind::Nov, &|s| !s.novel)))
}

/// Mechanism descriptor used by [`template_report`] and the suite config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mechanism", rename_all = "snake_case", deny_unknown_fields)]
pub enum MechanismDescriptor {
    Hypothesis {
        language: LanguageSpec,
        #[serde(default)]
        overrides: Vec<(Instance, bool)>,
    },
    Decider {
        language: LanguageSpec,
        #[serde(default)]
        overrides: Vec<(Instance, bool)>,
        #[serde(default)]
        diverge_on: Vec<Instance>,
    },
    Erm {
        class: ClassShape,
        universe: Vec<Instance>,
    },
    Generator {
        class: ConceptClass,
        strategy: GeneratorStrategy,
    },
    Learner {
        class: ConceptClass,
        strategy: LearnerKind,
    },
}

impl MechanismDescriptor {
    pub fn name(&self) -> &'static str {
        match self {
            MechanismDescriptor::Hypothesis { .. } => "hypothesis",
            MechanismDescriptor::Decider { .. } => "decider",
            MechanismDescriptor::Erm { .. } => "erm",
            MechanismDescriptor::Generator { .. } => "generator",
            MechanismDescriptor::Learner { .. } => "learner",
        }
    }

    fn applicable(&self) -> &'static [RiskKind] {
        match self {
            MechanismDescriptor::Hypothesis { .. } => &[RiskKind::Expr, RiskKind::PacExact, RiskKind::PacMc],
            MechanismDescriptor::Decider { .. } => &[RiskKind::Comp],
            MechanismDescriptor::Erm { .. } => &[RiskKind::PacExact, RiskKind::PacMc],
            MechanismDescriptor::Generator { .. } => &[RiskKind::Gen, RiskKind::Nov],
            MechanismDescriptor::Learner { .. } => &[],
        }
    }
}

/// Inputs for [`template_report`]; each risk kind needs its own subset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateParams {
    #[serde(default)]
    pub universe: Option<Vec<Instance>>,
    #[serde(default = "default_fuel")]
    pub fuel: u64,
    #[serde(default)]
    pub distribution: Option<Distribution>,
    #[serde(default)]
    pub m: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub window: Option<(u64, u64)>,
    #[serde(default = "default_schedule")]
    pub schedule: Schedule,
    /// Requested kinds; empty means every applicable kind whose inputs are present.
    #[serde(default)]
    pub kinds: Vec<RiskKind>,
}

fn default_fuel() -> u64 {
    1000
}

fn default_schedule() -> Schedule {
    Schedule::Fair
}

impl Default for TemplateParams {
    fn default() -> Self {
        TemplateParams {
            universe: None,
            fuel: default_fuel(),
            distribution: None,
            m: None,
            seed: 0,
            window: None,
            schedule: Schedule::Fair,
            kinds: Vec::new(),
        }
    }
}

/// One row of the unified template.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemplateRow {
    pub property: String,
    pub mechanism_class: String,
    pub risk_kind: RiskKind,
    /// `None` when the risk is undefined (a non-total decider).
    pub value: Option<f64>,
    pub quantifiers: String,
    pub report: Option<RiskReport>,
    pub note: Option<String>,
}

fn row_text(kind: RiskKind) -> (&'static str, &'static str, &'static str) {
    match kind {
        RiskKind::Expr => ("Expressibility", "total functions f: X -> {0,1}", "exists f in F, forall x in U"),
        RiskKind::Comp => ("Computability", "fuel-bounded deciders M", "exists total M, forall x in U"),
        RiskKind::PacExact | RiskKind::PacMc => (
            "PAC learning",
            "learners A: (X x {0,1})^m -> H",
            "exists A, forall D, eps, delta, exists m: Pr[R(h) <= eps] >= 1 - delta",
        ),
        RiskKind::Gen => {
            ("Generation (validity)", "generators G: X^<inf -> X", "exists G, forall sigma, exists N, forall n >= N")
        }
        RiskKind::Nov => {
            ("Generation (novelty)", "generators G: X^<inf -> X", "exists G, forall sigma, exists N, forall n >= N")
        }
    }
}

fn row(kind: RiskKind, report: RiskReport) -> TemplateRow {
    let (property, class, quantifiers) = row_text(kind);
    TemplateRow {
        property: property.into(),
        mechanism_class: class.into(),
        risk_kind: kind,
        value: Some(report.value),
        quantifiers: quantifiers.into(),
        report: Some(report),
        note: None,
    }
}

fn missing(kind: RiskKind, what: &str) -> Error {
    Error::InvalidArgument(format!("{} risk needs `{what}`", kind.name()))
}

fn has_inputs(kind: RiskKind, params: &TemplateParams) -> bool {
    match kind {
        RiskKind::Expr | RiskKind::Comp => params.universe.is_some(),
        RiskKind::PacExact => params.distribution.is_some(),
        RiskKind::PacMc => params.distribution.is_some() && params.m.is_some(),
        RiskKind::Gen | RiskKind::Nov => params.window.is_some(),
    }
}

/// Evaluates every requested (or applicable) risk functional for `mechanism`
/// against `lang`, one row per template entry.
pub fn template_report(
    mechanism: &MechanismDescriptor,
    lang: &LanguageSpec,
    params: &TemplateParams,
) -> Result<Vec<TemplateRow>> {
    let applicable = mechanism.applicable();
    let incompatible = |kind: Option<RiskKind>| Error::IncompatiblePairing {
        mechanism: mechanism.name().into(),
        risk: kind.map_or("any".into(), |k| k.name().into()),
    };
    if applicable.is_empty() {
        return Err(incompatible(params.kinds.first().copied()));
    }
    let kinds: Vec<RiskKind> = if params.kinds.is_empty() {
        let present: Vec<RiskKind> = applicable.iter().copied().filter(|&k| has_inputs(k, params)).collect();
        if present.is_empty() {
            return Err(Error::InvalidArgument(format!("no inputs supplied for any {} risk", mechanism.name())));
        }
        present
    } else {
        if let Some(&k) = params.kinds.iter().find(|k| !applicable.contains(k)) {
            return Err(incompatible(Some(k)));
        }
        let mut ks = params.kinds.clone();
        ks.sort_unstable();
        ks.dedup();
        ks
    };

    let mut rows = Vec::new();
    let mut window_reports: Option<(RiskReport, RiskReport)> = None;
    for kind in kinds {
        let universe = || params.universe.as_deref().ok_or_else(|| missing(kind, "universe"));
        let dist = || params.distribution.as_ref().ok_or_else(|| missing(kind, "distribution"));
        let m = || params.m.ok_or_else(|| missing(kind, "m"));
        match (mechanism, kind) {
            (MechanismDescriptor::Hypothesis { language, overrides }, _) => {
                let h = build_hypothesis(language, overrides);
                let report = match kind {
                    RiskKind::Expr => risk_expr(&h, lang, universe()?)?,
                    RiskKind::PacExact => risk_pac_exact(&h, lang, dist()?),
                    _ => risk_pac_mc(&h, lang, dist()?, m()?, params.seed)?,
                };
                rows.push(row(kind, report));
            }
            (MechanismDescriptor::Decider { language, overrides, diverge_on }, _) => {
                let d = BoundedDecider::new(build_hypothesis(language, overrides), diverge_on.iter().copied());
                match risk_comp(&d, lang, universe()?, params.fuel)? {
                    CompOutcome::Risk(report) => rows.push(row(kind, report)),
                    CompOutcome::TotalityViolation { diverging, .. } => {
                        let (property, class, quantifiers) = row_text(kind);
                        rows.push(TemplateRow {
                            property: property.into(),
                            mechanism_class: class.into(),
                            risk_kind: kind,
                            value: None,
                            quantifiers: quantifiers.into(),
                            report: None,
                            note: Some(format!("undefined: no halt on {}", describe_points(&diverging))),
                        });
                    }
                }
            }
            (MechanismDescriptor::Erm { class, universe: u }, _) => {
                let hc = HypothesisClass::new(*class, u.iter().copied())?;
                let d = dist()?;
                let draws = m()?;
                let mut rng = rng::substream(params.seed, 1);
                let sample: Vec<(Instance, bool)> = (0..draws)
                    .map(|_| {
                        let x = d.sample(&mut rng);
                        (x, lang.contains(x))
                    })
                    .collect();
                let h = hc.hypothesis(hc.erm(&sample)?);
                let report = match kind {
                    RiskKind::PacExact => risk_pac_exact(&h, lang, d),
                    _ => risk_pac_mc(&h, lang, d, draws, params.seed)?,
                };
                let mut r = row(kind, report);
                r.note = Some(format!("erm output on m = {draws} draws"));
                rows.push(r);
            }
            (MechanismDescriptor::Generator { class, strategy }, _) => {
                if window_reports.is_none() {
                    let (n0, n1) = params.window.ok_or_else(|| missing(kind, "window"))?;
                    let gen = Generator::new(class.clone(), *strategy);
                    window_reports = Some(risk_limit_window(&gen, lang, &params.schedule, n0, n1)?);
                }
                let (g, n) = window_reports.clone().expect("computed above");
                rows.push(row(kind, if kind == RiskKind::Gen { g } else { n }));
            }
            (MechanismDescriptor::Learner { .. }, _) => return Err(incompatible(Some(kind))),
        }
    }
    Ok(rows)
}

fn build_hypothesis(language: &LanguageSpec, overrides: &[(Instance, bool)]) -> Hypothesis {
    overrides.iter().fold(Hypothesis::new(language.clone()), |h, &(x, b)| h.with_override(x, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t5() -> Hypothesis {
        Hypothesis::new(LanguageSpec::Threshold(5))
    }

    #[test]
    fn expr_examples() {
        let u: Vec<u64> = (0..10).collect();
        let r = risk_expr(&t5(), &LanguageSpec::Threshold(5), &u).unwrap();
        assert_eq!((r.value, r.witnesses.len()), (0.0, 0));
        let r = risk_expr(&t5().flipped_at(5), &LanguageSpec::Threshold(5), &u).unwrap();
        assert_eq!((r.value, r.witnesses), (1.0, vec![5]));
        let u: Vec<u64> = (0..=5).collect();
        let r = risk_expr(&Hypothesis::constant(false), &LanguageSpec::cofinite([3]), &u).unwrap();
        assert_eq!((r.value, r.witnesses), (1.0, vec![0, 1, 2, 4, 5]));
        assert_eq!(r.universe_or_window, "universe{0..5}");
        assert!(risk_expr(&t5(), &LanguageSpec::All, &[]).is_err());
    }

    #[test]
    fn comp_examples() {
        let u: Vec<u64> = (0..10).collect();
        let lang = LanguageSpec::Threshold(3);
        let total = BoundedDecider::total(Hypothesis::new(lang.clone()));
        match risk_comp(&total, &lang, &u, 100).unwrap() {
            CompOutcome::Risk(r) => assert_eq!(r.value, 0.0),
            other => panic!("{other:?}"),
        }
        let partial = BoundedDecider::new(Hypothesis::new(lang.clone()), [3]);
        match risk_comp(&partial, &lang, &u, 100).unwrap() {
            CompOutcome::TotalityViolation { diverging, .. } => assert_eq!(diverging, vec![3]),
            other => panic!("{other:?}"),
        }
        let wrong = BoundedDecider::total(Hypothesis::new(lang.clone()).flipped_at(2));
        match risk_comp(&wrong, &lang, &u, 100).unwrap() {
            CompOutcome::Risk(r) => assert_eq!((r.value, r.witnesses), (1.0, vec![2])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pac_exact_examples() {
        let d = Distribution::uniform(0..10).unwrap();
        let r = risk_pac_exact(&t5(), &LanguageSpec::Threshold(3), &d);
        // disagreement by enumeration: x in {3, 4}
        let oracle = (0..10u64).filter(|&x| (x >= 5) != (x >= 3)).count() as f64 / 10.0;
        assert!((r.value - oracle).abs() < 1e-12);
        assert!((r.value - 0.2).abs() < 1e-12);
        assert_eq!(r.witnesses, vec![3, 4]);
        let point = Distribution::point_mass(5);
        assert_eq!(risk_pac_exact(&t5().flipped_at(5), &LanguageSpec::Threshold(5), &point).value, 1.0);
        assert_eq!(risk_pac_exact(&t5(), &LanguageSpec::Threshold(5), &d).value, 0.0);
    }

    #[test]
    fn pac_mc_examples() {
        let d = Distribution::uniform(0..10).unwrap();
        let exact = Hypothesis::new(LanguageSpec::Threshold(3));
        let r = risk_pac_mc(&exact, &LanguageSpec::Threshold(3), &d, 1000, 1).unwrap();
        assert_eq!((r.value, r.ci_halfwidth), (0.0, Some(0.0)));
        let a = risk_pac_mc(&t5(), &LanguageSpec::Threshold(3), &d, 10_000, 9).unwrap();
        assert!((a.value - 0.2).abs() <= 3.0 * a.ci_halfwidth.unwrap());
        let b = risk_pac_mc(&t5(), &LanguageSpec::Threshold(3), &d, 10_000, 9).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(risk_pac_mc(&t5(), &LanguageSpec::All, &d, 0, 9).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![(1, 0.5), (2, 0.5)]).is_ok());
        assert!(Distribution::new(vec![(1, 0.5), (2, 0.4)]).is_err());
        assert!(Distribution::new(vec![(1, 0.5), (1, 0.5)]).is_err());
        assert!(Distribution::new(vec![(1, 1.5), (2, -0.5)]).is_err());
        assert!(serde_json::from_str::<Distribution>(r#"{"support":[[1,0.25]]}"#).is_err());
    }

    /// Brute-force positions where the fair-schedule intersection generator
    /// misses the target, recomputed from scratch at each step.
    fn oracle_violations(target: &LanguageSpec, strategy: GeneratorStrategy, n1: u64) -> Vec<u64> {
        let class = ConceptClass::cofinite();
        let mut bad = Vec::new();
        let prefix: Vec<u64> = (0..n1).map(|k| target.enumerate_element(k).unwrap()).collect();
        for n in 1..=n1 as usize {
            let seen = &prefix[..n];
            let langs: Vec<LanguageSpec> = (0..=n as u64)
                .map(|j| class.language(&j.into()).unwrap())
                .filter(|l| seen.iter().all(|&x| l.contains(x)))
                .collect();
            let langs = match strategy {
                GeneratorStrategy::Intersection => &langs[..],
                GeneratorStrategy::LeastConsistentIndex => &langs[..1],
            };
            let out = (0..).find(|x| !seen.contains(x) && langs.iter().all(|l| l.contains(*x))).unwrap();
            if !target.contains(out) {
                bad.push(n as u64);
            }
        }
        bad
    }

    #[test]
    fn limit_window_on_cofinite_seven() {
        let target = LanguageSpec::cofinite([7]);
        let inter = Generator::new(ConceptClass::cofinite(), GeneratorStrategy::Intersection);
        let lci = Generator::new(ConceptClass::cofinite(), GeneratorStrategy::LeastConsistentIndex);

        let (g, n) = risk_limit_window(&inter, &target, &Schedule::Fair, 20, 200).unwrap();
        let oracle = oracle_violations(&target, GeneratorStrategy::Intersection, 200);
        // the target sits at index 128 and only joins the window at step 128
        assert_eq!(oracle, (7..=127).collect::<Vec<u64>>());
        assert_eq!(g.witnesses, oracle);
        assert_eq!((g.value, n.value), (1.0, 0.0));

        let (g, n) = risk_limit_window(&inter, &target, &Schedule::Fair, 128, 200).unwrap();
        assert_eq!((g.value, n.value), (0.0, 0.0));

        let (g, _) = risk_limit_window(&lci, &target, &Schedule::Fair, 128, 200).unwrap();
        let oracle = oracle_violations(&target, GeneratorStrategy::LeastConsistentIndex, 200);
        assert_eq!(g.value, 1.0);
        assert_eq!(g.witnesses, oracle);
        assert_eq!(oracle, (7..=200).collect::<Vec<u64>>());

        assert!(matches!(
            risk_limit_window(&inter, &LanguageSpec::finite_set([1, 2]), &Schedule::Fair, 1, 5),
            Err(Error::FiniteTarget)
        ));
        assert!(risk_limit_window(&inter, &target, &Schedule::Fair, 9, 5).is_err());
    }

    #[test]
    fn template_rows() {
        let lang = LanguageSpec::Threshold(6);
        let params = TemplateParams { universe: Some((0..16).collect()), ..Default::default() };
        let h = MechanismDescriptor::Hypothesis { language: lang.clone(), overrides: vec![] };
        let rows = template_report(&h, &lang, &params).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].risk_kind, rows[0].value), (RiskKind::Expr, Some(0.0)));

        let d = MechanismDescriptor::Decider { language: lang.clone(), overrides: vec![], diverge_on: vec![] };
        let rows = template_report(&d, &lang, &params).unwrap();
        assert_eq!((rows[0].risk_kind, rows[0].value), (RiskKind::Comp, Some(0.0)));

        let d = MechanismDescriptor::Decider { language: lang.clone(), overrides: vec![], diverge_on: vec![3] };
        let rows = template_report(&d, &lang, &params).unwrap();
        assert_eq!(rows[0].value, None);

        let target = LanguageSpec::cofinite([7]);
        let g = MechanismDescriptor::Generator {
            class: ConceptClass::cofinite(),
            strategy: GeneratorStrategy::Intersection,
        };
        let params = TemplateParams { window: Some((128, 200)), kinds: vec![RiskKind::Gen], ..Default::default() };
        let rows = template_report(&g, &target, &params).unwrap();
        assert_eq!((rows[0].risk_kind, rows[0].value), (RiskKind::Gen, Some(0.0)));

        let bad = TemplateParams { kinds: vec![RiskKind::Expr], ..params.clone() };
        assert!(matches!(template_report(&g, &target, &bad), Err(Error::IncompatiblePairing { .. })));
        let l = MechanismDescriptor::Learner { class: ConceptClass::cofinite(), strategy: LearnerKind::Greatest };
        assert!(matches!(template_report(&l, &target, &params), Err(Error::IncompatiblePairing { .. })));
    }

    #[test]
    fn mechanism_json() {
        let m: MechanismDescriptor =
            serde_json::from_str(r#"{"mechanism":"generator","class":{"kind":"cofinite"},"strategy":"intersection"}"#)
                .unwrap();
        assert_eq!(m.name(), "generator");
    }

    proptest! {
        #[test]
        fn comp_total_equals_expr(t in 0u64..20, flips in proptest::collection::vec(0u64..20, 0..5)) {
            let lang = LanguageSpec::Threshold(t);
            let h = flips.iter().fold(Hypothesis::new(LanguageSpec::Threshold(t / 2)), |h, &x| h.flipped_at(x));
            let u: Vec<u64> = (0..20).collect();
            let e = risk_expr(&h, &lang, &u).unwrap();
            match risk_comp(&BoundedDecider::total(h.clone()), &lang, &u, 1000).unwrap() {
                CompOutcome::Risk(c) => {
                    prop_assert_eq!(c.value, e.value);
                    prop_assert_eq!(c.witnesses, e.witnesses.clone());
                }
                other => prop_assert!(false, "{:?}", other),
            }
            let scan = u.iter().all(|&x| h.eval(x) == lang.contains(x));
            prop_assert_eq!(e.value == 0.0, scan);
        }

        #[test]
        fn window_monotone(n0 in 1u64..150, len in 0u64..100) {
            let target = LanguageSpec::cofinite([3, 9]);
            let g = Generator::new(ConceptClass::cofinite(), GeneratorStrategy::Intersection);
            let (outer, _) = risk_limit_window(&g, &target, &Schedule::Fair, n0, n0 + len).unwrap();
            if outer.value == 0.0 {
                let (inner, _) = risk_limit_window(&g, &target, &Schedule::Fair, n0 + len / 2, n0 + len).unwrap();
                prop_assert_eq!(inner.value, 0.0);
            }
        }
    }
}
