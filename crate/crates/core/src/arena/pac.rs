use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::risk::{Distribution, Z_99};
use crate::rng;
use crate::universe::{Instance, LanguageSpec};
use crate::vcdim::HypothesisClass;

/// A distribution swept by [`pac_experiment`], with a label for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedDistribution {
    pub label: String,
    pub distribution: Distribution,
}

impl NamedDistribution {
    pub fn new(label: impl Into<String>, distribution: Distribution) -> Self {
        NamedDistribution { label: label.into(), distribution }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacDistributionResult {
    pub label: String,
    pub failures: u64,
    pub failure_frequency: f64,
    /// 99% normal-approximation half-width on the failure frequency.
    pub ci_halfwidth: f64,
    pub mean_risk: f64,
    pub max_risk: f64,
    pub within_delta: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacSummary {
    pub class: String,
    pub universe_size: usize,
    pub target: String,
    pub eps: f64,
    pub delta: f64,
    pub m: u64,
    pub trials: u64,
    pub per_distribution: Vec<PacDistributionResult>,
    pub all_within_delta: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacTrialRecord {
    pub distribution: usize,
    pub trial: u64,
    pub erm_index: usize,
    pub risk: f64,
    pub failed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PacOutcome {
    pub summary: PacSummary,
    pub records: Vec<PacTrialRecord>,
}

impl PacOutcome {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("distribution,trial,erm_index,risk,failed\n");
        for r in &self.records {
            let label = &self.summary.per_distribution[r.distribution].label;
            out.push_str(&format!("{label},{},{},{},{}\n", r.trial, r.erm_index, r.risk, r.failed as u8));
        }
        out
    }
}

fn check_realizable(hc: &HypothesisClass, target: &LanguageSpec, dists: &[&Distribution]) -> Result<()> {
    if hc.realizes(target).is_none() {
        return Err(Error::NonRealizable(format!("{target} is not in {} on its universe", hc.label())));
    }
    for d in dists {
        if let Some(x) = d.points().find(|&x| hc.position(x).is_none()) {
            return Err(Error::NonRealizable(format!("distribution puts mass on {x}, outside the class universe")));
        }
    }
    Ok(())
}

/// Exact risk of member `j` under `d`.
fn member_risk(hc: &HypothesisClass, j: usize, target: &LanguageSpec, d: &Distribution) -> f64 {
    d.mass_where(|x| hc.eval(j, x) != Some(target.contains(x))).clamp(0.0, 1.0)
}

fn draw_counts(d: &Distribution, target: &LanguageSpec, m: u64, rng: &mut rng::LabRng) -> Vec<(Instance, u64, u64)> {
    let mut hist = BTreeMap::<Instance, (u64, u64)>::new();
    for _ in 0..m {
        let x = d.sample(rng);
        let e = hist.entry(x).or_default();
        if target.contains(x) {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    hist.into_iter().map(|(x, (o, z))| (x, o, z)).collect()
}

/// Realizable PAC harness: per distribution and trial, draw `m` labeled
/// points, run ERM over `hc`, and count trials whose exact risk exceeds
/// `eps`. Trial `t` of distribution `i` uses substream `(seed, i, t)`.
#[allow(clippy::too_many_arguments)]
pub fn pac_experiment(
    hc: &HypothesisClass,
    target: &LanguageSpec,
    dists: &[NamedDistribution],
    eps: f64,
    delta: f64,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<PacOutcome> {
    if m == 0 || trials == 0 {
        return Err(Error::InvalidArgument("pac experiment needs m >= 1 and trials >= 1".into()));
    }
    if dists.is_empty() {
        return Err(Error::InvalidArgument("pac experiment needs at least one distribution".into()));
    }
    if !(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("eps {eps} and delta {delta} must lie in (0, 1)")));
    }
    let plain: Vec<&Distribution> = dists.iter().map(|d| &d.distribution).collect();
    check_realizable(hc, target, &plain)?;

    let mut records = Vec::with_capacity(dists.len() * trials as usize);
    let mut per_distribution = Vec::with_capacity(dists.len());
    for (i, nd) in dists.iter().enumerate() {
        let (mut failures, mut sum, mut max) = (0u64, 0.0, 0.0f64);
        for t in 0..trials {
            let mut rng = rng::substream2(seed, i as u64, t);
            let counts = draw_counts(&nd.distribution, target, m, &mut rng);
            let j = hc.erm_counts(&counts)?;
            let risk = member_risk(hc, j, target, &nd.distribution);
            let failed = risk > eps;
            failures += failed as u64;
            sum += risk;
            max = max.max(risk);
            records.push(PacTrialRecord { distribution: i, trial: t, erm_index: j, risk, failed });
        }
        let freq = failures as f64 / trials as f64;
        per_distribution.push(PacDistributionResult {
            label: nd.label.clone(),
            failures,
            failure_frequency: freq,
            ci_halfwidth: Z_99 * (freq * (1.0 - freq) / trials as f64).sqrt(),
            mean_risk: sum / trials as f64,
            max_risk: max,
            within_delta: freq <= delta,
        });
    }
    let all_within_delta = per_distribution.iter().all(|r| r.within_delta);
    Ok(PacOutcome {
        summary: PacSummary {
            class: hc.label().to_string(),
            universe_size: hc.universe().len(),
            target: target.to_string(),
            eps,
            delta,
            m,
            trials,
            per_distribution,
            all_within_delta,
        },
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSizeSummary {
    pub eps: f64,
    pub trials: u64,
    pub median_m: f64,
    /// Trials that hit `max_m` without reaching risk `eps`.
    pub censored: u64,
    pub samples: Vec<u64>,
}

/// Per trial, the number of draws after which ERM's exact risk first drops
/// to `eps` or below (capped at `max_m`), and the median over trials.
pub fn erm_sample_sizes(
    hc: &HypothesisClass,
    target: &LanguageSpec,
    d: &Distribution,
    eps: f64,
    trials: u64,
    seed: u64,
    max_m: u64,
) -> Result<SampleSizeSummary> {
    if trials == 0 || max_m == 0 {
        return Err(Error::InvalidArgument("need trials >= 1 and max_m >= 1".into()));
    }
    check_realizable(hc, target, &[d])?;
    let mut samples = Vec::with_capacity(trials as usize);
    let mut censored = 0;
    for t in 0..trials {
        let mut rng = rng::substream(seed, t);
        let mut hist = BTreeMap::<Instance, (u64, u64)>::new();
        let mut reached = None;
        for m in 1..=max_m {
            let x = d.sample(&mut rng);
            let e = hist.entry(x).or_default();
            if target.contains(x) {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
            let counts: Vec<(Instance, u64, u64)> = hist.iter().map(|(&x, &(o, z))| (x, o, z)).collect();
            let j = hc.erm_counts(&counts)?;
            if member_risk(hc, j, target, d) <= eps {
                reached = Some(m);
                break;
            }
        }
        if reached.is_none() {
            censored += 1;
        }
        samples.push(reached.unwrap_or(max_m));
    }
    let mut sorted = samples.clone();
    sorted.sort_unstable();
    let n = sorted.len();
    let median_m = if n % 2 == 1 { sorted[n / 2] as f64 } else { (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0 };
    Ok(SampleSizeSummary { eps, trials, median_m, censored, samples })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vcdim::{sample_bound, ClassShape};

    fn thresholds() -> HypothesisClass {
        HypothesisClass::new(ClassShape::Thresholds, 0..100).unwrap()
    }

    fn boundary_mix() -> Distribution {
        Distribution::new(vec![(36, 0.5), (37, 0.5)]).unwrap()
    }

    #[test]
    fn bound_sized_samples_pass() {
        let m = sample_bound(1, 0.1, 0.05, 4.0).unwrap();
        assert_eq!(m, 160);
        let dists = [
            NamedDistribution::new("uniform", Distribution::uniform(0..100).unwrap()),
            NamedDistribution::new("boundary", boundary_mix()),
        ];
        let out = pac_experiment(&thresholds(), &LanguageSpec::Threshold(37), &dists, 0.1, 0.05, m, 500, 1).unwrap();
        assert!(out.summary.all_within_delta, "{:?}", out.summary);
    }

    #[test]
    fn one_draw_fails_on_the_boundary_mix() {
        let dists = [NamedDistribution::new("boundary", boundary_mix())];
        let out = pac_experiment(&thresholds(), &LanguageSpec::Threshold(37), &dists, 0.1, 0.05, 1, 500, 1).unwrap();
        // a single positive draw at 37 leaves the all-ones threshold consistent
        assert!(out.summary.per_distribution[0].failure_frequency > 0.05);
    }

    #[test]
    fn singleton_class_never_fails() {
        let target = LanguageSpec::Threshold(37);
        let hc = HypothesisClass::from_hypotheses("singleton", [target.clone().into()], 0..100).unwrap();
        let dists = [NamedDistribution::new("uniform", Distribution::uniform(0..100).unwrap())];
        let out = pac_experiment(&hc, &target, &dists, 0.1, 0.05, 1, 50, 3).unwrap();
        assert_eq!(out.summary.per_distribution[0].failures, 0);
    }

    #[test]
    fn non_realizable_rejected() {
        let dists = [NamedDistribution::new("uniform", Distribution::uniform(0..100).unwrap())];
        let r = pac_experiment(&thresholds(), &LanguageSpec::finite_set([3]), &dists, 0.1, 0.05, 10, 5, 0);
        assert!(matches!(r, Err(Error::NonRealizable(_))));
        let off = [NamedDistribution::new("off", Distribution::point_mass(500))];
        let r = pac_experiment(&thresholds(), &LanguageSpec::Threshold(3), &off, 0.1, 0.05, 10, 5, 0);
        assert!(matches!(r, Err(Error::NonRealizable(_))));
    }

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x| (x, 3.0 * x)).collect();
        assert!((log_log_slope(&pts) - 1.0).abs() < 1e-12);
    }
}
