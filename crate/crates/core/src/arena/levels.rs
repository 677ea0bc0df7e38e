//! Executable environments for the five feedback levels.

use serde::{Deserialize, Serialize};
use serde_json::json;
use statrs::distribution::{ContinuousCDF, Normal};

use super::limit::{generation_trace, run_generation, run_identification};
use super::schedule::Schedule;
use super::trace::{details, lock_and_convergence, ExperimentTrace, StepRecord, TraceSummary};
use crate::error::{Error, Result};
use crate::mechanisms::{Generator, GeneratorStrategy, LearnerKind};
use crate::risk::Distribution;
use crate::rng::{self, LabRng};
use crate::universe::{ConceptClass, Instance, LanguageSpec};
use crate::vcdim::{ClassShape, HypothesisClass};

/// Largest flip count for which exact binomial probabilities are computed.
pub const MAX_EXACT_FLIPS: u64 = 100_000;

/// Guesses which of two candidate languages produced a stream of
/// unlabeled observations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distinguisher {
    AlwaysFirst,
    /// Candidate containing more of the observations; ties go to the first.
    MembershipVote,
    ParityOfSum,
    SeededGuess,
}

impl Distinguisher {
    pub const ALL: [Distinguisher; 4] = [
        Distinguisher::AlwaysFirst,
        Distinguisher::MembershipVote,
        Distinguisher::ParityOfSum,
        Distinguisher::SeededGuess,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Distinguisher::AlwaysFirst => "always_first",
            Distinguisher::MembershipVote => "membership_vote",
            Distinguisher::ParityOfSum => "parity_of_sum",
            Distinguisher::SeededGuess => "seeded_guess",
        }
    }

    pub fn guess(&self, obs: &[Instance], candidates: &[LanguageSpec; 2], rng: &mut LabRng) -> usize {
        match self {
            Distinguisher::AlwaysFirst => 0,
            Distinguisher::MembershipVote => {
                let a = obs.iter().filter(|&&x| candidates[0].contains(x)).count();
                let b = obs.iter().filter(|&&x| candidates[1].contains(x)).count();
                (b > a) as usize
            }
            Distinguisher::ParityOfSum => (obs.iter().fold(0u64, |s, &x| s.wrapping_add(x)) & 1) as usize,
            Distinguisher::SeededGuess => rng::coin(rng, 0.5) as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level0Params {
    pub candidates: [LanguageSpec; 2],
    /// Shared source of the unlabeled observations, whichever candidate is true.
    pub observations: Distribution,
    pub draws_per_trial: u64,
    pub trials: u64,
    pub distinguisher: Distinguisher,
}

impl Default for Level0Params {
    fn default() -> Self {
        Level0Params {
            candidates: [LanguageSpec::cofinite([3]), LanguageSpec::Threshold(5)],
            observations: Distribution::uniform(0..20).expect("uniform on 20 points"),
            draws_per_trial: 20,
            trials: 10_000,
            distinguisher: Distinguisher::MembershipVote,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level1Params {
    pub horizon: u64,
    /// Window used for the mind-change check on the reflexive run.
    pub window: u64,
    /// Threshold labelling the control run's fixed distribution.
    pub control_target: u64,
    /// Step by which the control run is expected to have locked.
    pub control_lock_by: u64,
}

impl Default for Level1Params {
    fn default() -> Self {
        Level1Params { horizon: 2000, window: 50, control_target: 4, control_lock_by: 500 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level2Params {
    pub p0: f64,
    pub p1: f64,
    pub m: u64,
    pub trials: u64,
    /// Target success probability for the smallest-m search.
    pub target_probability: f64,
}

impl Default for Level2Params {
    fn default() -> Self {
        Level2Params { p0: 0.49, p1: 0.51, m: 10_000, trials: 2000, target_probability: 0.95 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level3Params {
    pub class: ConceptClass,
    pub target: LanguageSpec,
    pub learner: LearnerKind,
    pub generator: GeneratorStrategy,
    pub schedule: Schedule,
    pub horizon: u64,
    pub n0: u64,
}

impl Default for Level3Params {
    fn default() -> Self {
        Level3Params {
            class: ConceptClass::cofinite(),
            target: LanguageSpec::cofinite([7]),
            learner: LearnerKind::LeastWithinPrefix,
            generator: GeneratorStrategy::Intersection,
            schedule: Schedule::Fair,
            horizon: 1000,
            n0: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level4Params {
    pub class: ConceptClass,
    pub target: LanguageSpec,
    pub generator: GeneratorStrategy,
    pub schedule: Schedule,
    pub horizon: u64,
}

impl Default for Level4Params {
    fn default() -> Self {
        Level4Params {
            class: ConceptClass::cofinite(),
            target: LanguageSpec::cofinite([7]),
            generator: GeneratorStrategy::Intersection,
            schedule: Schedule::Fair,
            horizon: 1000,
        }
    }
}

/// A feedback level with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum LevelEnv {
    NoFeedback(Level0Params),
    Reflexive(Level1Params),
    Noisy(Level2Params),
    Indirect(Level3Params),
    Direct(Level4Params),
}

impl LevelEnv {
    pub fn level(&self) -> u8 {
        match self {
            LevelEnv::NoFeedback(_) => 0,
            LevelEnv::Reflexive(_) => 1,
            LevelEnv::Noisy(_) => 2,
            LevelEnv::Indirect(_) => 3,
            LevelEnv::Direct(_) => 4,
        }
    }

    /// Level `level` with parameters read from `params` (missing fields
    /// default, unknown fields are rejected).
    pub fn from_json(level: u8, params: serde_json::Value) -> Result<Self> {
        fn parse<T: serde::de::DeserializeOwned + Serialize + Default>(v: serde_json::Value) -> Result<T> {
            let mut base = serde_json::to_value(T::default()).expect("defaults serialize");
            match (v, &mut base) {
                (serde_json::Value::Null, _) => {}
                (serde_json::Value::Object(over), serde_json::Value::Object(b)) => {
                    for (k, val) in over {
                        b.insert(k, val);
                    }
                }
                (other, _) => {
                    return Err(Error::InvalidArgument(format!("level params must be an object, got {other}")))
                }
            }
            serde_path_to_error::deserialize(base)
                .map_err(|e| Error::InvalidArgument(format!("{}: {}", e.path(), e.inner())))
        }
        Ok(match level {
            0 => LevelEnv::NoFeedback(parse(params)?),
            1 => LevelEnv::Reflexive(parse(params)?),
            2 => LevelEnv::Noisy(parse(params)?),
            3 => LevelEnv::Indirect(parse(params)?),
            4 => LevelEnv::Direct(parse(params)?),
            other => return Err(Error::InvalidArgument(format!("no feedback level {other}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level0Summary {
    pub distinguisher: Distinguisher,
    pub trials: u64,
    pub correct: u64,
    pub accuracy: f64,
    pub sigma: f64,
    pub within_3_sigma: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level1Summary {
    pub horizon: u64,
    pub reflexive_mind_changes: u64,
    /// Longest run of consecutive steps without a mind change.
    pub reflexive_longest_stable_run: u64,
    pub every_window_has_change: bool,
    pub control_lock_step: u64,
    pub control_final_hypothesis: usize,
    pub control_locked_by_deadline: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level2Summary {
    pub p0: f64,
    pub p1: f64,
    pub m: u64,
    pub exact_probability: f64,
    pub normal_approximation: f64,
    pub trials: u64,
    pub simulated_frequency: f64,
    pub sigma: f64,
    pub within_3_sigma: bool,
    pub target_probability: f64,
    pub smallest_m_reaching_target: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level3Summary {
    pub identification_converged_correct: bool,
    pub identification_final_conjecture: String,
    pub generation_violations_from_n0: u64,
    pub generation_converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level4Summary {
    pub horizon: u64,
    pub emitted: u64,
    pub invalid_emissions: u64,
    pub rejected_proposals: u64,
}

/// Outcome of [`run_level`]: a level summary plus any per-step traces.
#[derive(Clone, Debug, PartialEq)]
pub enum LevelOutcome {
    NoFeedback(Level0Summary),
    Reflexive { summary: Level1Summary, reflexive: ExperimentTrace, control: ExperimentTrace },
    Noisy(Level2Summary),
    Indirect { summary: Level3Summary, identification: ExperimentTrace, generation: ExperimentTrace },
    Direct { summary: Level4Summary, trace: ExperimentTrace },
}

impl LevelOutcome {
    pub fn level(&self) -> u8 {
        match self {
            LevelOutcome::NoFeedback(_) => 0,
            LevelOutcome::Reflexive { .. } => 1,
            LevelOutcome::Noisy(_) => 2,
            LevelOutcome::Indirect { .. } => 3,
            LevelOutcome::Direct { .. } => 4,
        }
    }

    pub fn summary_json(&self) -> serde_json::Value {
        match self {
            LevelOutcome::NoFeedback(s) => json!(s),
            LevelOutcome::Reflexive { summary, .. } => json!(summary),
            LevelOutcome::Noisy(s) => json!(s),
            LevelOutcome::Indirect { summary, .. } => json!(summary),
            LevelOutcome::Direct { summary, .. } => json!(summary),
        }
    }

    /// Named per-step traces, in a fixed order.
    pub fn traces(&self) -> Vec<(&'static str, &ExperimentTrace)> {
        match self {
            LevelOutcome::Reflexive { reflexive, control, .. } => vec![("reflexive", reflexive), ("control", control)],
            LevelOutcome::Indirect { identification, generation, .. } => {
                vec![("identification", identification), ("generation", generation)]
            }
            LevelOutcome::Direct { trace, .. } => vec![("generation", trace)],
            _ => Vec::new(),
        }
    }

    /// One-line observed outcome for report tables.
    pub fn observed(&self) -> String {
        match self {
            LevelOutcome::NoFeedback(s) => format!(
                "{} accuracy {:.4} over {} trials (3 sigma = {:.4})",
                s.distinguisher.name(),
                s.accuracy,
                s.trials,
                3.0 * s.sigma
            ),
            LevelOutcome::Reflexive { summary: s, .. } => format!(
                "reflexive: {} mind changes in {} steps, longest stable run {}; control locked at step {}",
                s.reflexive_mind_changes, s.horizon, s.reflexive_longest_stable_run, s.control_lock_step
            ),
            LevelOutcome::Noisy(s) => format!(
                "m = {}: exact {:.4}, simulated {:.4}; smallest m for {:.2}: {}",
                s.m,
                s.exact_probability,
                s.simulated_frequency,
                s.target_probability,
                s.smallest_m_reaching_target.map_or("none".into(), |m| m.to_string())
            ),
            LevelOutcome::Indirect { summary: s, .. } => format!(
                "identification converged-correct: {}; generation violations after n0: {}",
                s.identification_converged_correct, s.generation_violations_from_n0
            ),
            LevelOutcome::Direct { summary: s, .. } => format!(
                "{} emissions, {} invalid, {} proposals rejected by the verifier",
                s.emitted, s.invalid_emissions, s.rejected_proposals
            ),
        }
    }
}

pub fn run_level(env: &LevelEnv, seed: u64) -> Result<LevelOutcome> {
    match env {
        LevelEnv::NoFeedback(p) => level0(p, seed).map(LevelOutcome::NoFeedback),
        LevelEnv::Reflexive(p) => level1(p, seed),
        LevelEnv::Noisy(p) => level2(p, seed).map(LevelOutcome::Noisy),
        LevelEnv::Indirect(p) => level3(p),
        LevelEnv::Direct(p) => level4(p),
    }
}

fn level0(p: &Level0Params, seed: u64) -> Result<Level0Summary> {
    if p.trials == 0 || p.draws_per_trial == 0 {
        return Err(Error::InvalidArgument("level 0 needs trials and draws_per_trial >= 1".into()));
    }
    let mut correct = 0;
    let mut obs = Vec::with_capacity(p.draws_per_trial as usize);
    for trial in 0..p.trials {
        let mut rng = rng::substream(seed, trial);
        let truth = rng::coin(&mut rng, 0.5) as usize;
        obs.clear();
        obs.extend((0..p.draws_per_trial).map(|_| p.observations.sample(&mut rng)));
        if p.distinguisher.guess(&obs, &p.candidates, &mut rng) == truth {
            correct += 1;
        }
    }
    let accuracy = correct as f64 / p.trials as f64;
    let sigma = (0.25 / p.trials as f64).sqrt();
    Ok(Level0Summary {
        distinguisher: p.distinguisher,
        trials: p.trials,
        correct,
        accuracy,
        sigma,
        within_3_sigma: (accuracy - 0.5).abs() <= 3.0 * sigma,
    })
}

/// Points where threshold hypothesis `j` changes value, within `{0..9}`.
fn boundary(j: usize) -> Vec<Instance> {
    [j as i64 - 1, j as i64].into_iter().filter(|&x| (0..10).contains(&x)).map(|x| x as u64).collect()
}

fn level1(p: &Level1Params, seed: u64) -> Result<LevelOutcome> {
    if p.horizon == 0 || p.window == 0 || p.window > p.horizon {
        return Err(Error::InvalidArgument("level 1 needs 1 <= window <= horizon".into()));
    }
    if p.control_target > 10 {
        return Err(Error::InvalidArgument("control threshold must lie in 0..=10".into()));
    }
    let hc = HypothesisClass::new(ClassShape::Thresholds, 0..10)?;
    let control_d = Distribution::uniform(0..10)?;
    let control_lang = LanguageSpec::Threshold(p.control_target);
    let run = |reflexive: bool, rng: &mut LabRng| -> Result<Vec<StepRecord>> {
        let mut counts: Vec<(Instance, u64, u64)> = (0..10).map(|x| (x, 0, 0)).collect();
        let mut h = hc.erm(&[])?;
        let mut records = Vec::with_capacity(p.horizon as usize);
        for step in 1..=p.horizon {
            let (x, y) = if reflexive {
                let pts = boundary(h);
                let x = pts[rng::below(rng, pts.len() as u64) as usize];
                (x, !hc.eval(h, x).expect("boundary lies in the universe"))
            } else {
                let x = control_d.sample(rng);
                (x, control_lang.contains(x))
            };
            if y {
                counts[x as usize].1 += 1;
            } else {
                counts[x as usize].2 += 1;
            }
            let next = hc.erm_counts(&counts)?;
            records.push(StepRecord {
                step,
                delivered: x,
                output: next.to_string(),
                mind_change: next != h,
                valid: Some(y),
                novel: None,
            });
            h = next;
        }
        Ok(records)
    };
    let reflexive = run(true, &mut rng::substream(seed, 0))?;
    let control = run(false, &mut rng::substream(seed, 1))?;

    let changes: Vec<u64> = reflexive.iter().filter(|r| r.mind_change).map(|r| r.step).collect();
    let mut bounds = vec![0];
    bounds.extend(&changes);
    bounds.push(p.horizon + 1);
    let longest = bounds.windows(2).map(|w| w[1] - w[0] - 1).max().unwrap_or(p.horizon);
    let (r_lock, r_changes, r_conv) = lock_and_convergence(&reflexive, p.window);
    let (c_lock, c_changes, c_conv) = lock_and_convergence(&control, p.window);
    let control_final: usize = control.last().map_or(0, |r| r.output.parse().unwrap_or(0));

    let summary = Level1Summary {
        horizon: p.horizon,
        reflexive_mind_changes: r_changes,
        reflexive_longest_stable_run: longest,
        every_window_has_change: longest < p.window,
        control_lock_step: c_lock,
        control_final_hypothesis: control_final,
        control_locked_by_deadline: c_lock <= p.control_lock_by,
    };
    let wrap = |records, lock, changes, converged, label: &str| ExperimentTrace {
        records,
        summary: TraceSummary {
            lock_step: lock,
            mind_changes: changes,
            violations: Vec::new(),
            converged,
            committed_target: None,
            details: details([("run", json!(label)), ("window", json!(p.window))]),
        },
    };
    Ok(LevelOutcome::Reflexive {
        summary,
        reflexive: wrap(reflexive, r_lock, r_changes, r_conv, "reflexive"),
        control: wrap(control, c_lock, c_changes, c_conv, "control"),
    })
}

/// Exact probability that a majority vote over `m` flips picks the right
/// coin when each of `p0 < p1` is equally likely; ties are split evenly.
pub fn majority_vote_success(p0: f64, p1: f64, m: u64) -> Result<f64> {
    let lf = ln_factorials(m)?;
    Ok(majority_with_table(p0, p1, m, &lf))
}

fn check_coins(p0: f64, p1: f64) -> Result<()> {
    if !(0.0 < p0 && p0 < p1 && p1 < 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 < p0 < p1 < 1, got {p0}, {p1}")));
    }
    Ok(())
}

fn ln_factorials(m: u64) -> Result<Vec<f64>> {
    if m == 0 || m > MAX_EXACT_FLIPS {
        return Err(Error::InvalidArgument(format!("flip count {m} outside 1..={MAX_EXACT_FLIPS}")));
    }
    let mut lf = Vec::with_capacity(m as usize + 1);
    lf.push(0.0);
    for k in 1..=m {
        lf.push(lf[k as usize - 1] + (k as f64).ln());
    }
    Ok(lf)
}

fn majority_with_table(p0: f64, p1: f64, m: u64, lf: &[f64]) -> f64 {
    let (l0, q0, l1, q1) = (p0.ln(), (-p0).ln_1p(), p1.ln(), (-p1).ln_1p());
    let mut right = 0.0;
    for k in 0..=m {
        let c = lf[m as usize] - lf[k as usize] - lf[(m - k) as usize];
        let pmf0 = (c + k as f64 * l0 + (m - k) as f64 * q0).exp();
        let pmf1 = (c + k as f64 * l1 + (m - k) as f64 * q1).exp();
        // heads above half → guess p1, below → p0
        match (2 * k).cmp(&m) {
            std::cmp::Ordering::Greater => right += 0.5 * pmf1,
            std::cmp::Ordering::Less => right += 0.5 * pmf0,
            std::cmp::Ordering::Equal => right += 0.25 * (pmf0 + pmf1),
        }
    }
    right
}

/// Normal approximation to [`majority_vote_success`], for reference.
pub fn majority_vote_normal(p0: f64, p1: f64, m: u64) -> f64 {
    let n = Normal::new(0.0, 1.0).expect("standard normal");
    let z = |p: f64| (p - 0.5).abs() * (m as f64).sqrt() / (p * (1.0 - p)).sqrt();
    0.5 * (n.cdf(z(p0)) + n.cdf(z(p1)))
}

/// Smallest `m ≤ max_m` whose exact success probability reaches `target`.
pub fn smallest_flips_for(p0: f64, p1: f64, target: f64, max_m: u64) -> Result<Option<u64>> {
    check_coins(p0, p1)?;
    let lf = ln_factorials(max_m)?;
    Ok((1..=max_m).find(|&m| majority_with_table(p0, p1, m, &lf) >= target))
}

fn level2(p: &Level2Params, seed: u64) -> Result<Level2Summary> {
    check_coins(p.p0, p.p1)?;
    if p.trials == 0 {
        return Err(Error::InvalidArgument("level 2 needs trials >= 1".into()));
    }
    if !(0.5 < p.target_probability && p.target_probability < 1.0) {
        return Err(Error::InvalidArgument("target probability must lie in (0.5, 1)".into()));
    }
    let exact = majority_vote_success(p.p0, p.p1, p.m)?;
    let mut right = 0u64;
    for trial in 0..p.trials {
        let mut rng = rng::substream(seed, trial);
        let which = rng::coin(&mut rng, 0.5);
        let bias = if which { p.p1 } else { p.p0 };
        let heads = (0..p.m).filter(|_| rng::coin(&mut rng, bias)).count() as u64;
        let guess = match (2 * heads).cmp(&p.m) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => rng::coin(&mut rng, 0.5),
        };
        right += (guess == which) as u64;
    }
    let freq = right as f64 / p.trials as f64;
    let sigma = (exact * (1.0 - exact) / p.trials as f64).sqrt();
    Ok(Level2Summary {
        p0: p.p0,
        p1: p.p1,
        m: p.m,
        exact_probability: exact,
        normal_approximation: majority_vote_normal(p.p0, p.p1, p.m),
        trials: p.trials,
        simulated_frequency: freq,
        sigma,
        within_3_sigma: (freq - exact).abs() <= 3.0 * sigma,
        target_probability: p.target_probability,
        smallest_m_reaching_target: smallest_flips_for(p.p0, p.p1, p.target_probability, MAX_EXACT_FLIPS)?,
    })
}

fn level3(p: &Level3Params) -> Result<LevelOutcome> {
    let window = (p.horizon / 5).max(1);
    let learner = p.learner.build(&p.class)?;
    let identification = run_identification(&p.class, &p.target, learner, &p.schedule, p.horizon, window)?;
    let gen = Generator::new(p.class.clone(), p.generator);
    let generation = run_generation(&p.class, &p.target, &gen, &p.schedule, p.horizon, p.n0)?;
    let summary = Level3Summary {
        identification_converged_correct: identification.detail("converged_correct") == Some(&json!(true)),
        identification_final_conjecture: identification
            .detail("final_conjecture")
            .and_then(|v| v.as_str())
            .unwrap_or_default()
            .to_string(),
        generation_violations_from_n0: generation.detail("violations_from_n0").and_then(|v| v.as_u64()).unwrap_or(0),
        generation_converged: generation.summary.converged,
    };
    Ok(LevelOutcome::Indirect { summary, identification, generation })
}

fn level4(p: &Level4Params) -> Result<LevelOutcome> {
    let gen = Generator::new(p.class.clone(), p.generator);
    let trace = generation_trace(&p.class, &p.target, &gen, &p.schedule, p.horizon, 1, true)?;
    let emitted = trace.records.iter().filter(|r| r.output != "none").count() as u64;
    let invalid = trace.records.iter().filter(|r| r.output != "none" && r.valid == Some(false)).count() as u64;
    let summary = Level4Summary {
        horizon: p.horizon,
        emitted,
        invalid_emissions: invalid,
        rejected_proposals: trace.detail("rejected_proposals").and_then(|v| v.as_u64()).unwrap_or(0),
    };
    Ok(LevelOutcome::Direct { summary, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent exact computation: direct products of binomial terms via
    /// repeated multiplication, feasible for small m.
    fn oracle_success(p0: f64, p1: f64, m: u64) -> f64 {
        let mut total = 0.0;
        for k in 0..=m {
            let mut c = 1.0;
            for i in 0..k {
                c = c * (m - i) as f64 / (i + 1) as f64;
            }
            let b = |p: f64| c * p.powi(k as i32) * (1.0 - p).powi((m - k) as i32);
            total += if 2 * k > m {
                0.5 * b(p1)
            } else if 2 * k < m {
                0.5 * b(p0)
            } else {
                0.25 * (b(p0) + b(p1))
            };
        }
        total
    }

    #[test]
    fn exact_matches_direct_products() {
        for m in [1, 2, 7, 50, 100, 301] {
            let a = majority_vote_success(0.49, 0.51, m).unwrap();
            assert!((a - oracle_success(0.49, 0.51, m)).abs() < 1e-10, "m = {m}");
        }
        let a = majority_vote_success(0.2, 0.7, 9).unwrap();
        assert!((a - oracle_success(0.2, 0.7, 9)).abs() < 1e-12);
    }

    #[test]
    fn coin_anchor_values() {
        let at_100 = majority_vote_success(0.49, 0.51, 100).unwrap();
        assert!((at_100 - oracle_success(0.49, 0.51, 100)).abs() < 1e-10);
        assert!((0.55..0.61).contains(&at_100), "{at_100}");
        let at_10k = majority_vote_success(0.49, 0.51, 10_000).unwrap();
        assert!((at_10k - 0.977).abs() < 0.002, "{at_10k}");
        assert!((majority_vote_normal(0.49, 0.51, 10_000) - 0.97725).abs() < 1e-3);
    }

    #[test]
    fn level0_is_chance() {
        for d in Distinguisher::ALL {
            let p = Level0Params { distinguisher: d, trials: 2000, ..Default::default() };
            let s = level0(&p, 5).unwrap();
            assert!(s.within_3_sigma, "{d:?}: {}", s.accuracy);
        }
    }

    #[test]
    fn level1_reflexive_never_settles() {
        let out = run_level(&LevelEnv::Reflexive(Level1Params::default()), 3).unwrap();
        let LevelOutcome::Reflexive { summary, .. } = out else { panic!() };
        assert!(summary.every_window_has_change);
        assert!(summary.control_locked_by_deadline);
        assert_eq!(summary.control_final_hypothesis, 4);
    }

    #[test]
    fn level4_never_releases_invalid() {
        let p = Level4Params { generator: GeneratorStrategy::LeastConsistentIndex, ..Default::default() };
        let LevelOutcome::Direct { summary, .. } = run_level(&LevelEnv::Direct(p), 0).unwrap() else { panic!() };
        assert_eq!(summary.invalid_emissions, 0);
        assert_eq!(summary.emitted, 1000);
    }

    #[test]
    fn level3_contrast() {
        let LevelOutcome::Indirect { summary, .. } =
            run_level(&LevelEnv::Indirect(Level3Params::default()), 0).unwrap()
        else {
            panic!()
        };
        assert!(!summary.identification_converged_correct);
        assert_eq!(summary.generation_violations_from_n0, 0);
    }

    #[test]
    fn level_params_from_json() {
        let env = LevelEnv::from_json(2, json!({"m": 100})).unwrap();
        assert_eq!(env, LevelEnv::Noisy(Level2Params { m: 100, ..Default::default() }));
        assert!(LevelEnv::from_json(2, json!({"flips": 100})).is_err());
        assert!(LevelEnv::from_json(7, json!({})).is_err());
        assert!(run_level(&LevelEnv::from_json(2, json!({"p0": 0.6})).unwrap(), 0).is_err());
    }
}
