use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::json;

use super::schedule::Schedule;
use super::trace::{details, lock_and_convergence, ExperimentTrace, StepRecord, TraceSummary};
use crate::error::{Error, Result};
use crate::mechanisms::{Conjecture, GenerationState, Generator, Learner};
use crate::universe::{ClassKind, ConceptClass, Index, Instance, LanguageSpec};

/// One position of a generation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationStep {
    pub position: u64,
    pub delivered: Instance,
    /// `None` when the generator found nothing to emit within its budget.
    pub emitted: Option<Instance>,
    pub valid: bool,
    pub novel: bool,
    /// Proposals a verifier turned away at this position.
    pub rejected: u64,
}

/// Drives `gen` along the schedule's enumeration of `target` for `horizon`
/// positions. Position `n` consults indices `0..=n`. With `verify`, each
/// proposal outside the target is withheld and excluded for the rest of the
/// run before the generator proposes again.
pub fn simulate_generation(
    gen: &Generator,
    target: &LanguageSpec,
    schedule: &Schedule,
    horizon: u64,
    verify: bool,
) -> Result<Vec<GenerationStep>> {
    let mut stream = schedule.enumerate(target)?;
    let mut state = GenerationState::new(gen);
    let mut excluded = BTreeSet::new();
    let mut steps = Vec::with_capacity(horizon as usize);
    for n in 1..=horizon {
        let x = stream.next().ok_or_else(|| Error::InvalidArgument(format!("enumeration ended at position {n}")))?;
        state.observe(x);
        let mut rejected = 0;
        let emitted = loop {
            match state.generate(n + 1, &excluded) {
                Ok(e) if verify && !target.contains(e) => {
                    excluded.insert(e);
                    rejected += 1;
                }
                Ok(e) => break Some(e),
                Err(Error::Exhausted { .. } | Error::NoConsistentIndex) => break None,
                Err(other) => return Err(other),
            }
        };
        let valid = emitted.is_some_and(|e| target.contains(e));
        let novel = emitted.is_none_or(|e| !state.sample().contains(e));
        steps.push(GenerationStep { position: n, delivered: x, emitted, valid, novel, rejected });
    }
    Ok(steps)
}

fn index_in(class: &ConceptClass, target: &LanguageSpec) -> Result<Index> {
    class.index_of(target).ok_or_else(|| Error::TargetNotInClass(format!("{target} is not in {class}")))
}

fn index_json(i: &Index) -> serde_json::Value {
    json!(i.to_string())
}

/// Feeds schedule positions `1..=horizon` to `learner`.
pub fn run_identification(
    class: &ConceptClass,
    target: &LanguageSpec,
    mut learner: Learner,
    schedule: &Schedule,
    horizon: u64,
    stability_window: u64,
) -> Result<ExperimentTrace> {
    if stability_window == 0 || horizon < stability_window {
        return Err(Error::InvalidArgument(format!(
            "need horizon >= window >= 1, got horizon {horizon} and window {stability_window}"
        )));
    }
    if learner.class() != class {
        return Err(Error::InvalidArgument(format!("learner studies {} but the run uses {class}", learner.class())));
    }
    let target_index = index_in(class, target)?;
    let right = Conjecture::Index(target_index.clone());
    let mut stream = schedule.enumerate(target)?;
    let mut records = Vec::with_capacity(horizon as usize);
    let mut previous: Option<Conjecture> = None;
    let mut incorrect = 0u64;
    let mut first_correct: Option<u64> = None;
    for step in 1..=horizon {
        let x = stream.next().ok_or_else(|| Error::InvalidArgument(format!("enumeration ended at position {step}")))?;
        let conj = learner.observe_and_conjecture(x);
        let mind_change = previous.as_ref().is_some_and(|p| *p != conj);
        let correct = conj == right;
        if correct {
            first_correct.get_or_insert(step);
        } else {
            incorrect += 1;
        }
        records.push(StepRecord {
            step,
            delivered: x,
            output: conj.to_string(),
            mind_change,
            valid: Some(correct),
            novel: None,
        });
        previous = Some(conj);
    }
    let (lock_step, mind_changes, converged) = lock_and_convergence(&records, stability_window);
    let final_conj = previous.expect("horizon >= 1");
    let converged_correct = converged && final_conj == right;
    Ok(ExperimentTrace {
        records,
        summary: TraceSummary {
            lock_step,
            mind_changes,
            violations: Vec::new(),
            converged,
            committed_target: Some(target.to_string()),
            details: details([
                ("class", json!(class.to_string())),
                ("learner", json!(learner.strategy().name())),
                ("schedule", json!(schedule.name())),
                ("horizon", json!(horizon)),
                ("stability_window", json!(stability_window)),
                ("target_index", index_json(&target_index)),
                ("final_conjecture", json!(final_conj.to_string())),
                ("converged_correct", json!(converged_correct)),
                ("first_correct_step", json!(first_correct)),
                ("incorrect_steps", json!(incorrect)),
            ]),
        },
    })
}

/// Runs `gen` along the schedule and records validity and novelty per
/// position. `converged` means no violation at any position `>= n0`.
pub fn run_generation(
    class: &ConceptClass,
    target: &LanguageSpec,
    gen: &Generator,
    schedule: &Schedule,
    horizon: u64,
    n0: u64,
) -> Result<ExperimentTrace> {
    generation_trace(class, target, gen, schedule, horizon, n0, false)
}

/// [`run_generation`] with a membership verifier between generator and
/// output: invalid proposals are withheld and excluded, then re-proposed.
pub fn run_generation_verified(
    class: &ConceptClass,
    target: &LanguageSpec,
    gen: &Generator,
    schedule: &Schedule,
    horizon: u64,
) -> Result<ExperimentTrace> {
    generation_trace(class, target, gen, schedule, horizon, 1, true)
}

pub(crate) fn generation_trace(
    class: &ConceptClass,
    target: &LanguageSpec,
    gen: &Generator,
    schedule: &Schedule,
    horizon: u64,
    n0: u64,
    verify: bool,
) -> Result<ExperimentTrace> {
    if !class.all_infinite() {
        return Err(Error::FiniteLanguageInClass(class.to_string()));
    }
    if gen.class() != class {
        return Err(Error::InvalidArgument(format!("generator studies {} but the run uses {class}", gen.class())));
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let target_index = index_in(class, target)?;
    let steps = simulate_generation(gen, target, schedule, horizon, verify)?;

    let mut violations = Vec::new();
    let (mut invalid, mut collided, mut silent, mut rejected) = (0u64, 0u64, 0u64, 0u64);
    let mut from_target_index = 0u64;
    let mut records = Vec::with_capacity(steps.len());
    for s in &steps {
        invalid += !s.valid as u64;
        collided += !s.novel as u64;
        silent += s.emitted.is_none() as u64;
        rejected += s.rejected;
        if !(s.valid && s.novel) {
            violations.push(s.position);
            if Index::from(s.position) >= target_index {
                from_target_index += 1;
            }
        }
        records.push(StepRecord {
            step: s.position,
            delivered: s.delivered,
            output: s.emitted.map_or_else(|| "none".to_string(), |e| e.to_string()),
            mind_change: false,
            valid: Some(s.valid),
            novel: Some(s.novel),
        });
    }
    let clean_from = violations.last().map_or(1, |&v| v + 1);
    let after_n0 = violations.iter().filter(|&&v| v >= n0).count() as u64;
    Ok(ExperimentTrace {
        records,
        summary: TraceSummary {
            lock_step: clean_from.min(horizon),
            mind_changes: 0,
            violations,
            converged: after_n0 == 0,
            committed_target: Some(target.to_string()),
            details: details([
                ("class", json!(class.to_string())),
                ("generator", json!(gen.strategy().name())),
                ("verifier", json!(verify)),
                ("schedule", json!(schedule.name())),
                ("horizon", json!(horizon)),
                ("n0", json!(n0)),
                ("target_index", index_json(&target_index)),
                ("validity_violations", json!(invalid)),
                ("novelty_violations", json!(collided)),
                ("silent_steps", json!(silent)),
                ("violations_from_n0", json!(after_n0)),
                ("violations_from_target_index", json!(from_target_index)),
                ("first_violation_free_suffix_start", json!(clean_from)),
                ("rejected_proposals", json!(rejected)),
            ]),
        },
    })
}

/// Result of [`adversarial_superfinite_run`].
#[derive(Clone, Debug, PartialEq)]
pub struct AdversaryOutcome {
    pub committed_target: LanguageSpec,
    pub committed_index: Index,
    pub trace: ExperimentTrace,
    /// Final conjecture differs from the committed target.
    pub wrong: bool,
    /// A mind change happened within the final `horizon / 5` steps.
    pub unstable: bool,
}

impl AdversaryOutcome {
    pub fn defeated(&self) -> bool {
        self.wrong || self.unstable
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Fresh,
    Padding,
}

/// Diagonal enumeration against a SUPERFINITE learner: ascending fresh
/// elements while the learner guesses a finite set, re-delivery of seen
/// elements once it guesses ℕ. The target is frozen at the horizon: ℕ if
/// still delivering fresh elements, the seen set if padding.
pub fn adversarial_superfinite_run(mut learner: Learner, horizon: u64) -> Result<AdversaryOutcome> {
    if learner.class().kind() != ClassKind::Superfinite {
        return Err(Error::InvalidArgument(format!(
            "the adversary needs a SUPERFINITE learner, got {}",
            learner.class()
        )));
    }
    if horizon < 10 {
        return Err(Error::InvalidArgument(format!("horizon {horizon} is below 10")));
    }
    let all = Conjecture::Index(Index::zero());
    let mut mode = Mode::Fresh;
    let mut next_fresh: Instance = 0;
    // bit k set iff k has been delivered; the seen set's index is this + 1
    let mut seen_code = BigUint::zero();
    let mut pad_cursor = 0u64;
    let mut switches = 0u64;
    let mut records = Vec::with_capacity(horizon as usize);
    let mut previous: Option<Conjecture> = None;
    for step in 1..=horizon {
        let x = match mode {
            Mode::Fresh => {
                let x = next_fresh;
                next_fresh += 1;
                seen_code.set_bit(x, true);
                x
            }
            Mode::Padding => {
                let x = pad_cursor % next_fresh;
                pad_cursor += 1;
                x
            }
        };
        let conj = learner.observe_and_conjecture(x);
        let seen_set = Conjecture::Index(&seen_code + BigUint::one());
        let next_mode = if conj == all {
            Mode::Padding
        } else if conj == seen_set {
            Mode::Fresh
        } else {
            mode
        };
        if next_mode != mode {
            switches += 1;
            pad_cursor = 0;
        }
        mode = next_mode;
        let mind_change = previous.as_ref().is_some_and(|p| *p != conj);
        records.push(StepRecord {
            step,
            delivered: x,
            output: conj.to_string(),
            mind_change,
            valid: None,
            novel: None,
        });
        previous = Some(conj);
    }

    let (committed_target, committed_index) = match mode {
        Mode::Fresh => (LanguageSpec::All, Index::zero()),
        Mode::Padding => (LanguageSpec::finite_set(0..next_fresh), &seen_code + BigUint::one()),
    };
    let mut violations = Vec::new();
    for r in &mut records {
        let ok = committed_target.contains(r.delivered);
        r.valid = Some(ok);
        if !ok {
            violations.push(r.step);
        }
    }
    let window = horizon / 5;
    let (lock_step, mind_changes, converged) = lock_and_convergence(&records, window);
    let final_conj = previous.expect("horizon >= 10");
    let wrong = final_conj != Conjecture::Index(committed_index.clone());
    let unstable = !converged;
    let trace = ExperimentTrace {
        records,
        summary: TraceSummary {
            lock_step,
            mind_changes,
            violations,
            converged,
            committed_target: Some(committed_target.to_string()),
            details: details([
                ("learner", json!(learner.strategy().name())),
                ("horizon", json!(horizon)),
                ("stability_window", json!(window)),
                ("final_mode", json!(if mode == Mode::Fresh { "fresh" } else { "padding" })),
                ("mode_switches", json!(switches)),
                ("committed_index", index_json(&committed_index)),
                ("final_conjecture", json!(final_conj.to_string())),
                ("wrong", json!(wrong)),
                ("unstable", json!(unstable)),
                ("defeated", json!(wrong || unstable)),
            ]),
        },
    };
    Ok(AdversaryOutcome { committed_target, committed_index, trace, wrong, unstable })
}
