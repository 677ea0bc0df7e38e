use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::universe::Instance;

/// One position of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: u64,
    pub delivered: Instance,
    /// Conjectured index (identification) or emitted instance (generation).
    pub output: String,
    pub mind_change: bool,
    pub valid: Option<bool>,
    pub novel: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub lock_step: u64,
    pub mind_changes: u64,
    pub violations: Vec<u64>,
    pub converged: bool,
    pub committed_target: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTrace {
    pub records: Vec<StepRecord>,
    pub summary: TraceSummary,
}

pub const CSV_HEADER: &str = "step,delivered,conjecture_or_emission,mind_change,valid,novel";

fn flag(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "1",
        Some(false) => "0",
        None => "",
    }
}

impl ExperimentTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.step,
                r.delivered,
                r.output,
                r.mind_change as u8,
                flag(r.valid),
                flag(r.novel)
            );
        }
        out
    }

    pub fn detail(&self, key: &str) -> Option<&Value> {
        self.summary.details.get(key)
    }

    pub fn mind_change_steps(&self) -> Vec<u64> {
        self.records.iter().filter(|r| r.mind_change).map(|r| r.step).collect()
    }
}

/// Last mind change (1 when there is none) and whether the final `window`
/// steps are free of mind changes.
pub(crate) fn lock_and_convergence(records: &[StepRecord], window: u64) -> (u64, u64, bool) {
    let horizon = records.len() as u64;
    let changes: Vec<u64> = records.iter().filter(|r| r.mind_change).map(|r| r.step).collect();
    let lock = changes.last().copied().unwrap_or(1);
    let converged = changes.iter().all(|&s| s + window <= horizon);
    (lock, changes.len() as u64, converged)
}

pub(crate) fn details<const N: usize>(pairs: [(&str, Value); N]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
