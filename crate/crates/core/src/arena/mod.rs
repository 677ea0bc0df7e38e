//! Dynamic experiments: identification and generation in the limit, the
//! diagonal adversary, feedback levels, and the PAC harness.

mod levels;
mod limit;
mod pac;
mod schedule;
mod trace;

pub use levels::{
    majority_vote_normal, majority_vote_success, run_level, smallest_flips_for, Distinguisher, Level0Params,
    Level0Summary, Level1Params, Level1Summary, Level2Params, Level2Summary, Level3Params, Level3Summary, Level4Params,
    Level4Summary, LevelEnv, LevelOutcome, MAX_EXACT_FLIPS,
};
pub use limit::{
    adversarial_superfinite_run, run_generation, run_generation_verified, run_identification, simulate_generation,
    AdversaryOutcome, GenerationStep,
};
pub use pac::{
    erm_sample_sizes, log_log_slope, pac_experiment, NamedDistribution, PacDistributionResult, PacOutcome, PacSummary,
    PacTrialRecord, SampleSizeSummary,
};
pub use schedule::{Enumeration, Schedule};
pub use trace::{ExperimentTrace, StepRecord, TraceSummary, CSV_HEADER};
