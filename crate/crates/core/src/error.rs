use thiserror::Error;

use crate::universe::Instance;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} is outside the index range of {class}")]
    IndexOutOfRange { class: String, index: String },

    #[error("rank {rank} exceeds the cardinality of the language")]
    RankOutOfRange { rank: u64 },

    #[error("invalid language: {0}")]
    InvalidLanguage(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no novel candidate found after scanning {scanned} instances")]
    Exhausted { scanned: u64 },

    #[error("no index in the searched range is consistent with the sample")]
    NoConsistentIndex,

    #[error("generation requires an infinite target language")]
    FiniteTarget,

    #[error("class {0} contains a finite language; generation requires infinite languages")]
    FiniteLanguageInClass(String),

    #[error("target not in class: {0}")]
    TargetNotInClass(String),

    #[error("mechanism `{mechanism}` cannot be scored by risk `{risk}`")]
    IncompatiblePairing { mechanism: String, risk: String },

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("setup is not realizable: {0}")]
    NonRealizable(String),

    #[error("distribution invalid: {0}")]
    InvalidDistribution(String),

    #[error("instance {0} lies outside the declared universe")]
    OutsideUniverse(Instance),
}
