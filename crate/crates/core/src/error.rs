use thiserror::Error;

/// Every failure surfaced by the library.
///
/// The variants are grouped by what a caller can do about them: fix the
/// input (`DegenerateInput`, `Precondition`, `Parse`, `Unsupported`), raise a
/// budget (`BudgetExceeded`), or accept that the randomized or hypothesis
/// driven machinery did not produce an object (`HypothesisFailure`,
/// `WitnessNotFound`, `RetryExhausted`, `EmbeddingFailed`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis failure{}: {what} (count {count}, budget {budget})", level_suffix(*.level))]
    HypothesisFailure {
        what: String,
        level: Option<usize>,
        count: String,
        budget: String,
    },

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: String,
        budget: u64,
    },

    #[error("no witness found after {trials} sampled trials: {detail}")]
    WitnessNotFound { trials: u64, detail: String },

    #[error("retry budget exhausted after {attempts} attempts: {detail}")]
    RetryExhausted { attempts: u32, detail: String },

    #[error("embedding failed: {0}")]
    EmbeddingFailed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn level_suffix(level: Option<usize>) -> String {
    match level {
        Some(l) => format!(" at level {l}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed: impl ToString, budget: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed: needed.to_string(),
            budget,
        }
    }

    pub(crate) fn hypothesis(
        what: impl Into<String>,
        level: Option<usize>,
        count: impl ToString,
        budget: impl ToString,
    ) -> Self {
        Error::HypothesisFailure {
            what: what.into(),
            level,
            count: count.to_string(),
            budget: budget.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
