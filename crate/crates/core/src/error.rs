//! Error type shared across the crate.

use crate::lang::Element;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Brute-force subset enumeration refuses classes above this size.
    #[error("class too large for brute force: {size} languages (cap {cap})")]
    ClassTooLarge { size: usize, cap: usize },

    #[error("language index {index} out of range (class has {max})")]
    IndexOutOfRange { index: usize, max: usize },

    /// The weighted argmax enumerates subsets of the positive-weight set.
    #[error("active set too large for subset enumeration: {size} (cap {cap})")]
    ActiveSetTooLarge { size: usize, cap: usize },

    /// Contract violation: the generator repeated a revealed element.
    #[error("generator repeated a revealed element at step {t}: {element}")]
    GeneratorRepeatedElement { t: u64, element: Element },

    /// Contract violation: the adversary repeated one of its own outputs.
    #[error("adversary repeated element at step {t}: {element}")]
    AdversaryRepeatedElement { t: u64, element: Element },

    #[error("adversary never declared a target within the horizon")]
    AdversaryNeverDeclaredTarget,

    #[error("noise source intersects class language {index}")]
    NoiseSourceCollision { index: usize },

    #[error("mistake bound is unbounded: growth function never reaches index {index}")]
    UnboundedMistakeBound { index: usize },

    #[error("gamma must lie in (0, 3/4] or equal 1, got {gamma}")]
    InvalidGamma { gamma: String },

    #[error("minimax search budget exceeded: {0}")]
    SearchBudgetExceeded(String),

    #[error("invalid language: {0}")]
    InvalidLanguage(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
