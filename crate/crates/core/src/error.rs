use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty word")]
    EmptyWord,

    #[error("invalid label `{0}`")]
    InvalidLabel(String),

    /// Syntax error in a word or formula; `offset` is a byte offset.
    #[error("syntax error at column {}: {message}", .offset + 1)]
    Syntax { offset: usize, message: String },

    /// Diagnostic from the model file parser.
    #[error("{line}:{col}: {message}")]
    Model { line: usize, col: usize, message: String },

    #[error("invalid GST: {}", .0.join("; "))]
    InvalidGst(Vec<String>),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("strong bisimulation supported only for discrete GSTs")]
    NotDiscrete,

    #[error("states are bisimilar; no distinguishing formula exists")]
    Bisimilar,

    #[error("invalid collapse hint: {0}")]
    InvalidHint(String),

    #[error("rank undefined on state `{0}`")]
    RankUndefined(String),

    #[error("state space budget exhausted; unknown beyond depth {0}")]
    Exhausted(usize),
}

impl Error {
    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        Error::Syntax { offset, message: message.into() }
    }
}
