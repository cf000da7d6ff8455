use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set is empty")]
    EmptyGround,

    #[error("block is empty")]
    EmptyBlock,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partitions are over different ground sets")]
    GroundMismatch,

    #[error("invalid grid shape: {0}")]
    InvalidShape(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A malformed atom in a distribution file.
    #[error("atom {atom}: {message}")]
    AtomParse { atom: usize, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("conditioning value {0} has zero marginal probability")]
    ZeroMarginal(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// True for errors caused by malformed input text rather than bad parameters.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::AtomParse { .. } | Error::Parse(_))
    }
}
