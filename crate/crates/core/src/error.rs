use thiserror::Error;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("state not found: {0}")]
    StateNotFound(String),

    #[error("map is not total: no image for {0}")]
    MapNotTotal(String),

    #[error("stride must be at least 1")]
    InvalidStride,

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("measurement domain does not match the state set: {0}")]
    DomainMismatch(String),

    #[error("delay window must be at least 1")]
    InvalidWindow,

    #[error("sequence of length {len} is too short for window {window}")]
    SequenceTooShort { len: usize, window: usize },

    #[error("word not in generator domain: {0}")]
    UnknownWord(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("order {order} exceeds horizon {horizon}")]
    OrderTooLarge { order: usize, horizon: usize },

    #[error("reconstruction is not deterministic: {0}")]
    NondeterministicReconstruction(String),

    #[error("invalid timeseries-data morphism: {0}")]
    InvalidTsdMorphism(String),

    #[error("jump is already 0, nothing to reduce")]
    NothingToReduce,

    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),

    #[error("words must be nonempty")]
    EmptyWord,

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::StateNotFound(_) => "StateNotFound",
            Error::MapNotTotal(_) => "MapNotTotal",
            Error::InvalidStride => "InvalidStride",
            Error::InvalidDiagram(_) => "InvalidDiagram",
            Error::DomainMismatch(_) => "DomainMismatch",
            Error::InvalidWindow => "InvalidWindow",
            Error::SequenceTooShort { .. } => "SequenceTooShort",
            Error::UnknownWord(_) => "UnknownWord",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::AlphabetMismatch(_) => "AlphabetMismatch",
            Error::OrderTooLarge { .. } => "OrderTooLarge",
            Error::NondeterministicReconstruction(_) => "NondeterministicReconstruction",
            Error::InvalidTsdMorphism(_) => "InvalidTsdMorphism",
            Error::NothingToReduce => "NothingToReduce",
            Error::InvalidIdentifier(_) => "InvalidIdentifier",
            Error::EmptyWord => "EmptyWord",
            Error::Format(_) => "Format",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
