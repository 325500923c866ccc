use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("variable mismatch: expected [{expected}], found [{found}]")]
    VariableMismatch { expected: String, found: String },

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("algebra is not finite-dimensional")]
    NotFinite,

    #[error("algebra is not local: generator `{0}` is not nilpotent")]
    NotLocal(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("enumeration requires a finite field, got {0}")]
    InfiniteField(String),

    #[error("symmetric functor has no ambient algebra at the scheme level")]
    SymmetricUnsupported,

    #[error("level {level} out of range (skeletal level {max})")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("not a closed immersion: {0}")]
    NotClosedImmersion(String),

    #[error("chain check failed at index {index}: generator `{generator}` not in the previous ideal")]
    ChainFailure { index: usize, generator: String },

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("base mismatch: {0}")]
    BaseMismatch(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("inclusion failure at member {index}, level {level}")]
    InclusionFailure { index: usize, level: usize },

    #[error("incompatible family between members {0} and {1}")]
    Incompatible(usize, usize),

    #[error("simplicial identity violated: {0}")]
    IdentityViolation(String),

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("{0}")]
    Invalid(String),
}
