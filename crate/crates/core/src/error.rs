use thiserror::Error;

use crate::format::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incomplete assignment: expected {expected} values, got {got}")]
    IncompleteAssignment { expected: usize, got: usize },

    #[error("symbol {symbol} out of range for vertex `{vertex}` (alphabet size {alphabet})")]
    SymbolOutOfRange {
        vertex: String,
        symbol: u32,
        alphabet: u32,
    },

    #[error("no constraints")]
    NoConstraints,

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("vertex index {0} out of range")]
    VertexIndexOutOfRange(usize),

    #[error("alphabet size must be positive")]
    EmptyAlphabet,

    #[error("constraint table too large: {0}")]
    ConstraintTooLarge(String),

    #[error("empty reconfiguration sequence")]
    EmptySequence,

    #[error("invalid reconfiguration step at index {index}: {changed} vertices changed")]
    InvalidStep { index: usize, changed: usize },

    #[error("sequence endpoint mismatch: {0}")]
    EndpointMismatch(&'static str),

    #[error("instance too large for exact search: {configurations} configurations exceed budget {budget}")]
    StateBudgetExceeded { configurations: u128, budget: u64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("bit length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error(
        "codeword path retries exhausted after {attempts} attempts: step {step} is within \
         {distance} positions of Had({gamma})"
    )]
    RetriesExhausted {
        attempts: u32,
        gamma: u64,
        step: usize,
        distance: u32,
    },

    #[error("endpoint assignment does not satisfy the graph ({0})")]
    UnsatisfiedEndpoint(&'static str),

    #[error("unsatisfiable circuit")]
    UnsatisfiableCircuit,

    #[error("micro oracle out of range: n = {0} (at most 3)")]
    MicroOracleOutOfRange(u32),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
