use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different rings: {left} vs {right}")]
    MixedRings { left: String, right: String },

    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("wrong arity: expected {expected} components, found {found}")]
    WrongArity { expected: usize, found: usize },

    #[error("polynomial degree {degree} exceeds guard {guard}")]
    GrowthExceeded { degree: usize, guard: usize },

    #[error("operation `{operation}` is not supported on carrier {carrier}")]
    UnsupportedCarrier {
        operation: &'static str,
        carrier: String,
    },

    #[error("malformed chain at triple {index}: expected x <= y <= z")]
    MalformedTriple { index: usize },

    #[error("sequence is not weakly increasing at index {index}")]
    NotIncreasing { index: usize },

    #[error("{0} is not a member of the given open set")]
    NotMember(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("no separating open found within a prefix of length {prefix}")]
    NoWitnessFound { prefix: usize },

    #[error("{0} is not strictly positive")]
    NotPositive(String),

    #[error("seminorm is not definite: f({difference}) = 0 for distinct elements")]
    NotDefinite { difference: String },

    #[error("no multiplication modulus: {0}")]
    NoModulus(String),

    #[error("invariant violated at step {index}: {detail}")]
    InvariantViolation { index: usize, detail: String },

    #[error("left and right inverse candidates differ: {right} vs {left}")]
    DirectionalMismatch { right: String, left: String },

    #[error("partial sums fail the Cauchy check against window {window}")]
    NotCauchy { window: String },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}
