use thiserror::Error;

/// Errors raised by series arithmetic and Betti extraction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term {0} is not a unit Laurent monomial")]
    NonUnitConstantTerm(String),
    #[error("{dividend} is not divisible by {divisor}")]
    InexactDivision { dividend: String, divisor: String },
    #[error("coefficient of t^{exponent} at q^{n} is {value}, not a non-negative integer")]
    NegativeOrFractionalBetti { n: usize, exponent: i64, value: String },
    #[error("requested q^{n} but the series is truncated at order {order}")]
    BeyondOrder { n: usize, order: usize },
}

/// Errors raised when building cycle classes or parsing the cycle grammar.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("invalid support dimension {0}")]
    InvalidSupport(u8),
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("bubble {0} is empty")]
    EmptyBubble(usize),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Errors raised by relation constructors and the reduction engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("push target {target} not found in {cycle}")]
    TargetNotFound { cycle: String, target: String },
    #[error("bubble {bubble} of {cycle} lacks the factors {wanted}")]
    FactorsNotFound { cycle: String, bubble: usize, wanted: String },
    #[error("reduction exceeded {0} rewrite steps")]
    NonTermination(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("expression mixes lengths {0} and {1}")]
    MixedLengths(u32, u32),
}
