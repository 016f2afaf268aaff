use thiserror::Error;

/// Errors shared across the engine.
#[derive(Debug, Error)]
pub enum EngineError {
    /// A fundamental form whose determinant is identically zero cannot drive
    /// the operator.
    #[error("degenerate fundamental form: determinant is identically zero")]
    DegenerateForm,

    /// An expression left the closed rational class the engine works in
    /// (for example a denominator that is not a monomial in the pole atoms).
    #[error("expression outside the engine's rational class: {0}")]
    NonRationalStructure(String),

    /// A canonical numerator grew past the configured monomial budget.
    #[error("expression budget exceeded: {size} monomials > budget {budget}")]
    ExpressionBudgetExceeded { size: usize, budget: usize },

    /// The sample matrix is numerically meaningless (largest pivot below 1e-12).
    #[error("ill-conditioned samples: resample with a different seed or more points")]
    IllConditionedSamples,

    /// Numeric evaluation hit a vanishing denominator.
    #[error("division by a near-zero denominator during evaluation")]
    DivisionNearZero,

    /// The evaluation profile does not supply a value for a symbol.
    #[error("numeric profile is missing a value for symbol {0}")]
    MissingSymbol(String),

    /// Symbolic and numeric verdicts disagreed; this indicates an engine bug,
    /// not a user error.
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),

    /// Frame-based and ambient vectors cannot be combined.
    #[error("mixed vector kinds: frame and ambient vectors cannot be combined")]
    MixedFrames,

    /// A contract precondition was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A chart document or CLI value failed to parse.
    #[error("parse error: {0}")]
    ParseError(String),

    /// A claim id not present in the registry.
    #[error("unknown claim id: {0}")]
    UnknownClaim(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;
