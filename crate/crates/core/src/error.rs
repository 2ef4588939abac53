use thiserror::Error;

/// Errors raised by the library. Each variant maps onto a stable,
/// module-qualified code (see [`Error::code`]) used by the CLI reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("both polynomials are zero")]
    BothZero,
    #[error("degree {0} is too low for this operation")]
    DegreeTooLow(usize),
    #[error("degree {degree} exceeds the supported cap {cap}")]
    DegreeTooHigh { degree: usize, cap: usize },
    #[error("operands live in different number fields")]
    FieldMismatch,
    #[error("division by zero")]
    ZeroDivision,
    #[error("element does not generate the ambient field")]
    NotAGenerator,
    #[error("element is not an algebraic integer")]
    NotIntegral,
    #[error("invalid field definition: {0}")]
    InvalidField(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error("congruence condition fails: {0}")]
    CongruenceFail(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("Galois group is not S4: {0}")]
    NotS4(String),
    #[error("no exponent t found within {0} steps")]
    NoTFound(usize),
    #[error("degenerate family member: {0}")]
    DegenerateMember(String),
    #[error("search box too large: {size} elements exceeds cap {cap}")]
    BoxTooLarge { size: u128, cap: usize },
    #[error("conjugates collide at {0} bits")]
    ConjugatesCollide(u32),
    #[error("precision exhausted at {0} bits")]
    PrecisionExhausted(u32),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("closure exceeded {0} states")]
    ClosureOverflow(usize),
    #[error("digit expansion cycles through {state:?}")]
    CycleDetected { state: Vec<String> },
    #[error("digit expansion exceeded {0} steps")]
    IterationCap(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Module-qualified error code, e.g. `exact_core.BOTH_ZERO`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::BothZero => "exact_core.BOTH_ZERO",
            Error::DegreeTooLow(_) => "exact_core.DEGREE_TOO_LOW",
            Error::DegreeTooHigh { .. } => "exact_core.DEGREE_TOO_HIGH",
            Error::FieldMismatch => "numfield.FIELD_MISMATCH",
            Error::ZeroDivision => "numfield.ZERO_DIVISION",
            Error::NotAGenerator => "numfield.NOT_A_GENERATOR",
            Error::NotIntegral => "orders.NOT_INTEGRAL",
            Error::InvalidField(_) => "numfield.INVALID_FIELD",
            Error::PreconditionFailed(_) => "orders.PRECONDITION_FAILED",
            Error::AssertionFailed(_) => "orders.ASSERTION_FAILED",
            Error::CongruenceFail(_) => "families.CONGRUENCE_FAIL",
            Error::InvalidMatrix(_) => "families.INVALID_MATRIX",
            Error::NotAUnit => "families.NOT_A_UNIT",
            Error::Reducible(_) => "families.REDUCIBLE",
            Error::NotS4(_) => "families.NOT_S4",
            Error::NoTFound(_) => "families.NO_T_FOUND",
            Error::DegenerateMember(_) => "families.DEGENERATE_MEMBER",
            Error::BoxTooLarge { .. } => "uniteq.BOX_TOO_LARGE",
            Error::ConjugatesCollide(_) => "embeddings.CONJUGATES_COLLIDE",
            Error::PrecisionExhausted(_) => "embeddings.PRECISION_EXHAUSTED",
            Error::NotSquarefree => "embeddings.NOT_SQUAREFREE",
            Error::ClosureOverflow(_) => "cns.CLOSURE_OVERFLOW",
            Error::CycleDetected { .. } => "cns.CYCLE_DETECTED",
            Error::IterationCap(_) => "cns.ITERATION_CAP",
            Error::Parse(_) => "cli.PARSE",
        }
    }

    /// True for errors that signal a violated mathematical invariant (an
    /// implementation bug) rather than bad input.
    pub fn is_assertion(&self) -> bool {
        matches!(self, Error::AssertionFailed(_) | Error::NoTFound(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
