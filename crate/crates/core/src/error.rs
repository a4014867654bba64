use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent on non-Laurent variable `{0}`")]
    NegativeExponent(String),
    #[error("pole: coordinate {0} is zero at a Laurent variable")]
    Pole(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a matrix factorization: Q^2 != W*Id ({residual_terms} residual terms)")]
    NotFactorization { residual_terms: usize },
    #[error("potential mismatch")]
    PotentialMismatch,
    #[error("morphism is not closed")]
    NotClosed,
    #[error("critical direction: partial derivative {0} vanishes at the point")]
    CriticalDirection(usize),
    #[error("budget exceeded: search needs {required} unknown bits, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("window overflow: {0}")]
    WindowOverflow(String),
    #[error("clear denominators first: Groebner bases need a polynomial ring")]
    LaurentInput,
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
