use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("grade {grade} out of range: {reason}")]
    GradeOutOfRange { grade: usize, reason: String },

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("form is not closed (d of it is nonzero)")]
    NotClosed,

    #[error("form is not coclosed (delta of it is nonzero)")]
    NotCoclosed,

    #[error("no copotential exists for a top-degree form (grade {grade} = dimension)")]
    NoCopotential { grade: usize },

    #[error("source is not conserved: {0}")]
    NotConserved(String),

    #[error("linear system has no solution within coefficient degree bound {bound}: {what}")]
    InconsistentSystem { bound: u32, what: String },

    #[error("grade mismatch: {0}")]
    GradeMismatch(String),

    #[error("not a solution: nonzero residual(s) {}", .failing.join(", "))]
    NotASolution { failing: Vec<String> },

    #[error("syntax error at byte {pos}: expected {expected}")]
    Syntax { pos: usize, expected: String },

    #[error("non-rational literal `{0}` (write decimals as p/q)")]
    NonRationalLiteral(String),

    #[error("malformed JSON form: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn grade(grade: usize, reason: impl Into<String>) -> Self {
        Error::GradeOutOfRange {
            grade,
            reason: reason.into(),
        }
    }
}
