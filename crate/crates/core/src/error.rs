use thiserror::Error;

use crate::bipoly::BiDeg;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bidegree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: String, found: String },

    #[error("bidegree subtraction {lhs} - {rhs} is negative")]
    NegativeDegree { lhs: BiDeg, rhs: BiDeg },

    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,

    #[error("operation requires a nonzero input")]
    ZeroInput,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: String,
    },

    #[error("generators not independent")]
    DependentGenerators,

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("found {uv} syzygies of bidegree (0,1) and {st} of bidegree (1,0); at most one is possible for basepoint-free input with a,b >= 2")]
    MultipleLinearSyzygies { uv: usize, st: usize },

    #[error("vector is not a syzygy of the generators")]
    NotASyzygy,

    #[error("linear syzygy is degenerate ({0})")]
    DegenerateLinearSyzygy(String),

    #[error("degree too low: {0}")]
    DegreeTooLow(String),

    #[error("determinant of the strand matrix vanishes")]
    SingularStrand,

    #[error("determinant has degree {found}, expected {expected}")]
    DegreeAnomaly { expected: u32, found: u32 },

    #[error("determinant is not a scalar multiple of a power of its squarefree part")]
    NotAPower,

    #[error("surface has basepoints ({0})")]
    Basepoints(String),
}

impl Error {
    /// Stable machine-readable code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegreeMismatch { .. } => "DEGREE_MISMATCH",
            Error::NegativeDegree { .. } => "NEGATIVE_DEGREE",
            Error::NotDivisible => "NOT_DIVISIBLE",
            Error::ZeroInput => "ZERO_INPUT",
            Error::NotSquare { .. } => "NOT_SQUARE",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::DependentGenerators => "DEPENDENT_GENERATORS",
            Error::InvalidSurface(_) => "INVALID_SURFACE",
            Error::MultipleLinearSyzygies { .. } => "MULTIPLE_LINEAR_SYZYGIES",
            Error::NotASyzygy => "NOT_A_SYZYGY",
            Error::DegenerateLinearSyzygy(_) => "DEGENERATE_LINEAR_SYZYGY",
            Error::DegreeTooLow(_) => "DEGREE_TOO_LOW",
            Error::SingularStrand => "SINGULAR_STRAND",
            Error::DegreeAnomaly { .. } => "DEGREE_ANOMALY",
            Error::NotAPower => "NOT_A_POWER",
            Error::Basepoints(_) => "BASEPOINTS",
        }
    }
}
