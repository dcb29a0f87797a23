use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("conductor must be a positive multiple of 4, got {0}")]
    InvalidConductor(u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("expected a real scalar, got {0}")]
    NotReal(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("presentation violates H*A = (-1)^(q+1) A^dag H^dag at entry ({row}, {col})")]
    PresentationViolation { row: usize, col: usize },
    #[error("element is not torsion at point {point}")]
    NotTorsion { point: i64 },
    #[error("matrix is singular over the fraction field")]
    Singular,
    #[error("matrix is not {0}")]
    NotHermitian(String),
    #[error("point index {0} is outside 0..N")]
    InvalidPoint(i64),
    #[error("no solution for the phase equation at conductor {0}; use a larger conductor")]
    PhaseUnsolvable(u32),
    #[error("invalid subobject: {0}")]
    InvalidSubobject(String),
    #[error("subobject is not isotropic")]
    NotIsotropic,
    #[error("trace {0} is not supported here")]
    UnsupportedTrace(String),
    #[error("invalid circle data: {0}")]
    Circle(String),
    #[error("point mismatch: {0} vs {1}")]
    PointMismatch(i64, i64),
}

pub type Result<T> = std::result::Result<T, Error>;
