use thiserror::Error;

use crate::triplecover::SearchReport;

#[derive(Debug, Error)]
pub enum ChartError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not hermitian: entry ({row},{col}) differs from the conjugate of ({col},{row})")]
    NotHermitian { row: usize, col: usize },
    #[error("{0} is not anti-hermitian")]
    NotAntiHermitian(&'static str),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not monic in eta")]
    NotMonic,
    #[error("invalid coefficient ring: {0}")]
    InvalidRing(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("coefficient a_{index} has degree {degree} > {bound}")]
    DegreeBoundViolated { index: usize, degree: usize, bound: usize },
    #[error("datum is not regular everywhere")]
    NotRegularEverywhere,
    #[error("wedge content {0} has zeros although the datum is regular everywhere")]
    ContentNotRemovable(String),
    #[error("spectral curve is not real")]
    CurveNotReal,
    #[error("intertwiner space has dimension {0}, expected 1")]
    NotUniquelyIntertwined(usize),
    #[error("product section violates the degree profile at eta^{0}")]
    DegreeProfileViolated(usize),
    #[error("binary cubic form has identically vanishing discriminant")]
    DegenerateForm,
    #[error("structure constants are not associative")]
    NotAssociative,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid reality datum: {0}")]
    InvalidReality(String),
    #[error("search budget exhausted after {} attempts", .0.attempts.len())]
    BudgetExhausted(Box<SearchReport>),
}

pub type Result<T> = std::result::Result<T, ChartError>;
