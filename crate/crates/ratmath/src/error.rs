use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MathError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular (determinant {det})")]
    Singular { det: Rational },
    #[error("basis is rank deficient at row {row}")]
    RankDeficient { row: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("expected an integer matrix: {0}")]
    NotIntegral(String),
}
