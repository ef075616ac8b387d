//! Error type shared by all analysis pipelines.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("variable-count mismatch: expected {expected}, got {got}")]
    VarMismatch { expected: usize, got: usize },

    #[error("component count mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("component {component} has a nonzero constant term; germs must map the origin to the origin")]
    NonzeroConstantTerm { component: usize },

    #[error("linear part is not invertible")]
    NonInvertibleLinearPart,

    #[error("invalid variable names: {0}")]
    BadNames(String),

    #[error("jet degree mismatch: span built at degree {span}, vector indexed at degree {vector}")]
    DegreeMismatch { span: u32, vector: u32 },

    #[error("Nakayama certificate queried on a span that was not built from a module saturation")]
    NotModuleSpan,

    #[error("{what} inconclusive: no certificate/stabilization up to degree {degree_cap}")]
    Inconclusive { what: String, degree_cap: u32 },

    #[error("germ does not admit a one-parameter stable unfolding (stable-unfolding quotient has dimension {nf_dimension})")]
    NoOpsu { nf_dimension: usize },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("no multiplier solution for basis vector {index} up to degree {degree}; raise the degree cap")]
    NoMultiplierSolution { index: usize, degree: u32 },

    #[error("not in preform shape: {0}")]
    PreformViolation(String),

    #[error("configuration error: {0}")]
    BadConfig(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive { .. })
    }
}
