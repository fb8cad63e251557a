use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("chart mismatch: {0}")]
    Chart(String),
    #[error("form is not closed: {0}")]
    NotClosed(String),
    #[error("coefficients are not polynomial: {0}")]
    NotPolynomial(String),
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("not a Hamiltonian form: {0}")]
    NotHamiltonian(String),
    #[error("not in span: {0}")]
    NotInSpan(String),
    #[error("ill-defined sharp map: {0}")]
    IllDefined(String),
    #[error("decomposition-dependent result: {0}")]
    DecompositionDependent(String),
    #[error("map condition failed: {0}")]
    MapCondition(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
