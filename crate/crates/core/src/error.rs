use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid Pauli symbol {0:?} (expected one of I, X, Y, Z)")]
    InvalidSymbol(char),

    #[error("empty Pauli string")]
    EmptyPauli,

    #[error("check rows {0} and {1} anticommute")]
    NonCommuting(usize, usize),

    #[error("check row {0} is the identity")]
    IdentityRow(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("no logical operator of weight <= {0}")]
    NoLogical(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no crossing found between any pair of sizes")]
    NoCrossing,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}
