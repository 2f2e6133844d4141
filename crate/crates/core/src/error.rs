use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate direction")]
    DegenerateDirection,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid digit set: {0}")]
    InvalidDigitSet(String),
    #[error("invalid Latin square: {0}")]
    InvalidLatinSquare(String),
    #[error("point {0} lies outside the cube grid")]
    OutsideGrid(String),
    #[error("digit set is not integral: integerize first")]
    NotIntegral,
    #[error("direction {0} is parallel to the target plane")]
    ParallelToPlane(String),
    #[error("degenerate digit collision: projection merges {0}")]
    DigitCollision(String),
    #[error("insufficient input precision: {0}")]
    InsufficientPrecision(String),
    #[error("degree {0} is outside the supported range 2..=5")]
    DegreeOutOfRange(u32),
    #[error("not an imaginary-cube digit set")]
    NotImaginaryCube,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("coordinate magnitude too large for rasterization")]
    Overflow,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
