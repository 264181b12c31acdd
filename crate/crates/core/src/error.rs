use thiserror::Error;

/// Which half of a homology vector a block refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockSide {
    /// The `(a, x)` coordinates.
    First,
    /// The `(b, y)` coordinates.
    Second,
}

impl std::fmt::Display for BlockSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockSide::First => f.write_str("first (a, x)"),
            BlockSide::Second => f.write_str("second (b, y)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An intermediate value left the `i64` range.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: i64 },

    #[error("{side} block is zero; gcd conditions are undefined")]
    DegenerateBlock { side: BlockSide },

    #[error("split product of the source vector is 0; use the zero-slope screen instead")]
    ZeroSlope,

    #[error("zero-slope screen requires split product 0 on both vectors (got {source_slope} and {target_slope})")]
    NonZeroSlope { source_slope: i64, target_slope: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    /// True for errors raised by exact arithmetic leaving its domain.
    pub fn is_arithmetic(&self) -> bool {
        matches!(self, Error::Overflow(_))
    }

    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
