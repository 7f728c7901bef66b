use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported field width {0} (expected 1..=32)")]
    UnsupportedFieldBits(u32),

    #[error("value {value:#x} does not fit in GF(2^{bits})")]
    FieldValueOutOfRange { value: u32, bits: u32 },

    #[error("group algebra dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unknown gate id {0}")]
    UnknownGate(usize),

    #[error("addition gate needs at least one child")]
    EmptyAdd,

    #[error("circuit has no output gate")]
    NoOutput,

    #[error("variable {0} has no assigned value")]
    UnassignedVariable(String),

    #[error("variable {0} has no color")]
    UncoloredVariable(String),

    #[error("unknown color {0}")]
    UnknownColor(String),

    #[error("circuit has terms of degree below k = {k} (output degrees {min}..={max})")]
    NonHomogeneous { k: usize, min: usize, max: usize },

    #[error("multiplicities cover at most {coverable} variables, fewer than k = {k}")]
    Infeasible { k: usize, coverable: usize },

    #[error("{what} = {value} exceeds the configured limit {limit}")]
    ResourceGuard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("monomial expansion exceeded the budget of {0} monomials")]
    BudgetExceeded(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(
        source_name: &str,
        line: usize,
        column: usize,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    /// Process exit code: 1 internal, 2 input, 3 resource guard.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceGuard { .. } | Error::BudgetExceeded(_) => 3,
            Error::Parse { .. }
            | Error::Io(_)
            | Error::InvalidArgument(_)
            | Error::InvalidGraph(_)
            | Error::UnknownColor(_)
            | Error::UncoloredVariable(_)
            | Error::UnassignedVariable(_)
            | Error::NonHomogeneous { .. }
            | Error::Infeasible { .. }
            | Error::UnsupportedFieldBits(_)
            | Error::EmptyAdd
            | Error::NoOutput => 2,
            Error::FieldValueOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::UnknownGate(_) => 1,
        }
    }
}
