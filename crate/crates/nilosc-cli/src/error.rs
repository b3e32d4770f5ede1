use nilosc_core::heisenberg::HeisenbergError;
use nilosc_core::numeric::NumericError;
use nilosc_core::oscillation::OscError;
use nilosc_core::polyseq::PolyseqError;

/// Process exit codes: 0 success, 2 usage error, 3 numeric error
/// (ambiguous boundary / precision exhausted), 4 grid too coarse.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("{0}")]
    GridTooCoarse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::GridTooCoarse(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::Parse(_) | NumericError::InvalidPrecision { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<HeisenbergError> for CliError {
    fn from(e: HeisenbergError) -> Self {
        match e {
            HeisenbergError::DimensionMismatch => CliError::Usage(e.to_string()),
            HeisenbergError::Numeric(n) => n.into(),
        }
    }
}

impl From<PolyseqError> for CliError {
    fn from(e: PolyseqError) -> Self {
        match e {
            PolyseqError::Numeric(n) => n.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<OscError> for CliError {
    fn from(e: OscError) -> Self {
        match e {
            OscError::GridTooCoarse { .. } => CliError::GridTooCoarse(e.to_string()),
            OscError::EmptyRange
            | OscError::BadWindow { .. }
            | OscError::SequenceTooShort
            | OscError::NonIncreasingN => CliError::Usage(e.to_string()),
            OscError::DegenerateFit(_) => CliError::Numeric(e.to_string()),
            OscError::Numeric(n) => n.into(),
        }
    }
}
