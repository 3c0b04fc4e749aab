use std::fmt;

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub const INPUT: i32 = 1;
    pub const RUNTIME: i32 = 2;

    pub fn input(message: impl fmt::Display) -> Self {
        CliError {
            code: Self::INPUT,
            message: message.to_string(),
        }
    }

    pub fn runtime(message: impl fmt::Display) -> Self {
        CliError {
            code: Self::RUNTIME,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<netcorr::Error> for CliError {
    fn from(e: netcorr::Error) -> Self {
        use netcorr::Error::*;
        match e {
            Parse { .. } | InvalidParameter(_) | DimensionMismatch { .. } | NodeOutOfRange { .. } => Self::input(e),
            _ => Self::runtime(e),
        }
    }
}

impl From<netcorr_wiki::WikiError> for CliError {
    fn from(e: netcorr_wiki::WikiError) -> Self {
        use netcorr_wiki::WikiError::*;
        match e {
            PageNotFound(_) | InvalidMonth(_) => Self::input(e),
            Core(inner) => inner.into(),
            _ => Self::runtime(e),
        }
    }
}
