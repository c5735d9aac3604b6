use std::fmt;

/// Exit statuses. No other values are ever returned.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_OPTIMIZATION: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_IO,
            message: message.into(),
        }
    }

    pub fn optimization(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_OPTIMIZATION,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn code_for(e: &pulseforge::Error) -> i32 {
    use pulseforge::Error::*;
    match e {
        InvalidArgument(_) => EXIT_USAGE,
        Parse(_) | Io { .. } => EXIT_IO,
        Numeric(_) | NonFinite { .. } => EXIT_OPTIMIZATION,
        Scheme { source, .. } => code_for(source),
    }
}

impl From<pulseforge::Error> for CliError {
    fn from(e: pulseforge::Error) -> Self {
        CliError {
            code: code_for(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
