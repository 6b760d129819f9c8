use std::fmt;
use std::process::ExitCode;

/// A failure with its exit status: 2 for usage and input-format problems,
/// 1 for everything that went wrong at run time.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn usage(msg: impl fmt::Display) -> Self {
        CliError { code: 2, error: anyhow::anyhow!("{msg}") }
    }

    pub fn runtime(msg: impl fmt::Display) -> Self {
        CliError { code: 1, error: anyhow::anyhow!("{msg}") }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }
}

impl From<zeqr::Error> for CliError {
    fn from(e: zeqr::Error) -> Self {
        use zeqr::Error::*;
        let code = match e {
            Io { .. } | Parse { .. } | Precondition(_) | TurnOutOfRange { .. } | DuplicateDocument(_) | Config(_) => 2,
            Reader(_) | Retrieval { .. } | Protocol(_) => 1,
        };
        CliError { code, error: e.into() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: 1, error: e.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.error)
    }
}
