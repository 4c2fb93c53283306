use std::process::ExitCode;

/// Failure of a run, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad config, arguments or I/O; exit code 1.
    Validation(String),
    /// Arithmetic breakdown during a run; exit code 2.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(1),
            CliError::Numerical(_) => ExitCode::from(2),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Numerical(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<uc_kit::Error> for CliError {
    fn from(e: uc_kit::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("i/o: {e}"))
    }
}
