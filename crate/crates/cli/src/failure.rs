use std::fmt::Display;
use std::path::Path;

/// Why a command failed. Input problems (unreadable or malformed files)
/// exit with 2, failed validations with 1. A validation failure may carry
/// the report printed before the error.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Invalid { output: String, message: String },
}

impl Failure {
    pub fn invalid(message: impl Display) -> Self {
        Failure::Invalid {
            output: String::new(),
            message: message.to_string(),
        }
    }

    pub fn with_output(output: String, message: impl Display) -> Self {
        Failure::Invalid {
            output,
            message: message.to_string(),
        }
    }

    pub fn input(path: &Path, message: impl Display) -> Self {
        Failure::Input(format!("{}: {message}", path.display()))
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Invalid { .. } => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) => m,
            Failure::Invalid { message, .. } => message,
        }
    }

    pub fn output(&self) -> &str {
        match self {
            Failure::Input(_) => "",
            Failure::Invalid { output, .. } => output,
        }
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(path, e))
}
