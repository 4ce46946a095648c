use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown flag(s) for `{command}`: {}", flags.join(", "))]
    UnknownFlags { command: String, flags: Vec<String> },
    #[error("flag --{0} given more than once")]
    DuplicateFlag(String),
    #[error("missing required flag(s): {}", .0.iter().map(|f| format!("--{f}")).collect::<Vec<_>>().join(", "))]
    MissingFlags(Vec<String>),
    #[error("--{flag}: {message}")]
    InvalidValue { flag: String, message: String },
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    /// 2 for numerical failures, 1 for everything the user can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn value(flag: &str, message: impl Into<String>) -> Self {
        CliError::InvalidValue { flag: flag.to_string(), message: message.into() }
    }
}
