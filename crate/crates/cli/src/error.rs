use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("{path}: {source}")]
    InputParse { path: String, source: holodisc_core::Error },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Numeric(#[from] holodisc_core::Error),
}

impl CliError {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        Self::Config { field: field.into(), message: message.into() }
    }

    /// 2 for usage and input problems, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Numeric(_) => 1,
            _ => 2,
        }
    }
}
