use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or inconsistent configuration; `field` names the offending key.
    #[error("invalid config field `{field}`: {msg}")]
    Field { field: String, msg: String },
    #[error("config file: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] qsd_core::Error),
}

impl CliError {
    pub fn field(field: &str, msg: impl Into<String>) -> Self {
        Self::Field { field: field.to_string(), msg: msg.into() }
    }

    /// 2 for configuration problems, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        use qsd_core::Error as E;
        match self {
            CliError::Field { .. } | CliError::Parse(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                E::Convergence { .. } | E::FitFailed { .. } | E::RankInconsistency(_) | E::NotHermitian { .. } => 3,
                _ => 2,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
