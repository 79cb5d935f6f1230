use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("estimation failed: {0}")]
    Estimation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Estimation(_) => 4,
        }
    }

    /// Classifies a library error raised while processing data.
    pub fn from_core(context: &str, err: wimp_core::Error) -> Self {
        use wimp_core::Error as E;
        let msg = format!("{context}: {err}");
        match err {
            E::NonFinite { .. } | E::InsufficientData(_) => CliError::Data(msg),
            _ => CliError::Estimation(msg),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
