use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] folner_core::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("report serialization: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

macro_rules! config_err {
    ($($arg:tt)*) => {
        $crate::error::LabError::Config(format!($($arg)*))
    };
}
pub(crate) use config_err;
