use std::path::PathBuf;

/// Errors of the file formats and the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {origin}: {source}")]
    Json { origin: String, source: serde_json::Error },
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] canonsys_core::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const CRITERION_FAILS: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const UNSUPPORTED: u8 = 3;
    pub const NUMERICAL: u8 = 4;
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use canonsys_core::Error as E;
        match self {
            CliError::Read { .. } | CliError::Json { .. } | CliError::Parse(_) => exit::INPUT,
            CliError::Write { .. } | CliError::Csv(_) => exit::INPUT,
            CliError::Core(e) => match e {
                E::InvalidSpec(_)
                | E::NotPsd(_)
                | E::OutOfDomain(_)
                | E::InvalidGrowth(_)
                | E::InvalidArgument(_)
                | E::Range(_) => exit::INPUT,
                E::UnsupportedOrder(_) | E::NotNormalized(_) | E::NotLimitPoint(_) => exit::UNSUPPORTED,
                E::DegenerateTail(_)
                | E::TooShort { .. }
                | E::DegenerateGrid(_)
                | E::PartitionMismatch(_)
                | E::Numerical(_)
                | E::WindowTooLarge(_) => exit::NUMERICAL,
            },
        }
    }
}
