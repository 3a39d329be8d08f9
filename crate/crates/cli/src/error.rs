use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Rebuilds an error of the kind `code` stands for.
    pub fn from_exit_code(code: i32, message: String) -> Self {
        match code {
            2 => CliError::Io {
                path: PathBuf::new(),
                source: std::io::Error::other(message),
            },
            3 => CliError::Invariant(message),
            4 => CliError::Verification(message),
            _ => CliError::Usage(message),
        }
    }

    /// 1 usage, 2 I/O, 3 invariant violation, 4 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Invariant(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<desitter_core::Error> for CliError {
    fn from(e: desitter_core::Error) -> Self {
        use desitter_core::Error as E;
        match e {
            E::NormDrift { .. } | E::NonHermitian { .. } => CliError::Invariant(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_round_trip() {
        for code in 1..=4 {
            assert_eq!(CliError::from_exit_code(code, "x".into()).exit_code(), code);
        }
        let drift = desitter_core::Error::NormDrift {
            norm: 1.1,
            tolerance: 1e-10,
        };
        assert_eq!(CliError::from(drift).exit_code(), 3);
    }
}
