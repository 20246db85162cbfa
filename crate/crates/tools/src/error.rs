use std::io;

use thiserror::Error;

use crate::basis_file::BasisFileError;

#[derive(Debug, Error)]
pub enum ToolError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error("wav: {0}")]
    Wav(#[from] hound::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Basis(#[from] BasisFileError),
    #[error(transparent)]
    Core(#[from] fcc_core::Error),
}

impl ToolError {
    pub fn usage(msg: impl Into<String>) -> Self {
        ToolError::Usage(msg.into())
    }

    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        ToolError::Io {
            context: context.into(),
            source,
        }
    }

    /// 1 usage, 2 I/O, 3 numeric or validation.
    pub fn exit_code(&self) -> u8 {
        match self {
            ToolError::Usage(_) => 1,
            ToolError::Io { .. } | ToolError::Csv(_) => 2,
            ToolError::Wav(_) => 2,
            ToolError::Basis(e) if e.is_io() => 2,
            ToolError::Basis(_) | ToolError::Core(_) => 3,
        }
    }
}

pub type Result<T, E = ToolError> = std::result::Result<T, E>;
