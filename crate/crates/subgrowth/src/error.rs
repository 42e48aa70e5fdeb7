use std::io;
use std::path::PathBuf;

use subgrowth_core::Error;
use thiserror::Error;

use crate::cache_file::CacheFileError;
use crate::table::TableFormatError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// The request would exceed the time or memory envelope without `--force`.
    #[error("{0}")]
    Budget(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error(transparent)]
    Table(#[from] TableFormatError),
    #[error(transparent)]
    Cache(#[from] CacheFileError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_COMPUTE: u8 = 2;
pub const EXIT_BOUND_FAILED: u8 = 3;

impl CliError {
    /// 1 for bad input, 2 for failures while computing or doing IO.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Budget(_) => EXIT_USAGE,
            Self::Compute(Error::Parse { .. } | Error::InvalidPartition(_) | Error::Precondition(_)) => EXIT_USAGE,
            _ => EXIT_COMPUTE,
        }
    }
}
