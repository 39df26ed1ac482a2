use std::time::Duration;

use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants are grouped by [`ErrorKind`], which front ends map onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {q} exceeds the configured cap {cap}")]
    ModulusTooLarge { q: u64, cap: u32 },
    #[error("field mismatch: F_{left} vs F_{right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Format(String),
    #[error("exhaustive scan over {space} points exceeds the limit of {limit}")]
    LimitExceeded { space: String, limit: u64 },
    #[error("{0}")]
    Domain(String),
    #[error("budget exhausted after {candidates} candidates in {elapsed:?}")]
    Budget { candidates: u64, elapsed: Duration },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Format,
    Resource,
    Domain,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotPrime(_)
            | Error::ModulusTooLarge { .. }
            | Error::FieldMismatch { .. }
            | Error::Usage(_) => ErrorKind::Usage,
            Error::Parse { .. } | Error::Format(_) => ErrorKind::Format,
            Error::LimitExceeded { .. } | Error::Budget { .. } => ErrorKind::Resource,
            Error::ZeroInverse | Error::Domain(_) => ErrorKind::Domain,
            Error::Io(_) => ErrorKind::Io,
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Default number of points an exhaustive scan may visit.
pub const DEFAULT_EXHAUSTION_LIMIT: u64 = 1 << 24;

/// Shared cap for every exhaustive operation (tables, preimage counts, brute force).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_points: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_points: DEFAULT_EXHAUSTION_LIMIT,
        }
    }
}

impl Limits {
    pub fn new(max_points: u64) -> Self {
        Limits { max_points }
    }

    /// Size of `base^exp` if it fits under the limit.
    pub fn check_space(&self, base: u64, exp: usize) -> Result<u64> {
        let mut size: u64 = 1;
        for _ in 0..exp {
            match size.checked_mul(base) {
                Some(s) if s <= self.max_points => size = s,
                _ => {
                    return Err(Error::LimitExceeded {
                        space: format!("{base}^{exp}"),
                        limit: self.max_points,
                    })
                }
            }
        }
        Ok(size)
    }
}
