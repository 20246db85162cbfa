use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("expected length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("frame index mismatch: {0} vs {1}")]
    FrameIndexMismatch(u64, u64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("grid spacing 1/{grid} is incompatible with interpolation factor {r}")]
    GridMismatch { grid: u32, r: u32 },
    #[error("delay {0} is not on the lag lattice")]
    OffLattice(f64),
    #[error("requested rank {requested} exceeds attainable rank {attainable}")]
    RankExceeded { requested: usize, attainable: usize },
    #[error("input is empty")]
    Empty,
    #[error("basis parity residual {0:e} exceeds tolerance")]
    ParityViolation(f64),
}

impl Error {
    pub fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
