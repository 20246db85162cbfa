//! Closed-form per-frame flop counts.

use core::fmt;

use crate::{is_power_of_two, Error, Result};

/// Correlation method a flop count refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Gcc { n: u64, r: u64 },
    Fcc { n: u64, k: u64, i: u64 },
    Dense { n: u64, i: u64 },
    SvdPhat { n: u64, k: u64, i: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlopReport {
    pub method: Method,
    pub flops: u64,
}

impl FlopReport {
    pub fn new(method: Method) -> Result<Self> {
        let flops = match method {
            Method::Gcc { n, r } => flops_gcc(n, r)?,
            Method::Fcc { n, k, i } => flops_fcc(n, k, i)?,
            Method::Dense { n, i } => flops_dense(n, i)?,
            Method::SvdPhat { n, k, i } => flops_svdphat(n, k, i)?,
        };
        Ok(Self { method, flops })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Method::Gcc { n, r } => write!(f, "gcc N={n} r={r}"),
            Method::Fcc { n, k, i } => write!(f, "fcc N={n} K={k} I={i}"),
            Method::Dense { n, i } => write!(f, "dense N={n} I={i}"),
            Method::SvdPhat { n, k, i } => write!(f, "svd-phat N={n} K={k} I={i}"),
        }
    }
}

fn check_positive(name: &'static str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::param(name, "must be at least one"));
    }
    Ok(())
}

/// `(5 r N / 2) log2(r N)`.
pub fn flops_gcc(n: u64, r: u64) -> Result<u64> {
    for (name, v) in [("N", n), ("r", r)] {
        if !is_power_of_two(v as usize) {
            return Err(Error::param(name, "must be a power of two"));
        }
    }
    if n < 2 {
        return Err(Error::NotPowerOfTwo(n as usize));
    }
    let len = r * n;
    Ok(5 * len / 2 * u64::from(len.trailing_zeros()))
}

/// `K (N + 2) + N + I (4 K - 1)`.
pub fn flops_fcc(n: u64, k: u64, i: u64) -> Result<u64> {
    check_positive("K", k)?;
    check_positive("I", i)?;
    Ok(k * (n + 2) + n + i * (4 * k - 1))
}

/// `I (4 N + 6)`.
pub fn flops_dense(n: u64, i: u64) -> Result<u64> {
    check_positive("I", i)?;
    Ok(i * (4 * n + 6))
}

/// `K (4 N + 6) + I (4 K - 1)`.
pub fn flops_svdphat(n: u64, k: u64, i: u64) -> Result<u64> {
    check_positive("K", k)?;
    check_positive("I", i)?;
    Ok(k * (4 * n + 6) + i * (4 * k - 1))
}
