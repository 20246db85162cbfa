//! Time difference of arrival (TDoA) estimation for microphone pairs.
//!
//! Two correlators share one front end (STFT, recursive cross-spectrum, phase
//! transform) and one back end (argmax plus quadratic refinement):
//!
//! * [`gcc`]: generalized cross-correlation, evaluated with a zero-padded
//!   inverse real FFT.
//! * [`fcc`]: fast cross-correlation, a truncated decomposition of the steering
//!   matrix whose bases are folded around the quarter-band bin so the online
//!   projection runs on half-length real coefficient rows.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;

pub mod fcc;
pub mod fft;
pub mod flops;
pub mod gcc;
pub mod linalg;
pub mod peak;
pub mod pipeline;
pub mod stft;
pub mod xspec;

pub use error::{Error, Result};
pub use fcc::{FccBases, FccCorrelator, FoldedInput, Parity, SteeringMatrix};
pub use fft::RealFft;
pub use gcc::{CorrelationVector, DelayGrid, GccCorrelator};
pub use peak::TdoaEstimate;
pub use pipeline::{Correlator, PairPipeline};
pub use stft::{FrameConfig, SpectrumFrame, StftStream};
pub use xspec::{CrossSpectrum, PhatVector};

pub use num_complex::Complex64;

pub(crate) fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}
