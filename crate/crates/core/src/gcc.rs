//! Delay grid and the FFT-based generalized cross-correlation.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fft::RealFft;
use crate::xspec::PhatVector;
use crate::{is_power_of_two, Error, Result};

/// Symmetric grid of candidate delays `-tau_max_int ..= tau_max_int` in steps
/// of `1 / subdivisions` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayGrid {
    tau_max_int: u32,
    subdivisions: u32,
    sample_rate: f64,
}

impl DelayGrid {
    pub fn new(tau_max_int: u32, subdivisions: u32, sample_rate: f64) -> Result<Self> {
        if subdivisions == 0 {
            return Err(Error::param("delta", "grid spacing must divide one sample"));
        }
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(Error::param("fs", "sample rate must be positive"));
        }
        Ok(Self {
            tau_max_int,
            subdivisions,
            sample_rate,
        })
    }

    /// Grid covering every physically possible delay for a pair spaced `d`
    /// metres apart, with `1/delta` points per sample.
    pub fn from_geometry(d: f64, fs: f64, c_min: f64, delta: f64) -> Result<Self> {
        for (name, v) in [("d", d), ("fs", fs), ("c_min", c_min), ("delta", delta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, "must be positive and finite"));
            }
        }
        let per_sample = 1.0 / delta;
        let subdivisions = libm::round(per_sample);
        if (per_sample - subdivisions).abs() > 1e-9 * per_sample || subdivisions < 1.0 {
            return Err(Error::param("delta", "grid spacing must divide one sample"));
        }
        let tau_max = d * fs / c_min;
        // absorb representation error when d*fs/c is an integer in exact arithmetic
        let tau_max_int = libm::ceil(tau_max - 1e-9 * tau_max.max(1.0));
        if tau_max_int > u32::MAX as f64 {
            return Err(Error::param("d", "delay range too large"));
        }
        Self::new(tau_max_int as u32, subdivisions as u32, fs)
    }

    pub fn tau_max_int(&self) -> u32 {
        self.tau_max_int
    }

    /// Grid points per sample (`1 / delta`).
    pub fn subdivisions(&self) -> u32 {
        self.subdivisions
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.subdivisions as f64
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    /// Number of candidates `I = 2 tau_max_int / delta + 1`.
    pub fn len(&self) -> usize {
        2 * self.half_span() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn half_span(&self) -> usize {
        self.tau_max_int as usize * self.subdivisions as usize
    }

    /// Delay of candidate `i` in fractional-lag units (`tau * subdivisions`).
    pub fn lag(&self, i: usize) -> i64 {
        i as i64 - self.half_span() as i64
    }

    pub fn tau(&self, i: usize) -> f64 {
        self.lag(i) as f64 / self.subdivisions as f64
    }

    pub fn taus(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.tau(i))
    }

    /// Index of the candidate mirrored about zero delay.
    pub fn mirror(&self, i: usize) -> usize {
        self.len() - 1 - i
    }
}

/// Correlation value for every candidate of a [`DelayGrid`], in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationVector(pub Vec<f64>);

impl CorrelationVector {
    pub fn zeros(len: usize) -> Self {
        CorrelationVector(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Index of delay `tau` in the output of an inverse FFT of size `r * n`.
pub fn lag_to_index(tau: f64, r: u32, n: usize) -> Result<usize> {
    let scaled = tau * r as f64;
    let lag = libm::round(scaled);
    if (scaled - lag).abs() > 1e-9 || tau.abs() > (n / 2) as f64 {
        return Err(Error::OffLattice(tau));
    }
    let size = r as i64 * n as i64;
    Ok((lag as i64).rem_euclid(size) as usize)
}

/// Evaluates `y(tau) = 2 Re{ sum_{f=0}^{N/2} x(f) exp(j 2 pi f tau / N) }`
/// on the grid through one inverse real FFT of size `r N`.
///
/// The spectrum is zero-padded to `r N / 2 + 1` bins. The DC bin (and for
/// `r = 1` the Nyquist bin) is doubled; the unscaled inverse then equals the
/// sum exactly.
#[derive(Debug, Clone)]
pub struct GccCorrelator {
    n: usize,
    r: u32,
    grid: DelayGrid,
    ifft: RealFft,
    padded: Vec<Complex64>,
    time: Vec<f64>,
    indices: Vec<usize>,
}

impl GccCorrelator {
    pub fn new(n: usize, r: u32, grid: DelayGrid) -> Result<Self> {
        if n < 4 || !is_power_of_two(n) {
            return Err(Error::NotPowerOfTwo(n));
        }
        if r == 0 || !is_power_of_two(r as usize) {
            return Err(Error::param("r", "interpolation factor must be a power of two"));
        }
        if grid.subdivisions() != r {
            return Err(Error::GridMismatch {
                grid: grid.subdivisions(),
                r,
            });
        }
        if grid.tau_max_int() as usize > n / 2 {
            return Err(Error::param("tau_max", "delay range exceeds half a frame"));
        }
        let size = r as usize * n;
        let indices = grid
            .taus()
            .map(|tau| lag_to_index(tau, r, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            r,
            grid,
            ifft: RealFft::new(size)?,
            padded: vec![Complex64::new(0.0, 0.0); size / 2 + 1],
            time: vec![0.0; size],
            indices,
        })
    }

    pub fn grid(&self) -> &DelayGrid {
        &self.grid
    }

    pub fn frame_size(&self) -> usize {
        self.n
    }

    pub fn interpolation(&self) -> u32 {
        self.r
    }

    pub fn correlate(&mut self, x: &PhatVector) -> Result<CorrelationVector> {
        let mut y = CorrelationVector::zeros(self.grid.len());
        self.correlate_into(x, &mut y.0)?;
        Ok(y)
    }

    pub fn correlate_into(&mut self, x: &PhatVector, y: &mut [f64]) -> Result<()> {
        let bins = self.n / 2 + 1;
        if x.len() != bins {
            return Err(Error::LengthMismatch {
                expected: bins,
                actual: x.len(),
            });
        }
        if y.len() != self.grid.len() {
            return Err(Error::LengthMismatch {
                expected: self.grid.len(),
                actual: y.len(),
            });
        }
        let x = x.as_slice();
        self.padded[..bins].copy_from_slice(x);
        self.padded[0] = Complex64::new(2.0 * x[0].re, 0.0);
        if self.r == 1 {
            self.padded[bins - 1] = Complex64::new(2.0 * x[bins - 1].re, 0.0);
        }
        self.ifft.inverse_unnormalized(&self.padded, &mut self.time)?;
        for (out, &idx) in y.iter_mut().zip(&self.indices) {
            *out = self.time[idx];
        }
        Ok(())
    }
}
