//! Radix-2 FFT for real input.
//!
//! A length-`L` real transform is computed as a length-`L/2` complex transform
//! of the interleaved samples `x[2n] + j x[2n+1]`, followed by the usual
//! even/odd split. Only powers of two are supported.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{is_power_of_two, Error, Result};

/// Periodic Hann window of length `n`: `0.5 (1 - cos(2 pi i / n))`.
pub fn hann_window(n: usize) -> Result<Vec<f64>> {
    if n < 2 || !is_power_of_two(n) {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok((0..n)
        .map(|i| 0.5 * (1.0 - libm::cos(2.0 * PI * i as f64 / n as f64)))
        .collect())
}

/// In-place iterative complex FFT of a fixed power-of-two size.
#[derive(Debug, Clone)]
struct ComplexFft {
    len: usize,
    // exp(-j 2 pi k / len) for k < len/2
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl ComplexFft {
    fn new(len: usize) -> Self {
        debug_assert!(is_power_of_two(len));
        let twiddles = (0..len / 2)
            .map(|k| {
                let a = -2.0 * PI * k as f64 / len as f64;
                Complex64::new(libm::cos(a), libm::sin(a))
            })
            .collect();
        let bits = len.trailing_zeros();
        let bitrev = (0..len as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Self {
            len,
            twiddles,
            bitrev,
        }
    }

    fn process(&self, buf: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(buf.len(), self.len);
        for (i, &j) in self.bitrev.iter().enumerate() {
            let j = j as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= self.len {
            let half = size / 2;
            let stride = self.len / size;
            for start in (0..self.len).step_by(size) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            size *= 2;
        }
    }
}

/// Forward and inverse real FFT of length `len`, with its own scratch space.
///
/// Forward: `bins[f] = sum_n x[n] exp(-j 2 pi f n / len)`, `f = 0..=len/2`.
#[derive(Debug, Clone)]
pub struct RealFft {
    len: usize,
    inner: ComplexFft,
    // exp(-j 2 pi k / len) for k = 0..=len/2
    split: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl RealFft {
    pub fn new(len: usize) -> Result<Self> {
        if len < 2 || !is_power_of_two(len) {
            return Err(Error::NotPowerOfTwo(len));
        }
        let half = len / 2;
        let split = (0..=half)
            .map(|k| {
                let a = -2.0 * PI * k as f64 / len as f64;
                Complex64::new(libm::cos(a), libm::sin(a))
            })
            .collect();
        Ok(Self {
            len,
            inner: ComplexFft::new(half),
            split,
            scratch: vec![Complex64::new(0.0, 0.0); half],
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of non-redundant bins, `len/2 + 1`.
    pub fn bins(&self) -> usize {
        self.len / 2 + 1
    }

    pub fn forward(&mut self, input: &[f64], output: &mut [Complex64]) -> Result<()> {
        check_len(input.len(), self.len)?;
        check_len(output.len(), self.bins())?;
        let half = self.len / 2;
        for (z, pair) in self.scratch.iter_mut().zip(input.chunks_exact(2)) {
            *z = Complex64::new(pair[0], pair[1]);
        }
        self.inner.process(&mut self.scratch, false);
        let z0 = self.scratch[0];
        output[0] = Complex64::new(z0.re + z0.im, 0.0);
        output[half] = Complex64::new(z0.re - z0.im, 0.0);
        for k in 1..half {
            let zk = self.scratch[k];
            let zc = self.scratch[half - k].conj();
            let even = (zk + zc) * 0.5;
            let odd = (zk - zc) * Complex64::new(0.0, -0.5);
            output[k] = even + self.split[k] * odd;
        }
        Ok(())
    }

    /// Inverse transform with `1/len` scaling, so that `inverse(forward(x)) == x`.
    ///
    /// The imaginary parts of the DC and Nyquist bins are ignored.
    pub fn inverse(&mut self, input: &[Complex64], output: &mut [f64]) -> Result<()> {
        self.inverse_scaled(input, output, 0.5 / (self.len / 2) as f64)
    }

    /// Inverse transform without scaling: `output[n]` is the sum over the full
    /// Hermitian-completed spectrum of `X[f] exp(j 2 pi f n / len)`, i.e.
    /// `len` times the normalized inverse.
    pub fn inverse_unnormalized(&mut self, input: &[Complex64], output: &mut [f64]) -> Result<()> {
        self.inverse_scaled(input, output, 1.0)
    }

    fn inverse_scaled(&mut self, input: &[Complex64], output: &mut [f64], scale: f64) -> Result<()> {
        check_len(input.len(), self.bins())?;
        check_len(output.len(), self.len)?;
        let half = self.len / 2;
        for k in 0..half {
            let mut xk = input[k];
            let mut xc = input[half - k].conj();
            if k == 0 {
                xk.im = 0.0;
                xc.im = 0.0;
            }
            let even = xk + xc;
            let odd = (xk - xc) * self.split[k].conj();
            self.scratch[k] = (even + Complex64::new(0.0, 1.0) * odd) * scale;
        }
        self.inner.process(&mut self.scratch, true);
        for (pair, z) in output.chunks_exact_mut(2).zip(&self.scratch) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    }
}

fn check_len(actual: usize, expected: usize) -> Result<()> {
    if actual == expected {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}

/// One-shot forward transform.
pub fn rfft(input: &[f64]) -> Result<Vec<Complex64>> {
    let mut fft = RealFft::new(input.len())?;
    let mut out = vec![Complex64::new(0.0, 0.0); fft.bins()];
    fft.forward(input, &mut out)?;
    Ok(out)
}

/// One-shot normalized inverse transform from `len/2 + 1` bins.
pub fn irfft(bins: &[Complex64]) -> Result<Vec<f64>> {
    if bins.len() < 2 {
        return Err(Error::NotPowerOfTwo(bins.len().saturating_sub(1) * 2));
    }
    let len = (bins.len() - 1) * 2;
    let mut fft = RealFft::new(len)?;
    let mut out = vec![0.0; len];
    fft.inverse(bins, &mut out)?;
    Ok(out)
}
