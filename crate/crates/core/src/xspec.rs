//! Recursively smoothed cross-spectrum and the phase transform.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::stft::SpectrumFrame;
use crate::{Error, Result};

/// Magnitudes at or below this are mapped to zero by [`CrossSpectrum::phat`].
pub const PHAT_EPSILON: f64 = 1e-12;

/// `R(t,f) = (1 - alpha) R(t-1,f) + alpha X1(t,f) conj(X2(t,f))`, starting from zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSpectrum {
    r: Vec<Complex64>,
    alpha: f64,
    t: u64,
}

impl CrossSpectrum {
    pub fn new(bins: usize, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::param("alpha", "smoothing factor must lie in [0, 1]"));
        }
        if bins == 0 {
            return Err(Error::Empty);
        }
        Ok(Self {
            r: vec![Complex64::new(0.0, 0.0); bins],
            alpha,
            t: 0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of updates applied so far.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn values(&self) -> &[Complex64] {
        &self.r
    }

    pub fn update(&mut self, x1: &SpectrumFrame, x2: &SpectrumFrame) -> Result<()> {
        if x1.t != x2.t {
            return Err(Error::FrameIndexMismatch(x1.t, x2.t));
        }
        self.update_bins(&x1.bins, &x2.bins)
    }

    pub fn update_bins(&mut self, x1: &[Complex64], x2: &[Complex64]) -> Result<()> {
        for len in [x1.len(), x2.len()] {
            if len != self.r.len() {
                return Err(Error::LengthMismatch {
                    expected: self.r.len(),
                    actual: len,
                });
            }
        }
        let keep = 1.0 - self.alpha;
        for ((r, a), b) in self.r.iter_mut().zip(x1).zip(x2) {
            *r = *r * keep + a * b.conj() * self.alpha;
        }
        self.t += 1;
        Ok(())
    }

    pub fn phat(&self) -> PhatVector {
        let mut out = PhatVector(vec![Complex64::new(0.0, 0.0); self.r.len()]);
        self.phat_into(&mut out);
        out
    }

    /// Writes the phase transform into an existing vector of the same length.
    pub fn phat_into(&self, out: &mut PhatVector) {
        out.0.resize(self.r.len(), Complex64::new(0.0, 0.0));
        for (o, r) in out.0.iter_mut().zip(&self.r) {
            let mag = r.norm();
            *o = if mag > PHAT_EPSILON {
                r / mag
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
    }
}

/// Magnitude-normalized cross-spectrum, `N/2 + 1` entries of modulus 1 or 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PhatVector(pub Vec<Complex64>);

impl PhatVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    /// Phase ramp of a pure delay of `tau` samples for frame size `n`:
    /// `exp(-j 2 pi f tau / n)`, whose correlation peaks at `tau`.
    pub fn pure_delay(n: usize, tau: f64) -> Self {
        PhatVector(
            (0..=n / 2)
                .map(|f| {
                    let a = -2.0 * core::f64::consts::PI * f as f64 * tau / n as f64;
                    Complex64::new(libm::cos(a), libm::sin(a))
                })
                .collect(),
        )
    }
}

impl From<Vec<Complex64>> for PhatVector {
    fn from(v: Vec<Complex64>) -> Self {
        PhatVector(v)
    }
}
