//! Streaming STFT with a periodic Hann window and 50% overlap.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fft::{hann_window, RealFft};
use crate::{is_power_of_two, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameConfig {
    frame_size: usize,
    sample_rate: f64,
}

impl FrameConfig {
    pub fn new(frame_size: usize, sample_rate: f64) -> Result<Self> {
        if frame_size < 2 || !is_power_of_two(frame_size) {
            return Err(Error::NotPowerOfTwo(frame_size));
        }
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(Error::param("fs", "sample rate must be positive"));
        }
        Ok(Self {
            frame_size,
            sample_rate,
        })
    }

    pub fn frame_size(&self) -> usize {
        self.frame_size
    }

    pub fn hop(&self) -> usize {
        self.frame_size / 2
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn bins(&self) -> usize {
        self.frame_size / 2 + 1
    }
}

/// One analysis frame: `N/2 + 1` bins and its 1-based index.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumFrame {
    pub bins: Vec<Complex64>,
    pub t: u64,
}

impl SpectrumFrame {
    pub fn zeros(bins: usize) -> Self {
        Self {
            bins: vec![Complex64::new(0.0, 0.0); bins],
            t: 0,
        }
    }
}

/// Per-channel stream state.
///
/// The first frame is emitted once `N` samples have arrived, then one frame
/// per `N/2` further samples.
#[derive(Debug, Clone)]
pub struct StftStream {
    config: FrameConfig,
    window: Vec<f64>,
    fft: RealFft,
    // ring buffer of the most recent N samples; `head` is the oldest
    history: Vec<f64>,
    head: usize,
    filled: usize,
    since_emit: usize,
    frames: u64,
    windowed: Vec<f64>,
    frame: SpectrumFrame,
}

impl StftStream {
    pub fn new(config: FrameConfig) -> Result<Self> {
        let n = config.frame_size();
        Ok(Self {
            config,
            window: hann_window(n)?,
            fft: RealFft::new(n)?,
            history: vec![0.0; n],
            head: 0,
            filled: 0,
            since_emit: 0,
            frames: 0,
            windowed: vec![0.0; n],
            frame: SpectrumFrame::zeros(config.bins()),
        })
    }

    pub fn config(&self) -> &FrameConfig {
        &self.config
    }

    pub fn frames_emitted(&self) -> u64 {
        self.frames
    }

    /// Feeds samples and calls `sink` for every frame completed by them.
    pub fn push_with<F>(&mut self, samples: &[f64], mut sink: F)
    where
        F: FnMut(&SpectrumFrame),
    {
        let n = self.config.frame_size();
        let hop = self.config.hop();
        for &s in samples {
            self.history[self.head] = s;
            self.head = (self.head + 1) % n;
            if self.filled < n {
                self.filled += 1;
                if self.filled < n {
                    continue;
                }
                // first full buffer
                self.since_emit = hop;
            } else {
                self.since_emit += 1;
            }
            if self.since_emit == hop {
                self.since_emit = 0;
                self.emit();
                sink(&self.frame);
            }
        }
    }

    /// Feeds samples and collects the completed frames.
    pub fn push(&mut self, samples: &[f64]) -> Vec<SpectrumFrame> {
        let mut out = Vec::new();
        self.push_with(samples, |f| out.push(f.clone()));
        out
    }

    fn emit(&mut self) {
        let (newer, older) = self.history.split_at(self.head);
        for ((w, h), win) in self
            .windowed
            .iter_mut()
            .zip(older.iter().chain(newer))
            .zip(&self.window)
        {
            *w = h * win;
        }
        self.fft
            .forward(&self.windowed, &mut self.frame.bins)
            .expect("buffer sizes fixed at construction");
        self.frames += 1;
        self.frame.t = self.frames;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn stream(n: usize) -> StftStream {
        StftStream::new(FrameConfig::new(n, 16000.0).unwrap()).unwrap()
    }

    #[test]
    fn zeros_give_zero_frame() {
        let mut s = stream(16);
        let frames = s.push(&[0.0; 16]);
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].t, 1);
        assert!(frames[0].bins.iter().all(|b| b.norm() == 0.0));
    }

    #[test]
    fn hop_accounting() {
        let mut s = stream(16);
        assert!(s.push(&[1.0; 8]).is_empty());
        assert_eq!(s.push(&[1.0; 8]).len(), 1);
        assert!(s.push(&[1.0; 7]).is_empty());
        let f = s.push(&[1.0]);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].t, 2);
    }

    #[test]
    fn frame_count_formula() {
        let n = 32;
        for total in [32usize, 33, 47, 48, 49, 200, 1000] {
            let mut s = stream(n);
            let count: usize = (0..total)
                .collect::<Vec<_>>()
                .chunks(13)
                .map(|c| s.push(&c.iter().map(|&v| v as f64).collect::<Vec<_>>()).len())
                .sum();
            assert_eq!(count, (total - n) / (n / 2) + 1, "total {total}");
        }
    }

    #[test]
    fn windowed_cosine_matches_direct_dft() {
        let n = 64;
        let k = 5;
        let x: Vec<f64> = (0..n)
            .map(|i| (2.0 * PI * (k * i) as f64 / n as f64).cos())
            .collect();
        let mut s = stream(n);
        let frames = s.push(&x);
        let w = hann_window(n).unwrap();
        for (f, bin) in frames[0].bins.iter().enumerate() {
            let direct: Complex64 = (0..n)
                .map(|i| {
                    let a = -2.0 * PI * (f * i) as f64 / n as f64;
                    Complex64::new(a.cos(), a.sin()) * (x[i] * w[i])
                })
                .sum();
            assert!((bin - direct).norm() < 1e-10);
            if !(k - 1..=k + 1).contains(&f) {
                assert!(bin.norm() < 1e-10, "leak at bin {f}");
            }
        }
        assert!(frames[0].bins[k].norm() > 1.0);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(FrameConfig::new(100, 16000.0).is_err());
        assert!(FrameConfig::new(64, 0.0).is_err());
    }
}
