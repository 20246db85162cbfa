//! Per-pair streaming pipeline: cross-spectrum, PHAT, correlation, peak.

use alloc::vec;
use alloc::vec::Vec;

use crate::gcc::{DelayGrid, GccCorrelator};
use crate::fcc::FccCorrelator;
use crate::peak::{estimate, TdoaEstimate};
use crate::stft::{FrameConfig, SpectrumFrame, StftStream};
use crate::xspec::{CrossSpectrum, PhatVector};
use crate::{Error, Result};

/// Either correlation back end.
#[derive(Debug, Clone)]
pub enum Correlator {
    Gcc(GccCorrelator),
    Fcc(FccCorrelator),
}

impl Correlator {
    pub fn grid(&self) -> &DelayGrid {
        match self {
            Correlator::Gcc(g) => g.grid(),
            Correlator::Fcc(f) => f.grid(),
        }
    }

    pub fn frame_size(&self) -> usize {
        match self {
            Correlator::Gcc(g) => g.frame_size(),
            Correlator::Fcc(f) => f.bases().frame_size(),
        }
    }

    pub fn correlate_into(&mut self, x: &PhatVector, y: &mut [f64]) -> Result<()> {
        match self {
            Correlator::Gcc(g) => g.correlate_into(x, y),
            Correlator::Fcc(f) => f.correlate_into(x, y),
        }
    }
}

impl From<GccCorrelator> for Correlator {
    fn from(g: GccCorrelator) -> Self {
        Correlator::Gcc(g)
    }
}

impl From<FccCorrelator> for Correlator {
    fn from(f: FccCorrelator) -> Self {
        Correlator::Fcc(f)
    }
}

/// State for one microphone pair fed with STFT frames of both channels.
#[derive(Debug, Clone)]
pub struct PairPipeline {
    xspec: CrossSpectrum,
    phat: PhatVector,
    correlator: Correlator,
    y: Vec<f64>,
    spacing: f64,
    speed: f64,
}

impl PairPipeline {
    /// `spacing` and `speed` (metres, m/s) are only used for the angle.
    pub fn new(correlator: Correlator, alpha: f64, spacing: f64, speed: f64) -> Result<Self> {
        if !(spacing > 0.0 && speed > 0.0) {
            return Err(Error::param("d", "spacing and speed of sound must be positive"));
        }
        let bins = correlator.frame_size() / 2 + 1;
        let rows = correlator.grid().len();
        Ok(Self {
            xspec: CrossSpectrum::new(bins, alpha)?,
            phat: PhatVector(vec![Default::default(); bins]),
            correlator,
            y: vec![0.0; rows],
            spacing,
            speed,
        })
    }

    pub fn grid(&self) -> &DelayGrid {
        self.correlator.grid()
    }

    pub fn correlator(&self) -> &Correlator {
        &self.correlator
    }

    /// Recursive cross-spectrum and phase transform.
    pub fn update_spectrum(&mut self, x1: &SpectrumFrame, x2: &SpectrumFrame) -> Result<()> {
        self.xspec.update(x1, x2)?;
        self.xspec.phat_into(&mut self.phat);
        Ok(())
    }

    /// Correlation of the current PHAT vector over the grid.
    pub fn correlate(&mut self) -> Result<&[f64]> {
        self.correlator.correlate_into(&self.phat, &mut self.y)?;
        Ok(&self.y)
    }

    /// Peak of the last correlation.
    pub fn estimate(&self) -> Result<TdoaEstimate> {
        estimate(&self.y, self.correlator.grid(), self.spacing, self.speed)
    }

    pub fn process(&mut self, x1: &SpectrumFrame, x2: &SpectrumFrame) -> Result<TdoaEstimate> {
        self.update_spectrum(x1, x2)?;
        self.correlate()?;
        self.estimate()
    }
}

/// Runs a pair pipeline over two whole signals, one estimate per frame.
pub fn run_pair(x1: &[f64], x2: &[f64], config: FrameConfig, pipeline: &mut PairPipeline) -> Result<Vec<TdoaEstimate>> {
    if x1.len() != x2.len() {
        return Err(Error::LengthMismatch {
            expected: x1.len(),
            actual: x2.len(),
        });
    }
    if config.frame_size() != pipeline.correlator.frame_size() {
        return Err(Error::LengthMismatch {
            expected: pipeline.correlator.frame_size(),
            actual: config.frame_size(),
        });
    }
    let frames1 = StftStream::new(config)?.push(x1);
    let frames2 = StftStream::new(config)?.push(x2);
    frames1
        .iter()
        .zip(&frames2)
        .map(|(a, b)| pipeline.process(a, b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcc::{FccBases, SteeringMatrix};
    use alloc::sync::Arc;

    fn shifted_noise(delay: usize, len: usize) -> (Vec<f64>, Vec<f64>) {
        // xorshift noise, channel 1 lags channel 2 by `delay`
        let mut s: u64 = 0x9e3779b97f4a7c15;
        let src: Vec<f64> = (0..len + delay)
            .map(|_| {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        (src[..len].to_vec(), src[delay..].to_vec())
    }

    #[test]
    fn integer_lag_is_found_by_both_methods() {
        let grid = DelayGrid::new(8, 2, 16000.0).unwrap();
        let config = FrameConfig::new(512, 16000.0).unwrap();
        let (x1, x2) = shifted_noise(3, 16000);
        let w = SteeringMatrix::build(grid, 512).unwrap();
        let bases = Arc::new(FccBases::decompose(&w, 8).unwrap());
        for corr in [
            Correlator::from(GccCorrelator::new(512, 2, grid).unwrap()),
            Correlator::from(FccCorrelator::new(bases.clone())),
        ] {
            let mut p = PairPipeline::new(corr, 0.1, 0.15, 343.0).unwrap();
            let est = run_pair(&x1, &x2, config, &mut p).unwrap();
            assert_eq!(est.len(), (16000 - 512) / 256 + 1);
            for e in &est[20..] {
                assert_eq!(e.tau_star, 3.0);
                assert!((e.tau_hat - 3.0).abs() < 0.25);
            }
        }
    }

    #[test]
    fn mismatched_inputs() {
        let grid = DelayGrid::new(8, 2, 16000.0).unwrap();
        let corr = Correlator::from(GccCorrelator::new(512, 2, grid).unwrap());
        let mut p = PairPipeline::new(corr, 0.1, 0.15, 343.0).unwrap();
        let config = FrameConfig::new(256, 16000.0).unwrap();
        assert!(run_pair(&[0.0; 600], &[0.0; 600], config, &mut p).is_err());
        let config = FrameConfig::new(512, 16000.0).unwrap();
        assert!(run_pair(&[0.0; 600], &[0.0; 601], config, &mut p).is_err());
    }
}
