//! Per-frame delay estimates for microphone pairs of a multichannel clip.

use std::io::Write;

use fcc_core::{Correlator, FrameConfig, PairPipeline, SpectrumFrame, StftStream};

use crate::error::{Result, ToolError};
use crate::threads::parallel_map;
use crate::wav::WavClip;

pub const TDOA_SCHEMA: &str = "#schema=tdoa/1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdoaRow {
    /// 1-based frame index.
    pub t: u64,
    pub pair: (usize, usize),
    pub tau_star: f64,
    pub tau_hat: f64,
    pub theta_hat_deg: f64,
    pub peak: f64,
    pub boundary: bool,
}

/// `"0-1,0-2"` style pair list; `None` selects every pair.
pub fn parse_pairs(spec: Option<&str>, channels: usize) -> Result<Vec<(usize, usize)>> {
    if channels < 2 {
        return Err(ToolError::usage(format!("need >= 2 channels, found {channels}")));
    }
    let Some(spec) = spec else {
        return Ok((0..channels)
            .flat_map(|i| (i + 1..channels).map(move |j| (i, j)))
            .collect());
    };
    let mut pairs = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || ToolError::usage(format!("bad pair `{item}`: expected <i>-<j> with distinct channel indices"));
        let (a, b) = item.split_once('-').ok_or_else(bad)?;
        let (i, j): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if i == j {
            return Err(bad());
        }
        if i.max(j) >= channels {
            return Err(ToolError::usage(format!(
                "pair `{item}` refers to a channel beyond the {channels} available"
            )));
        }
        pairs.push((i, j));
    }
    if pairs.is_empty() {
        return Err(ToolError::usage("empty pair list"));
    }
    Ok(pairs)
}

/// Streams every selected pair through its own pipeline. Rows are ordered by
/// frame, then by position in `pairs`.
pub fn run_tdoa(
    clip: &WavClip,
    pairs: &[(usize, usize)],
    correlator: &Correlator,
    alpha: f64,
    spacing: f64,
    speed: f64,
    threads: usize,
) -> Result<Vec<TdoaRow>> {
    let config = FrameConfig::new(correlator.frame_size(), f64::from(clip.sample_rate))?;
    let spectra: Vec<Vec<SpectrumFrame>> = parallel_map(clip.channel_count(), threads, |c| {
        StftStream::new(config).map(|mut s| s.push(&clip.channels[c]))
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let per_pair = parallel_map(pairs.len(), threads, |p| -> Result<Vec<TdoaRow>> {
        let (i, j) = pairs[p];
        let mut pipeline = PairPipeline::new(correlator.clone(), alpha, spacing, speed)?;
        spectra[i]
            .iter()
            .zip(&spectra[j])
            .map(|(a, b)| {
                let e = pipeline.process(a, b)?;
                Ok(TdoaRow {
                    t: a.t,
                    pair: (i, j),
                    tau_star: e.tau_star,
                    tau_hat: e.tau_hat,
                    theta_hat_deg: e.theta_hat.to_degrees(),
                    peak: e.peak,
                    boundary: e.boundary,
                })
            })
            .collect()
    });
    let per_pair: Vec<Vec<TdoaRow>> = per_pair.into_iter().collect::<Result<_>>()?;
    let frames = per_pair.first().map_or(0, Vec::len);
    Ok((0..frames)
        .flat_map(|t| per_pair.iter().map(move |rows| rows[t]))
        .collect())
}

pub fn write_tdoa_csv<W: Write>(rows: &[TdoaRow], out: W) -> Result<()> {
    let mut out = out;
    writeln!(out, "{TDOA_SCHEMA}").map_err(|e| ToolError::io("csv", e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "pair", "tau_star", "tau_hat", "theta_hat_deg", "peak", "boundary"])?;
    for r in rows {
        w.write_record([
            r.t.to_string(),
            format!("{}-{}", r.pair.0, r.pair.1),
            format!("{}", r.tau_star),
            format!("{:.6}", r.tau_hat),
            format!("{:.4}", r.theta_hat_deg),
            format!("{:.6}", r.peak),
            u8::from(r.boundary).to_string(),
        ])?;
    }
    w.flush().map_err(|e| ToolError::io("csv", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_specs() {
        assert_eq!(parse_pairs(None, 3).unwrap(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(parse_pairs(Some("1-0, 2-1"), 3).unwrap(), vec![(1, 0), (2, 1)]);
        assert!(parse_pairs(Some("0-0"), 3).is_err());
        assert!(parse_pairs(Some("0-3"), 3).is_err());
        assert!(parse_pairs(Some("a-b"), 3).is_err());
        assert!(parse_pairs(Some(","), 3).is_err());
        let e = parse_pairs(None, 1).unwrap_err();
        assert!(e.to_string().contains("need >= 2 channels"));
    }
}
