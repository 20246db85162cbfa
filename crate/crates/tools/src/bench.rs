//! Per-step wall-clock timing of the streaming pipeline.

use std::fmt::Write as _;
use std::hint::black_box;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use fcc_core::fcc::SteeringMatrix;
use fcc_core::peak::estimate;
use fcc_core::{
    CrossSpectrum, DelayGrid, FccBases, FccCorrelator, FrameConfig, GccCorrelator, PhatVector, SpectrumFrame,
    StftStream,
};

use crate::error::{Result, ToolError};
use crate::sim::{synth_delays, SimConfig, DEFAULT_SAMPLE_RATE};

pub const MIN_REPS: usize = 100;
pub const MIN_WARMUP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    pub mics: usize,
    pub reps: usize,
    pub warmup: usize,
    pub n: usize,
    pub r: u32,
    pub k: usize,
    pub tau_max_int: u32,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            mics: 2,
            reps: 1000,
            warmup: 50,
            n: 512,
            r: 2,
            k: 8,
            tau_max_int: 8,
            seed: 0,
        }
    }
}

/// Mean microseconds per frame for each step, summed over all pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchReport {
    pub mics: usize,
    pub pairs: usize,
    pub frames: usize,
    pub stft: f64,
    pub xspec_phat: f64,
    pub gcc: f64,
    pub fcc: f64,
    pub interpolation: f64,
}

impl BenchReport {
    pub fn total_gcc(&self) -> f64 {
        self.stft + self.xspec_phat + self.gcc + self.interpolation
    }

    pub fn total_fcc(&self) -> f64 {
        self.stft + self.xspec_phat + self.fcc + self.interpolation
    }

    /// `gcc / fcc` step time.
    pub fn speedup(&self) -> f64 {
        self.gcc / self.fcc
    }

    pub fn rows(&self) -> [(&'static str, f64); 7] {
        [
            ("stft", self.stft),
            ("xspec+phat", self.xspec_phat),
            ("gcc", self.gcc),
            ("fcc", self.fcc),
            ("interpolation", self.interpolation),
            ("total with gcc", self.total_gcc()),
            ("total with fcc", self.total_fcc()),
        ]
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "M={} pairs={} frames={} (microseconds per frame)",
            self.mics, self.pairs, self.frames
        );
        for (name, v) in self.rows() {
            let _ = writeln!(s, "{name:<16}{v:>12.3}");
        }
        let _ = writeln!(s, "{:<16}{:>12.3}", "gcc/fcc", self.speedup());
        s
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut out = out;
        writeln!(out, "#schema=bench/1").map_err(|e| ToolError::io("csv", e))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "mics", "pairs", "frames", "us_per_frame"])?;
        for (name, v) in self.rows() {
            w.write_record([
                name.to_string(),
                self.mics.to_string(),
                self.pairs.to_string(),
                self.frames.to_string(),
                format!("{v:.4}"),
            ])?;
        }
        w.flush().map_err(|e| ToolError::io("csv", e))?;
        Ok(())
    }
}

fn micros_per_frame(start: Instant, frames: usize) -> f64 {
    start.elapsed().as_secs_f64() * 1e6 / frames as f64
}

/// Times each step over `warmup + reps` frames on the calling thread.
///
/// Steps run in bulk, one after another over all frames, so timer overhead
/// stays out of the per-frame figures.
pub fn bench_pipeline(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.mics < 2 {
        return Err(ToolError::usage("benchmark needs at least two microphones"));
    }
    if cfg.reps < MIN_REPS || cfg.warmup < MIN_WARMUP {
        return Err(ToolError::usage(format!(
            "benchmark needs at least {MIN_REPS} repetitions and {MIN_WARMUP} warm-up frames"
        )));
    }
    let fs = DEFAULT_SAMPLE_RATE;
    let frame = FrameConfig::new(cfg.n, fs)?;
    let total = cfg.warmup + cfg.reps;
    let sim = SimConfig {
        duration: ((total - 1) * frame.hop() + cfg.n) as f64 / fs,
        ..SimConfig::anechoic(0.1, 1.0, 20.0, cfg.seed)
    };
    let delays: Vec<f64> = (0..cfg.mics).map(|m| m as f64 * 0.5).collect();
    let signals = synth_delays(&sim, &delays)?;
    let pairs: Vec<(usize, usize)> = (0..cfg.mics)
        .flat_map(|i| (i + 1..cfg.mics).map(move |j| (i, j)))
        .collect();

    let grid = DelayGrid::new(cfg.tau_max_int, cfg.r, fs)?;
    let fcc_grid = DelayGrid::new(cfg.tau_max_int, 2, fs)?;
    let bases = Arc::new(FccBases::decompose(&SteeringMatrix::build(fcc_grid, cfg.n)?, cfg.k)?);
    let mut gcc = GccCorrelator::new(cfg.n, cfg.r, grid)?;
    let mut fcc = FccCorrelator::new(bases);

    // stft: every channel over every frame
    let mut streams: Vec<StftStream> = (0..cfg.mics)
        .map(|_| StftStream::new(frame))
        .collect::<Result<_, _>>()?;
    let hop = frame.hop();
    let mut spectra: Vec<Vec<SpectrumFrame>> = vec![Vec::with_capacity(total); cfg.mics];
    let mut time_stft = 0.0;
    for (c, (stream, x)) in streams.iter_mut().zip(&signals).enumerate() {
        let (head, rest) = x.split_at(cfg.n - hop);
        stream.push(head);
        let start = Instant::now();
        for chunk in rest.chunks(hop).take(total) {
            stream.push_with(chunk, |f| spectra[c].push(f.clone()));
        }
        time_stft += start.elapsed().as_secs_f64();
    }
    if spectra.iter().any(|s| s.len() < total) {
        return Err(ToolError::usage("benchmark signal too short"));
    }
    // the frame clone is not part of the step
    let start = Instant::now();
    for s in &spectra {
        for f in s {
            black_box(f.clone());
        }
    }
    time_stft = (time_stft - start.elapsed().as_secs_f64()).max(0.0);
    let stft = time_stft * 1e6 / total as f64;

    let bins = frame.bins();
    let mut phats: Vec<Vec<PhatVector>> = Vec::with_capacity(pairs.len());
    let mut xspec_time = 0.0;
    for &(i, j) in &pairs {
        let mut xs = CrossSpectrum::new(bins, 0.1)?;
        let mut out = vec![PhatVector(vec![Default::default(); bins]); total];
        let start = Instant::now();
        for (t, o) in out.iter_mut().enumerate() {
            xs.update(&spectra[i][t], &spectra[j][t])?;
            xs.phat_into(o);
        }
        xspec_time += start.elapsed().as_secs_f64();
        phats.push(out);
    }
    let xspec_phat = xspec_time * 1e6 / total as f64;

    let measured = |f: &mut dyn FnMut(&PhatVector, &mut [f64]) -> fcc_core::Result<()>,
                    rows: usize|
     -> Result<(f64, Vec<Vec<Vec<f64>>>)> {
        let mut ys = vec![vec![vec![0.0; rows]; total]; pairs.len()];
        let mut elapsed = 0.0;
        for (p, phat) in phats.iter().enumerate() {
            for (x, y) in phat[..cfg.warmup].iter().zip(ys[p].iter_mut()) {
                f(x, y)?;
            }
            let start = Instant::now();
            for (x, y) in phat[cfg.warmup..].iter().zip(ys[p][cfg.warmup..].iter_mut()) {
                f(x, y)?;
            }
            elapsed += start.elapsed().as_secs_f64();
        }
        Ok((elapsed * 1e6 / cfg.reps as f64, ys))
    };
    let (gcc_us, ys) = measured(&mut |x, y| gcc.correlate_into(x, y), grid.len())?;
    let (fcc_us, _) = measured(&mut |x, y| fcc.correlate_into(x, y), fcc_grid.len())?;

    let start = Instant::now();
    for pair in &ys {
        for y in &pair[cfg.warmup..] {
            black_box(estimate(y, &grid, 0.1, 343.0)?);
        }
    }
    let interpolation = micros_per_frame(start, cfg.reps);

    Ok(BenchReport {
        mics: cfg.mics,
        pairs: pairs.len(),
        frames: cfg.reps,
        stft,
        xspec_phat,
        gcc: gcc_us,
        fcc: fcc_us,
        interpolation,
    })
}
