//! Synthetic two-channel scenarios and MAE sweeps.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use fcc_core::fcc::SteeringMatrix;
use fcc_core::fft::{irfft, rfft};
use fcc_core::peak::TdoaEstimate;
use fcc_core::pipeline::run_pair;
use fcc_core::{
    Complex64, Correlator, DelayGrid, FccBases, FccCorrelator, FrameConfig, GccCorrelator, PairPipeline,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, ToolError};
use crate::threads::parallel_map;

pub const DEFAULT_FRAME_SIZE: usize = 512;
pub const DEFAULT_SAMPLE_RATE: f64 = 16000.0;
pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_CONVERGENCE: usize = 20;
/// Default speed of sound, m/s.
pub const NOMINAL_SPEED: f64 = 343.0;
pub const SPEED_RANGE: (f64, f64) = (335.0, 350.0);
pub const SPACING_JITTER: f64 = 0.001;

const LN_1000: f64 = 6.907_755_278_982_137;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reverb {
    pub rt60: f64,
    pub direct_to_reverb_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Microphone spacing, metres.
    pub d: f64,
    /// Source angle, radians.
    pub theta: f64,
    /// Speed of sound, m/s.
    pub c: f64,
    pub fs: f64,
    pub duration: f64,
    /// Sensor noise level relative to the unit-variance source; infinite for none.
    pub snr_db: f64,
    pub reverb: Option<Reverb>,
    pub seed: u64,
}

impl SimConfig {
    pub fn anechoic(d: f64, theta: f64, snr_db: f64, seed: u64) -> Self {
        Self {
            d,
            theta,
            c: NOMINAL_SPEED,
            fs: DEFAULT_SAMPLE_RATE,
            duration: 1.0,
            snr_db,
            reverb: None,
            seed,
        }
    }

    /// Ground-truth delay in samples, positive when channel 1 lags.
    pub fn tau(&self) -> f64 {
        self.fs * self.d / self.c * self.theta.cos()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ToolError::usage(format!("{name} must be positive, got {v}")))
            }
        };
        positive("d", self.d)?;
        positive("c", self.c)?;
        positive("fs", self.fs)?;
        positive("duration", self.duration)?;
        if !(0.0..=std::f64::consts::PI).contains(&self.theta) {
            return Err(ToolError::usage(format!("theta must lie in [0, pi], got {}", self.theta)));
        }
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return Err(ToolError::usage("snr must be a number or inf"));
        }
        if let Some(r) = self.reverb {
            positive("rt60", r.rt60)?;
            if !r.direct_to_reverb_db.is_finite() {
                return Err(ToolError::usage("direct-to-reverberant ratio must be finite"));
            }
        }
        Ok(())
    }
}

fn noise(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Circular delay of `x` (power-of-two length) by `tau` samples.
pub fn fractional_delay(x: &[f64], tau: f64) -> Result<Vec<f64>> {
    let len = x.len() as f64;
    let mut bins = rfft(x)?;
    for (f, b) in bins.iter_mut().enumerate() {
        *b *= Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f as f64 * tau / len);
    }
    Ok(irfft(&bins)?)
}

/// Unit impulse followed by exponentially decaying noise, `rt60` long.
pub fn reverb_tail(reverb: Reverb, fs: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let len = ((reverb.rt60 * fs).ceil() as usize).max(2);
    let mut h = noise(rng, len);
    h[0] = 0.0;
    for (n, v) in h.iter_mut().enumerate().skip(1) {
        *v *= (-LN_1000 * n as f64 / (reverb.rt60 * fs)).exp();
    }
    let energy: f64 = h.iter().map(|v| v * v).sum();
    let gain = (10f64.powf(-reverb.direct_to_reverb_db / 10.0) / energy).sqrt();
    h.iter_mut().for_each(|v| *v *= gain);
    h[0] = 1.0;
    h
}

fn convolve(x: &[f64], h: &[f64]) -> Result<Vec<f64>> {
    let len = (x.len() + h.len() - 1).next_power_of_two();
    let mut a = x.to_vec();
    a.resize(len, 0.0);
    let mut b = h.to_vec();
    b.resize(len, 0.0);
    let fa = rfft(&a)?;
    let fb = rfft(&b)?;
    let prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(p, q)| p * q).collect();
    let mut y = irfft(&prod)?;
    y.truncate(x.len() + h.len() - 1);
    Ok(y)
}

/// Two channels of one source: channel 1 delayed by `+tau/2`, channel 2 by `-tau/2`.
pub fn synth_pair(cfg: &SimConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    cfg.validate()?;
    synth_delays(cfg, &[cfg.tau() / 2.0, -cfg.tau() / 2.0]).map(|mut v| {
        let b = v.pop().unwrap();
        let a = v.pop().unwrap();
        (a, b)
    })
}

/// One channel per entry of `delays` (samples); geometry fields of `cfg` are ignored.
pub fn synth_delays(cfg: &SimConfig, delays: &[f64]) -> Result<Vec<Vec<f64>>> {
    let out_len = (cfg.duration * cfg.fs).round() as usize;
    if out_len == 0 {
        return Err(ToolError::usage("duration is shorter than one sample"));
    }
    let max_delay = delays.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let pad = max_delay.ceil() as usize + 2;
    let tail = cfg.reverb.map_or(0, |r| (r.rt60 * cfg.fs).ceil() as usize);
    let len = (out_len + 2 * pad + tail).next_power_of_two();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let source = noise(&mut rng, len);
    let sigma = if cfg.snr_db.is_infinite() {
        0.0
    } else {
        10f64.powf(-cfg.snr_db / 20.0)
    };
    let mut channels = Vec::with_capacity(delays.len());
    for &delay in delays {
        let mut x = fractional_delay(&source, delay)?;
        let start = pad + tail;
        if let Some(r) = cfg.reverb {
            let h = reverb_tail(r, cfg.fs, &mut rng);
            x = convolve(&x, &h)?;
        }
        let mut x = x[start..start + out_len].to_vec();
        if sigma > 0.0 {
            for v in x.iter_mut() {
                *v += sigma * rng.sample::<f64, _>(StandardNormal);
            }
        }
        channels.push(x);
    }
    Ok(channels)
}

/// Correlation method with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Zero-padding factor `r`.
    Gcc { r: u32 },
    /// Retained rank `K`.
    Fcc { k: usize },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Gcc { .. } => "gcc",
            Method::Fcc { .. } => "fcc",
        }
    }

    pub fn parameter(&self) -> usize {
        match *self {
            Method::Gcc { r } => r as usize,
            Method::Fcc { k } => k,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name(), self.parameter())
    }
}

impl FromStr for Method {
    type Err = ToolError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, value) = s
            .split_once(':')
            .ok_or_else(|| ToolError::usage(format!("method `{s}` must look like gcc:<r> or fcc:<K>")))?;
        let value: usize = value
            .parse()
            .map_err(|_| ToolError::usage(format!("method `{s}`: `{value}` is not a positive integer")))?;
        if value == 0 {
            return Err(ToolError::usage(format!("method `{s}`: parameter must be positive")));
        }
        match name {
            "gcc" if value.is_power_of_two() => Ok(Method::Gcc { r: value as u32 }),
            "gcc" => Err(ToolError::usage(format!("method `{s}`: r must be a power of two"))),
            "fcc" => Ok(Method::Fcc { k: value }),
            _ => Err(ToolError::usage(format!("unknown method `{name}`"))),
        }
    }
}

/// Parses a comma-separated method list such as `gcc:2,fcc:8`.
pub fn parse_methods(s: &str) -> Result<Vec<Method>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse()).collect()
}

/// Correlators for a set of methods sharing one frame size and delay range.
///
/// GCC with factor `r` uses a grid of spacing `1/r`; every FCC method uses the
/// grid of spacing `1/fcc_subdivisions`.
#[derive(Debug, Clone)]
pub struct Evaluator {
    frame: FrameConfig,
    alpha: f64,
    convergence: usize,
    methods: Vec<(Method, Correlator)>,
}

impl Evaluator {
    pub fn new(n: usize, fs: f64, tau_max_int: u32, fcc_subdivisions: u32, methods: &[Method]) -> Result<Self> {
        if methods.is_empty() {
            return Err(ToolError::usage("at least one method is required"));
        }
        let frame = FrameConfig::new(n, fs)?;
        let mut steering: Option<SteeringMatrix> = None;
        let mut built = Vec::with_capacity(methods.len());
        for &m in methods {
            let corr = match m {
                Method::Gcc { r } => {
                    let grid = DelayGrid::new(tau_max_int, r, fs)?;
                    Correlator::from(GccCorrelator::new(n, r, grid)?)
                }
                Method::Fcc { k } => {
                    if steering.is_none() {
                        let grid = DelayGrid::new(tau_max_int, fcc_subdivisions, fs)?;
                        steering = Some(SteeringMatrix::build(grid, n)?);
                    }
                    let bases = FccBases::decompose(steering.as_ref().unwrap(), k)?;
                    Correlator::from(FccCorrelator::new(Arc::new(bases)))
                }
            };
            built.push((m, corr));
        }
        Ok(Self {
            frame,
            alpha: DEFAULT_ALPHA,
            convergence: DEFAULT_CONVERGENCE,
            methods: built,
        })
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_convergence(mut self, frames: usize) -> Self {
        self.convergence = frames;
        self
    }

    pub fn methods(&self) -> impl Iterator<Item = Method> + '_ {
        self.methods.iter().map(|(m, _)| *m)
    }

    pub fn convergence(&self) -> usize {
        self.convergence
    }

    pub fn frame(&self) -> FrameConfig {
        self.frame
    }
}

/// Estimates of every method on one synthetic input.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub tau_true: f64,
    pub theta_true: f64,
    /// Index of the first recorded frame.
    pub convergence: usize,
    /// Per method, the estimates of frames `convergence..`.
    pub estimates: Vec<(Method, Vec<TdoaEstimate>)>,
}

impl TrialResult {
    pub fn get(&self, method: Method) -> Option<&[TdoaEstimate]> {
        self.estimates.iter().find(|(m, _)| *m == method).map(|(_, e)| e.as_slice())
    }
}

/// Runs every method of `eval` on `synth_pair(cfg)`. Angles use the
/// scenario's own spacing and speed of sound.
pub fn run_trial(cfg: &SimConfig, eval: &Evaluator) -> Result<TrialResult> {
    if (cfg.fs - eval.frame.sample_rate()).abs() > 0.0 {
        return Err(ToolError::usage("simulation and evaluator sample rates differ"));
    }
    let (x1, x2) = synth_pair(cfg)?;
    let mut estimates = Vec::with_capacity(eval.methods.len());
    for (m, corr) in &eval.methods {
        let mut pipeline = PairPipeline::new(corr.clone(), eval.alpha, cfg.d, cfg.c)?;
        let all = run_pair(&x1, &x2, eval.frame, &mut pipeline)?;
        estimates.push((*m, all.into_iter().skip(eval.convergence).collect()));
    }
    Ok(TrialResult {
        tau_true: cfg.tau(),
        theta_true: cfg.theta,
        convergence: eval.convergence,
        estimates,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub d_list: Vec<f64>,
    pub trials: usize,
    pub snr_db: f64,
    pub reverb: Option<Reverb>,
    pub duration: f64,
    pub fs: f64,
    pub n: usize,
    pub alpha: f64,
    pub fcc_subdivisions: u32,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            d_list: vec![0.01, 0.03, 0.05, 0.07, 0.09, 0.11, 0.13, 0.15],
            trials: 50,
            snr_db: 20.0,
            reverb: None,
            duration: 1.0,
            fs: DEFAULT_SAMPLE_RATE,
            n: DEFAULT_FRAME_SIZE,
            alpha: DEFAULT_ALPHA,
            fcc_subdivisions: 2,
            seed: 0,
        }
    }
}

impl SweepConfig {
    /// Integer delay bound covering the widest jittered spacing at the
    /// slowest speed of sound.
    pub fn tau_max_int(&self) -> u32 {
        let d = self.d_list.iter().fold(0.0f64, |m, v| m.max(*v)) + SPACING_JITTER;
        DelayGrid::from_geometry(d, self.fs, SPEED_RANGE.0, 1.0)
            .map(|g| g.tau_max_int())
            .unwrap_or(0)
    }

    pub fn evaluator(&self, methods: &[Method]) -> Result<Evaluator> {
        Ok(Evaluator::new(self.n, self.fs, self.tau_max_int(), self.fcc_subdivisions, methods)?.with_alpha(self.alpha))
    }

    /// Randomized scenario for trial `trial` at spacing index `di`.
    pub fn scenario(&self, di: usize, trial: usize) -> SimConfig {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((di as u64) << 32) | trial as u64);
        let cos_theta: f64 = rng.random_range(-1.0..=1.0);
        SimConfig {
            d: self.d_list[di] + rng.random_range(-SPACING_JITTER..=SPACING_JITTER),
            theta: cos_theta.acos(),
            c: rng.random_range(SPEED_RANGE.0..=SPEED_RANGE.1),
            fs: self.fs,
            duration: self.duration,
            snr_db: self.snr_db,
            reverb: self.reverb,
            seed: rng.random(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(ToolError::usage("trials must be at least one"));
        }
        if self.d_list.is_empty() {
            return Err(ToolError::usage("at least one spacing is required"));
        }
        if let Some(d) = self.d_list.iter().find(|d| !(**d > SPACING_JITTER && d.is_finite())) {
            return Err(ToolError::usage(format!("spacing {d} must exceed {SPACING_JITTER} m")));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(ToolError::usage("alpha must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// MAE of one method at one spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub d: f64,
    pub method: Method,
    pub mae_deg: f64,
    pub trials: usize,
    pub boundary_rate: f64,
}

/// Every trial of a sweep, in `(spacing, trial)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub trials: Vec<Vec<TrialResult>>,
    pub rows: Vec<SweepRow>,
}

pub fn sweep(cfg: &SweepConfig, methods: &[Method], threads: usize) -> Result<SweepResult> {
    cfg.validate()?;
    let eval = cfg.evaluator(methods)?;
    let per_d = cfg.trials;
    let flat = parallel_map(cfg.d_list.len() * per_d, threads, |idx| {
        let (di, trial) = (idx / per_d, idx % per_d);
        run_trial(&cfg.scenario(di, trial), &eval)
    });
    let mut trials: Vec<Vec<TrialResult>> = Vec::with_capacity(cfg.d_list.len());
    let mut iter = flat.into_iter();
    for _ in &cfg.d_list {
        trials.push(iter.by_ref().take(per_d).collect::<Result<_>>()?);
    }

    let mut rows = Vec::new();
    for (d, results) in cfg.d_list.iter().zip(&trials) {
        let mut acc: BTreeMap<Method, (f64, usize, usize)> = BTreeMap::new();
        for result in results {
            for (m, est) in &result.estimates {
                let e = acc.entry(*m).or_default();
                for x in est {
                    e.0 += (x.theta_hat - result.theta_true).abs();
                    e.1 += 1;
                    e.2 += usize::from(x.boundary);
                }
            }
        }
        for m in methods {
            let (sum, frames, boundary) = acc.get(m).copied().unwrap_or_default();
            if frames == 0 {
                return Err(ToolError::usage(format!(
                    "duration too short: no frames after convergence index {}",
                    eval.convergence
                )));
            }
            rows.push(SweepRow {
                d: *d,
                method: *m,
                mae_deg: (sum / frames as f64).to_degrees(),
                trials: results.len(),
                boundary_rate: boundary as f64 / frames as f64,
            });
        }
    }
    Ok(SweepResult { trials, rows })
}

pub const MAE_SCHEMA: &str = "#schema=mae/1";

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut out = out;
    writeln!(out, "{MAE_SCHEMA}").map_err(|e| ToolError::io("csv", e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["d", "method", "parameter", "mae_deg", "trials", "boundary_rate"])?;
    for r in rows {
        w.write_record([
            format!("{}", r.d),
            r.method.name().to_string(),
            r.method.parameter().to_string(),
            format!("{:.6}", r.mae_deg),
            r.trials.to_string(),
            format!("{:.6}", r.boundary_rate),
        ])?;
    }
    w.flush().map_err(|e| ToolError::io("csv", e))?;
    Ok(())
}

/// Aligned text version of a sweep, one column per spacing.
pub fn format_sweep_table(rows: &[SweepRow]) -> String {
    let mut ds: Vec<f64> = Vec::new();
    let mut methods: Vec<Method> = Vec::new();
    for r in rows {
        if !ds.contains(&r.d) {
            ds.push(r.d);
        }
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    let mut s = format!("{:<10}", "method");
    for d in &ds {
        s += &format!("{:>9}", format!("{d:.2}m"));
    }
    s.push('\n');
    for m in &methods {
        s += &format!("{:<10}", m.to_string());
        for d in &ds {
            match rows.iter().find(|r| r.method == *m && r.d == *d) {
                Some(r) => s += &format!("{:>9.2}", r.mae_deg),
                None => s += &format!("{:>9}", "-"),
            }
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_parsing() {
        assert_eq!("gcc:2".parse::<Method>().unwrap(), Method::Gcc { r: 2 });
        assert_eq!("fcc:8".parse::<Method>().unwrap(), Method::Fcc { k: 8 });
        assert!("gcc:3".parse::<Method>().is_err());
        assert!("fcc:0".parse::<Method>().is_err());
        assert!("svd:1".parse::<Method>().is_err());
        assert!("fcc".parse::<Method>().is_err());
        assert_eq!(parse_methods("gcc:2, fcc:8").unwrap().len(), 2);
        assert_eq!(Method::Fcc { k: 8 }.to_string(), "fcc:8");
    }

    #[test]
    fn ground_truth_delay() {
        let cfg = SimConfig::anechoic(0.05, 0.0, 40.0, 1);
        assert!((cfg.tau() - 2.3324).abs() < 1e-4);
        let broadside = SimConfig::anechoic(0.05, std::f64::consts::FRAC_PI_2, 40.0, 1);
        assert!(broadside.tau().abs() < 1e-12);
    }

    #[test]
    fn fractional_delay_of_integer_is_a_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = noise(&mut rng, 256);
        let y = fractional_delay(&x, 3.0).unwrap();
        for i in 0..256 {
            assert!((y[(i + 3) % 256] - x[i]).abs() < 1e-10);
        }
        let half = fractional_delay(&fractional_delay(&x, 0.5).unwrap(), -0.5).unwrap();
        // Nyquist bin loses its imaginary part after a half-sample shift
        let err: f64 = half.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / 256.0;
        assert!(err < 1e-2);
    }

    #[test]
    fn reverb_tail_energy_matches_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = Reverb {
            rt60: 0.3,
            direct_to_reverb_db: 6.0,
        };
        let h = reverb_tail(r, 16000.0, &mut rng);
        assert_eq!(h[0], 1.0);
        assert_eq!(h.len(), 4800);
        let tail: f64 = h[1..].iter().map(|v| v * v).sum();
        assert!((10.0 * (1.0 / tail).log10() - 6.0).abs() < 1e-9);
        // 60 dB decay over rt60: the last tenth is far quieter than the first
        let head: f64 = h[1..480].iter().map(|v| v * v).sum();
        let end: f64 = h[4320..].iter().map(|v| v * v).sum();
        assert!(end < head * 1e-4);
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let x = [1.0, 2.0, -1.0, 0.5];
        let h = [1.0, 0.0, 0.25];
        let y = convolve(&x, &h).unwrap();
        let direct: Vec<f64> = (0..6)
            .map(|n| (0..3).filter(|&k| n >= k && n - k < 4).map(|k| h[k] * x[n - k]).sum())
            .collect();
        for (a, b) in y.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn noiseless_pair_peaks_at_rounded_delay() {
        let cfg = SimConfig {
            snr_db: f64::INFINITY,
            duration: 0.25,
            ..SimConfig::anechoic(0.05, 0.0, 0.0, 5)
        };
        let (x1, x2) = synth_pair(&cfg).unwrap();
        // direct time-domain cross-correlation, x1[n] ~ x2[n - tau]
        let xc = |lag: i64| -> f64 {
            (0..x1.len() as i64)
                .filter(|n| (0..x2.len() as i64).contains(&(n - lag)))
                .map(|n| x1[n as usize] * x2[(n - lag) as usize])
                .sum()
        };
        let best = (-6..=6).max_by(|a, b| xc(*a).total_cmp(&xc(*b))).unwrap();
        assert_eq!(best, cfg.tau().round() as i64);
    }

    #[test]
    fn broadside_channels_match_up_to_noise() {
        let cfg = SimConfig::anechoic(0.1, std::f64::consts::FRAC_PI_2, 30.0, 6);
        let (x1, x2) = synth_pair(&cfg).unwrap();
        let diff: f64 = x1.iter().zip(&x2).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / x1.len() as f64;
        // two independent noises of variance 1e-3
        assert!((diff - 2e-3).abs() < 3e-4, "{diff}");
    }

    #[test]
    fn scenarios_are_randomized_within_ranges() {
        let cfg = SweepConfig {
            trials: 200,
            ..SweepConfig::default()
        };
        for t in 0..200 {
            let s = cfg.scenario(7, t);
            assert!((s.d - 0.15).abs() <= SPACING_JITTER);
            assert!((SPEED_RANGE.0..=SPEED_RANGE.1).contains(&s.c));
            assert!((0.0..=std::f64::consts::PI).contains(&s.theta));
        }
        assert_eq!(cfg.scenario(1, 2), cfg.scenario(1, 2));
        assert_ne!(cfg.scenario(1, 2), cfg.scenario(2, 1));
        assert_eq!(cfg.tau_max_int(), 8);
    }
}
