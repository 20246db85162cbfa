use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fcc_core::fcc::SteeringMatrix;
use fcc_core::flops::{flops_dense, flops_fcc, flops_gcc, flops_svdphat};
use fcc_core::{Correlator, DelayGrid, FccBases, FccCorrelator, GccCorrelator};
use fcc_tools::bench::{bench_pipeline, BenchConfig};
use fcc_tools::sim::{
    format_sweep_table, parse_methods, synth_delays, sweep, write_sweep_csv, Reverb, SimConfig, SweepConfig,
    NOMINAL_SPEED,
};
use fcc_tools::tdoa::{parse_pairs, run_tdoa, write_tdoa_csv};
use fcc_tools::threads::worker_count;
use fcc_tools::wav::{WavClip, WavFormat};
use fcc_tools::{basis_file, Result, ToolError};

#[derive(Parser)]
#[command(name = "fcc", version, about = "TDoA estimation with GCC-PHAT and fast cross-correlation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the steering matrix and write a basis file.
    Bases(BasesArgs),
    /// Per-frame delay estimates for the pairs of a WAV file.
    Tdoa(TdoaArgs),
    /// Synthetic MAE sweep over microphone spacings.
    Simulate(SimulateArgs),
    /// Closed-form flop counts.
    Flops(FlopsArgs),
    /// Wall-clock time per pipeline step.
    Bench(BenchArgs),
    /// Write a synthetic multichannel WAV with known delays.
    Synth(SynthArgs),
}

#[derive(Args)]
struct BasesArgs {
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Microphone spacing in metres.
    #[arg(long, default_value_t = 0.15)]
    dist: f64,
    #[arg(long, default_value_t = 16000.0)]
    fs: f64,
    /// Slowest speed of sound considered, m/s.
    #[arg(long, default_value_t = 335.0)]
    cmin: f64,
    /// Grid spacing in samples.
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TdoaArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Pairs such as `0-1,0-2`; all pairs by default.
    #[arg(long)]
    pairs: Option<String>,
    /// `gcc:<r>` or `fcc:<basis file>`.
    #[arg(long, default_value = "gcc:2")]
    method: String,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Spacing used for the delay range (gcc) and the angle.
    #[arg(long, default_value_t = 0.15)]
    dist: f64,
    #[arg(long, default_value_t = NOMINAL_SPEED)]
    c: f64,
    #[arg(long, default_value_t = 335.0)]
    cmin: f64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Comma-separated spacings in metres.
    #[arg(long, default_value = "0.01,0.03,0.05,0.07,0.09,0.11,0.13,0.15")]
    d: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 20.0)]
    snr: f64,
    /// No reverberant tail.
    #[arg(long, conflicts_with = "rt60")]
    anechoic: bool,
    #[arg(long)]
    rt60: Option<f64>,
    /// Direct-to-reverberant energy ratio of the tail, dB.
    #[arg(long, default_value_t = 0.0)]
    drr: f64,
    #[arg(long, default_value = "gcc:2,fcc:8")]
    methods: String,
    #[arg(long, default_value_t = 1.0)]
    duration: f64,
    #[arg(long, default_value_t = 16000.0)]
    fs: f64,
    #[arg(long, default_value_t = 512)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FlopsArgs {
    #[arg(long, default_value_t = 512)]
    n: u64,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    /// Number of candidate delays.
    #[arg(long)]
    i: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 2)]
    mics: usize,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, default_value_t = 50)]
    warmup: usize,
    #[arg(long, default_value_t = 512)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    r: u32,
    #[arg(long, default_value_t = 8)]
    k: usize,
    /// Also write the report as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFormat {
    Pcm16,
    F32,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated delays, samples; channel i+1 gets the delay reported for pair 0-(i+1).
    #[arg(long, allow_hyphen_values = true, default_value = "1.21")]
    tau: String,
    #[arg(long, default_value_t = 20.0)]
    snr: f64,
    #[arg(long)]
    rt60: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    drr: f64,
    #[arg(long, default_value_t = 2.0)]
    duration: f64,
    #[arg(long, default_value_t = 16000)]
    fs: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Peak amplitude of the written samples.
    #[arg(long, default_value_t = 0.25)]
    gain: f64,
    #[arg(long, value_enum, default_value_t = SampleFormat::Pcm16)]
    format: SampleFormat,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| ToolError::io(p.display().to_string(), e))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn parse_list(s: &str, name: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| ToolError::usage(format!("{name}: `{t}` is not a number")))
        })
        .collect()
}

fn cmd_bases(a: BasesArgs) -> Result<()> {
    let grid = DelayGrid::from_geometry(a.dist, a.fs, a.cmin, a.delta)?;
    let w = SteeringMatrix::build(grid, a.n)?;
    let (bases, report) = FccBases::decompose_with_report(&w, a.k)?;
    basis_file::save(&bases, &a.out)?;
    println!("I = {}", grid.len());
    println!("tau_max = {}", grid.tau_max_int());
    println!("K = {} (attainable {})", bases.rank(), report.attainable_rank);
    println!("relative Frobenius residual = {:.6}", report.relative_residual);
    if !report.degenerate.is_empty() {
        println!("degenerate singular values at {:?}", report.degenerate);
    }
    Ok(())
}

fn cmd_tdoa(a: TdoaArgs) -> Result<()> {
    let clip = WavClip::read(&a.input).map_err(|e| match e {
        ToolError::Wav(hound::Error::IoError(io)) => ToolError::io(a.input.display().to_string(), io),
        other => other,
    })?;
    let pairs = parse_pairs(a.pairs.as_deref(), clip.channel_count())?;
    let fs = f64::from(clip.sample_rate);
    let (name, value) = a
        .method
        .split_once(':')
        .ok_or_else(|| ToolError::usage("method must be gcc:<r> or fcc:<basis file>"))?;
    let correlator = match name {
        "gcc" => {
            let r: u32 = value
                .parse()
                .map_err(|_| ToolError::usage(format!("gcc factor `{value}` is not an integer")))?;
            let grid = DelayGrid::from_geometry(a.dist, fs, a.cmin, 1.0 / f64::from(r.max(1)))?;
            Correlator::from(GccCorrelator::new(a.n, r, grid)?)
        }
        "fcc" => {
            let bases = basis_file::load(value)?;
            if bases.grid().sample_rate() != fs {
                return Err(ToolError::usage(format!(
                    "basis file was built for fs = {} but the wav runs at {fs}",
                    bases.grid().sample_rate()
                )));
            }
            Correlator::from(FccCorrelator::new(Arc::new(bases)))
        }
        _ => return Err(ToolError::usage(format!("unknown method `{name}`"))),
    };
    let rows = run_tdoa(&clip, &pairs, &correlator, a.alpha, a.dist, a.c, worker_count())?;
    write_tdoa_csv(&rows, output(a.out.as_deref())?)
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let methods = parse_methods(&a.methods)?;
    let reverb = match (a.anechoic, a.rt60) {
        (false, Some(rt60)) => Some(Reverb {
            rt60,
            direct_to_reverb_db: a.drr,
        }),
        _ => None,
    };
    let cfg = SweepConfig {
        d_list: parse_list(&a.d, "d")?,
        trials: a.trials,
        snr_db: a.snr,
        reverb,
        duration: a.duration,
        fs: a.fs,
        n: a.n,
        alpha: a.alpha,
        fcc_subdivisions: 2,
        seed: a.seed,
    };
    let result = sweep(&cfg, &methods, worker_count())?;
    if let Some(path) = &a.out {
        write_sweep_csv(&result.rows, output(Some(path))?)?;
    } else {
        write_sweep_csv(&result.rows, io::stdout().lock())?;
    }
    eprint!("MAE (degrees)\n{}", format_sweep_table(&result.rows));
    Ok(())
}

fn cmd_flops(a: FlopsArgs) -> Result<()> {
    let mut gcc = None;
    if let Some(r) = a.r {
        let f = flops_gcc(a.n, r)?;
        println!("gcc N={} r={}: {f}", a.n, r);
        gcc = Some(f);
    }
    if let Some(k) = a.k {
        let i = a.i.ok_or_else(|| ToolError::usage("--k needs --i"))?;
        let f = flops_fcc(a.n, k, i)?;
        println!("fcc N={} K={k} I={i}: {f}", a.n);
        println!("svd-phat N={} K={k} I={i}: {}", a.n, flops_svdphat(a.n, k, i)?);
        let reference = match gcc {
            Some(g) => g,
            None => flops_gcc(a.n, 2)?,
        };
        println!("gcc/fcc ratio: {:.3}", reference as f64 / f as f64);
    }
    if let Some(i) = a.i {
        println!("dense N={} I={i}: {}", a.n, flops_dense(a.n, i)?);
    }
    if a.r.is_none() && a.k.is_none() && a.i.is_none() {
        return Err(ToolError::usage("give --r, or --k with --i, or --i"));
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let report = bench_pipeline(&BenchConfig {
        mics: a.mics,
        reps: a.reps,
        warmup: a.warmup,
        n: a.n,
        r: a.r,
        k: a.k,
        ..BenchConfig::default()
    })?;
    print!("{}", report.to_text());
    if let Some(path) = &a.csv {
        report.write_csv(output(Some(path))?)?;
    }
    Ok(())
}

fn cmd_synth(a: SynthArgs) -> Result<()> {
    let taus = parse_list(&a.tau, "tau")?;
    if taus.is_empty() {
        return Err(ToolError::usage("--tau needs at least one delay"));
    }
    let cfg = SimConfig {
        fs: f64::from(a.fs),
        duration: a.duration,
        snr_db: a.snr,
        reverb: a.rt60.map(|rt60| Reverb {
            rt60,
            direct_to_reverb_db: a.drr,
        }),
        seed: a.seed,
        ..SimConfig::anechoic(0.1, 0.0, a.snr, a.seed)
    };
    cfg.validate()?;
    let delays: Vec<f64> = std::iter::once(0.0).chain(taus.iter().map(|t| -t)).collect();
    let mut channels = synth_delays(&cfg, &delays)?;
    let peak = channels
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for c in channels.iter_mut() {
        c.iter_mut().for_each(|v| *v *= a.gain / peak);
    }
    let format = match a.format {
        SampleFormat::Pcm16 => WavFormat::Pcm16,
        SampleFormat::F32 => WavFormat::Float32,
    };
    WavClip::new(a.fs, channels)?
        .write(&a.out, format)
        .map_err(|e| match e {
            ToolError::Wav(hound::Error::IoError(io)) => ToolError::io(a.out.display().to_string(), io),
            other => other,
        })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Bases(a) => cmd_bases(a),
        Command::Tdoa(a) => cmd_tdoa(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Flops(a) => cmd_flops(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
