//! The `trackswept` command line: `gen`, `detect`, `eval` and `bench`.
//!
//! Exit codes: 0 success, 2 bad usage, 3 bad input data, 4 refused by the
//! exhaustive-enumeration guard. Every written output gets a sibling
//! manifest recording the command, configuration, seeds, input hashes and
//! tool version.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::detection::{detect, DetectError, DetectorConfig, HoughConfig, Method, RansacConfig, Selection};
use crate::eval::{bench_scaling, score, BenchConfig, BenchError, MatchConfig};
use crate::synth::io::{load_points, load_tracks, save_tracks, write_scene, IoError};
use crate::synth::{generate_scene, ClutterMode, SceneConfig, SceneError};

pub const THREADS_ENV: &str = "TRACKSWEPT_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Guard(_) => 4,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<DetectError> for CliError {
    fn from(e: DetectError) -> Self {
        match e {
            DetectError::TooLarge { .. } => CliError::Guard(e.to_string()),
            DetectError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<SceneError> for CliError {
    fn from(e: SceneError) -> Self {
        match e {
            SceneError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            BenchError::Detect(d) => d.into(),
            BenchError::Scene(s) => s.into(),
            BenchError::Io(io) => CliError::Data(io.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "trackswept", version, about = "Find linear tracks of moving targets in per-frame detections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic scene with ground truth.
    Gen(GenArgs),
    /// Detect tracks in a points CSV.
    Detect(DetectArgs),
    /// Score predicted tracks against ground truth.
    Eval(EvalArgs),
    /// Time detection on scenes of growing size.
    Bench(BenchArgs),
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(v) => Err(format!("must be positive, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        Ok(v) => Err(format!("must be non-negative, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, default_value_t = 5)]
    pub frames: u32,
    #[arg(long, default_value_t = 4)]
    pub targets: usize,
    /// Clutter points per frame.
    #[arg(long, default_value_t = 20)]
    pub clutter: usize,
    /// Gaussian jitter sigma, pixels.
    #[arg(long, default_value_t = 0.5, value_parser = non_negative)]
    pub jitter: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2048.0, value_parser = positive)]
    pub width: f64,
    #[arg(long, default_value_t = 2048.0, value_parser = positive)]
    pub height: f64,
    #[arg(long, default_value_t = 5.0, value_parser = non_negative)]
    pub speed_min: f64,
    #[arg(long, default_value_t = 40.0, value_parser = non_negative)]
    pub speed_max: f64,
    /// Probability of losing each target detection.
    #[arg(long, default_value_t = 0.0, value_parser = non_negative)]
    pub dropout: f64,
    /// Lay clutter along short segments of this length instead of uniformly.
    #[arg(long, value_parser = positive)]
    pub streak_length: Option<f64>,
    #[arg(long, default_value_t = 8)]
    pub streak_points: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct DetectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2.0, value_parser = positive)]
    pub eps1: f64,
    #[arg(long, default_value_t = 2.0, value_parser = positive)]
    pub eps2: f64,
    /// Minimum number of distinct frames in a track.
    #[arg(long, default_value_t = 3)]
    pub min_len: usize,
    /// ts, ps, ransac, hough or naive.
    #[arg(long, default_value = "ts")]
    pub method: Method,
    /// topk:K, thresh:Tr or all.
    #[arg(long, default_value = "all")]
    pub select: Selection,
    /// Skip the x/y-swapped pass for near-vertical tracks.
    #[arg(long)]
    pub no_vertical: bool,
    #[arg(long, default_value_t = 1000)]
    pub ransac_iterations: usize,
    /// Defaults to eps1.
    #[arg(long, value_parser = positive)]
    pub ransac_inlier_eps: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub ransac_min_inliers: usize,
    #[arg(long, default_value_t = 512)]
    pub hough_rho_bins: usize,
    #[arg(long, default_value_t = 180)]
    pub hough_theta_bins: usize,
    #[arg(long, default_value_t = 10)]
    pub hough_peaks: usize,
    /// Defaults to eps1.
    #[arg(long, value_parser = positive)]
    pub hough_inlier_eps: Option<f64>,
    /// Seed for randomized methods.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub points: PathBuf,
    /// Match radius, pixels.
    #[arg(long, default_value_t = 3.0, value_parser = positive)]
    pub lambda: f64,
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "200,400,800,1600,3200")]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "ts")]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Per-run budget in seconds.
    #[arg(long, default_value_t = 300.0, value_parser = positive)]
    pub timeout: f64,
    #[arg(long, default_value_t = 20)]
    pub frames: u32,
    #[arg(long, default_value_t = 4)]
    pub targets: usize,
    #[arg(long, default_value_t = 0.5, value_parser = non_negative)]
    pub jitter: f64,
    #[arg(long, default_value_t = 2.0, value_parser = positive)]
    pub eps: f64,
    #[arg(long, default_value = "bench.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct RunManifest<'a, C: Serialize> {
    command: &'a str,
    config: &'a C,
    seeds: Vec<u64>,
    input_hashes: BTreeMap<String, String>,
    tool_version: &'static str,
    wall_time_seconds: f64,
}

fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// `tracks.json` -> `tracks.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    output.with_file_name(format!("{stem}.manifest.json"))
}

fn write_manifest<C: Serialize>(
    path: &Path,
    command: &str,
    config: &C,
    seeds: Vec<u64>,
    inputs: &[&Path],
    started: Instant,
) -> Result<(), CliError> {
    let mut input_hashes = BTreeMap::new();
    for p in inputs {
        input_hashes.insert(p.display().to_string(), sha256_file(p)?);
    }
    let m = RunManifest {
        command,
        config,
        seeds,
        input_hashes,
        tool_version: env!("CARGO_PKG_VERSION"),
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&m).map_err(|e| CliError::Data(e.to_string()))? + "\n";
    std::fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}

fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let started = Instant::now();
    if args.speed_min > args.speed_max {
        return Err(CliError::Usage("--speed-min must not exceed --speed-max".into()));
    }
    let cfg = SceneConfig {
        frames: args.frames,
        width: args.width,
        height: args.height,
        targets: args.targets,
        clutter_per_frame: args.clutter,
        clutter_total: None,
        clutter_mode: match args.streak_length {
            Some(segment_length) => ClutterMode::StreakResidue { segment_length, points_per_segment: args.streak_points },
            None => ClutterMode::Uniform,
        },
        jitter_sigma: args.jitter,
        speed_range: (args.speed_min, args.speed_max),
        dropout_prob: args.dropout,
        seed: args.seed,
    };
    let scene = generate_scene(&cfg)?;
    write_scene(&args.out, &scene)?;
    write_manifest(&args.out.join("manifest.json"), "gen", &cfg, vec![cfg.seed], &[], started)?;
    eprintln!(
        "wrote {} points and {} ground-truth tracks to {}",
        scene.points.len(),
        scene.gt.tracks.len(),
        args.out.display()
    );
    Ok(())
}

pub fn detector_config(args: &DetectArgs) -> Result<DetectorConfig, CliError> {
    let cfg = DetectorConfig {
        eps1: args.eps1,
        eps2: args.eps2,
        min_frames: args.min_len,
        method: args.method,
        selection: args.select,
        vertical: !args.no_vertical,
        threads: threads_from_env()?,
        ransac: RansacConfig {
            iterations: args.ransac_iterations,
            inlier_eps: args.ransac_inlier_eps.unwrap_or(args.eps1),
            min_inliers: args.ransac_min_inliers,
            seed: args.seed,
        },
        hough: HoughConfig {
            rho_bins: args.hough_rho_bins,
            theta_bins: args.hough_theta_bins,
            peak_count: args.hough_peaks,
            inlier_eps: args.hough_inlier_eps.unwrap_or(args.eps1),
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_detect(args: &DetectArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let cfg = detector_config(args)?;
    let points = load_points(&args.input)?;
    let tracks = detect(&points, &cfg)?;
    save_tracks(&args.out, &tracks)?;
    // Thread count does not change the output, so it stays out of the record.
    let recorded = DetectorConfig { threads: 0, ..cfg };
    write_manifest(&manifest_path(&args.out), "detect", &recorded, vec![args.seed], &[&args.input], started)?;
    eprintln!("{} tracks from {} points written to {}", tracks.tracks.len(), points.len(), args.out.display());
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let points = load_points(&args.points)?;
    let gt = load_tracks(&args.gt, Some(&points))?;
    let pred = load_tracks(&args.pred, Some(&points))?;
    let cfg = MatchConfig { lambda: args.lambda };
    let report = score(&points, &gt, &pred, &cfg);
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Data(e.to_string()))? + "\n";
    print!("{text}");
    if let Some(out) = &args.out {
        std::fs::write(out, &text).map_err(|e| CliError::Data(format!("{}: {e}", out.display())))?;
        write_manifest(&manifest_path(out), "eval", &cfg, vec![], &[&args.points, &args.gt, &args.pred], started)?;
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let cfg = BenchConfig {
        sizes: args.sizes.clone(),
        methods: args.methods.clone(),
        repeats: args.repeats,
        seed: args.seed,
        timeout: Duration::from_secs_f64(args.timeout),
        scene: SceneConfig { frames: args.frames, targets: args.targets, jitter_sigma: args.jitter, ..Default::default() },
        detector: DetectorConfig {
            eps1: args.eps,
            eps2: args.eps,
            vertical: false,
            ransac: RansacConfig { inlier_eps: args.eps, seed: args.seed, ..Default::default() },
            hough: HoughConfig { inlier_eps: args.eps, ..Default::default() },
            ..Default::default()
        },
    };
    let table = bench_scaling(&cfg)?;
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    std::fs::write(&args.out, &buf).map_err(|e| CliError::Data(format!("{}: {e}", args.out.display())))?;
    write_manifest(&manifest_path(&args.out), "bench", &cfg, vec![args.seed], &[], started)?;
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Detect(a) => cmd_detect(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
