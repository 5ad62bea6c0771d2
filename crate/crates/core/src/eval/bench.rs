use std::io::Write;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detection::{find_all_tracks, subset_count_estimate, DetectError, DetectorConfig, Method, NAIVE_LIMIT};
use crate::synth::{generate_scene, SceneConfig, SceneError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    /// Total point counts, ascending.
    pub sizes: Vec<usize>,
    pub methods: Vec<Method>,
    pub repeats: usize,
    pub seed: u64,
    /// Budget per timed run. A run that exceeds it marks the cell missing and
    /// the method is not tried at larger sizes.
    pub timeout: Duration,
    /// Targets, frames and noise for every scene; clutter is set per size.
    pub scene: SceneConfig,
    pub detector: DetectorConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![200, 400, 800, 1600, 3200],
            methods: vec![Method::Ts],
            repeats: 5,
            seed: 1,
            timeout: Duration::from_secs(300),
            scene: SceneConfig { frames: 20, targets: 4, ..Default::default() },
            detector: DetectorConfig { vertical: false, ..Default::default() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    Timeout,
    /// Not attempted: above the exhaustive guard, or a smaller size timed out.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub method: Method,
    pub n: usize,
    pub median_seconds: Option<f64>,
    pub status: CellStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub cells: Vec<BenchCell>,
}

impl BenchTable {
    pub fn median(&self, method: Method, n: usize) -> Option<f64> {
        self.cells.iter().find(|c| c.method == method && c.n == n).and_then(|c| c.median_seconds)
    }

    /// Least-squares slope of log(time) against log(n) over completed cells.
    pub fn slope(&self, method: Method) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .cells
            .iter()
            .filter(|c| c.method == method)
            .filter_map(|c| c.median_seconds.map(|s| (c.n as f64, s)))
            .collect();
        loglog_slope(&pts)
    }

    /// CSV with one row per cell (empty `slope_fit`) followed by one row per
    /// method holding its slope (empty `n` and `median_seconds`).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), BenchError> {
        let mut wr = csv::Writer::from_writer(w);
        let wrap = |e: csv::Error| BenchError::InvalidConfig(e.to_string());
        wr.write_record(["method", "n", "median_seconds", "slope_fit"]).map_err(wrap)?;
        let mut methods: Vec<Method> = Vec::new();
        for c in &self.cells {
            if !methods.contains(&c.method) {
                methods.push(c.method);
            }
            let median = c.median_seconds.map(|s| format!("{s:.6}")).unwrap_or_default();
            wr.write_record([c.method.to_string(), c.n.to_string(), median, String::new()]).map_err(wrap)?;
        }
        for m in methods {
            let slope = self.slope(m).map(|s| format!("{s:.4}")).unwrap_or_default();
            wr.write_record([m.to_string(), String::new(), String::new(), slope]).map_err(wrap)?;
        }
        wr.flush()?;
        Ok(())
    }
}

pub fn loglog_slope(pts: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = pts.iter().filter(|(n, t)| *n > 0.0 && *t > 0.0).map(|(n, t)| (n.ln(), t.ln())).collect();
    if logs.len() < 2 {
        return None;
    }
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Times single-pass detection for each method over scenes of growing size.
///
/// Each size gets one scene (seeded from `seed` and the size); clutter is set
/// so the scene holds exactly `n` points. Only the detection call is timed.
pub fn bench_scaling(cfg: &BenchConfig) -> Result<BenchTable, BenchError> {
    if cfg.repeats < 3 {
        return Err(BenchError::InvalidConfig(format!("repeats must be at least 3, got {}", cfg.repeats)));
    }
    if cfg.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::InvalidConfig("sizes must be strictly ascending".into()));
    }
    let mut cells = Vec::new();
    let mut given_up: Vec<Method> = Vec::new();
    for &n in &cfg.sizes {
        let target_points = cfg.scene.targets * cfg.scene.frames as usize;
        if n < target_points {
            return Err(BenchError::InvalidConfig(format!("size {n} is smaller than the {target_points} target points")));
        }
        let scene_cfg = SceneConfig {
            clutter_total: Some(n - target_points),
            dropout_prob: 0.0,
            seed: cfg.seed.wrapping_mul(1_000_003).wrapping_add(n as u64),
            ..cfg.scene.clone()
        };
        let scene = generate_scene(&scene_cfg)?;
        for &method in &cfg.methods {
            let skipped = BenchCell { method, n, median_seconds: None, status: CellStatus::Skipped };
            if given_up.contains(&method)
                || (method == Method::Naive && subset_count_estimate(scene.points.points()) > NAIVE_LIMIT)
            {
                cells.push(skipped);
                continue;
            }
            let det = DetectorConfig { method, ..cfg.detector.clone() };
            let mut times = Vec::with_capacity(cfg.repeats);
            let mut timed_out = false;
            for _ in 0..cfg.repeats {
                let start = Instant::now();
                let out = find_all_tracks(&scene.points, &det)?;
                let elapsed = start.elapsed();
                std::hint::black_box(out);
                if elapsed > cfg.timeout {
                    timed_out = true;
                    break;
                }
                times.push(elapsed.as_secs_f64());
            }
            if timed_out {
                log::warn!("{method} exceeded {:?} at n={n}; skipping larger sizes", cfg.timeout);
                given_up.push(method);
                cells.push(BenchCell { method, n, median_seconds: None, status: CellStatus::Timeout });
            } else {
                cells.push(BenchCell { method, n, median_seconds: Some(median(times)), status: CellStatus::Ok });
            }
        }
    }
    Ok(BenchTable { cells })
}
