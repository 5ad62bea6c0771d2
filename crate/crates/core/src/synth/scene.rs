use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detection::{Track, TrackParams, TrackSet};
use crate::geometry::{is_feasible, PointSet, TimedPoint};

const MAX_TRIES: usize = 100;
/// Slack added to the 3-sigma feasibility bound of generated tracks.
pub const GT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error("invalid scene configuration: {0}")]
    InvalidConfig(String),
    #[error("could not place target {target} after {tries} attempts: {reason}")]
    InfeasibleConfig { target: usize, tries: usize, reason: String },
}

/// How clutter is laid out within a frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ClutterMode {
    /// Independent uniform points over the image.
    Uniform,
    /// Clutter grouped on short random segments, like residue left by
    /// imperfect star subtraction.
    StreakResidue { segment_length: f64, points_per_segment: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    pub frames: u32,
    pub width: f64,
    pub height: f64,
    pub targets: usize,
    pub clutter_per_frame: usize,
    /// When set, replaces `clutter_per_frame`: this many clutter points in
    /// total, spread as evenly as possible with earlier frames taking the
    /// remainder.
    #[serde(default)]
    pub clutter_total: Option<usize>,
    pub clutter_mode: ClutterMode,
    /// Standard deviation of the isotropic Gaussian jitter, pixels.
    pub jitter_sigma: f64,
    /// Inclusive speed range, pixels per frame.
    pub speed_range: (f64, f64),
    pub dropout_prob: f64,
    pub seed: u64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            frames: 5,
            width: 2048.0,
            height: 2048.0,
            targets: 4,
            clutter_per_frame: 20,
            clutter_total: None,
            clutter_mode: ClutterMode::Uniform,
            jitter_sigma: 0.5,
            speed_range: (5.0, 40.0),
            dropout_prob: 0.0,
            seed: 0,
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<(), SceneError> {
        let bad = |m: &str| Err(SceneError::InvalidConfig(m.to_string()));
        if self.frames < 1 {
            return bad("frames must be at least 1");
        }
        if !(self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite()) {
            return bad("image size must be positive");
        }
        if !(self.jitter_sigma >= 0.0 && self.jitter_sigma.is_finite()) {
            return bad("jitter_sigma must be non-negative");
        }
        let (lo, hi) = self.speed_range;
        if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
            return bad("speed range must satisfy 0 <= min <= max");
        }
        if !(0.0..1.0).contains(&self.dropout_prob) {
            return bad("dropout_prob must lie in [0, 1)");
        }
        if self.targets > 0 && self.frames < 3 {
            return bad("targets need at least 3 frames");
        }
        if let ClutterMode::StreakResidue { segment_length, points_per_segment } = self.clutter_mode {
            if points_per_segment == 0 || !(segment_length >= 0.0) {
                return bad("streak segments need a point count >= 1 and a non-negative length");
            }
        }
        Ok(())
    }

    fn clutter_in_frame(&self, frame: u32) -> usize {
        match self.clutter_total {
            Some(total) => {
                let f = self.frames as usize;
                total / f + usize::from(((frame - 1) as usize) < total % f)
            }
            None => self.clutter_per_frame,
        }
    }

    /// Tolerance at which every ground-truth track is guaranteed feasible.
    pub fn gt_tolerance(&self) -> f64 {
        3.0 * self.jitter_sigma + GT_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedScene {
    pub points: PointSet,
    pub gt: TrackSet,
    pub config: SceneConfig,
}

/// One target's surviving detections, `(frame, x, y)`.
type Detections = Vec<(u32, f64, f64)>;

fn place_target(cfg: &SceneConfig, rng: &mut ChaCha8Rng, jitter: &Normal<f64>) -> Result<Detections, String> {
    let (w, h) = (cfg.width, cfg.height);
    let x0 = rng.random_range(0.0..w);
    let y0 = rng.random_range(0.0..h);
    let speed = if cfg.speed_range.0 < cfg.speed_range.1 {
        rng.random_range(cfg.speed_range.0..=cfg.speed_range.1)
    } else {
        cfg.speed_range.0
    };
    let heading = rng.random_range(0.0..std::f64::consts::TAU);
    let (vx, vy) = (speed * heading.cos(), speed * heading.sin());

    let mut dets = Vec::new();
    for f in 1..=cfg.frames {
        let k = f64::from(f - 1);
        let (x, y) = (x0 + vx * k, y0 + vy * k);
        let dropped = cfg.dropout_prob > 0.0 && rng.random_bool(cfg.dropout_prob);
        let (jx, jy) = (jitter.sample(rng), jitter.sample(rng));
        if !(0.0..=w).contains(&x) || !(0.0..=h).contains(&y) {
            return Err("trajectory leaves the image".into());
        }
        if !dropped {
            dets.push((f, x + jx, y + jy));
        }
    }
    if dets.len() < 3 {
        return Err(format!("only {} detections survived dropout", dets.len()));
    }
    let probe: Vec<TimedPoint> = dets.iter().map(|&(t, x, y)| TimedPoint { id: 0, x, y, t }).collect();
    let tol = cfg.gt_tolerance();
    if !is_feasible(&probe, tol, tol).feasible() {
        return Err("jittered track exceeds the 3-sigma tolerance".into());
    }
    Ok(dets)
}

fn clutter_frame(cfg: &SceneConfig, rng: &mut ChaCha8Rng, jitter: &Normal<f64>, frame: u32, out: &mut Vec<(u32, f64, f64, Option<usize>)>) {
    let n = cfg.clutter_in_frame(frame);
    match cfg.clutter_mode {
        ClutterMode::Uniform => {
            for _ in 0..n {
                out.push((frame, rng.random_range(0.0..cfg.width), rng.random_range(0.0..cfg.height), None));
            }
        }
        ClutterMode::StreakResidue { segment_length, points_per_segment } => {
            let mut left = n;
            while left > 0 {
                let cx = rng.random_range(0.0..cfg.width);
                let cy = rng.random_range(0.0..cfg.height);
                let a = rng.random_range(0.0..std::f64::consts::PI);
                let (dx, dy) = (a.cos(), a.sin());
                for _ in 0..points_per_segment.min(left) {
                    let s = rng.random_range(-0.5..=0.5) * segment_length;
                    let x = (cx + s * dx + jitter.sample(rng)).clamp(0.0, cfg.width);
                    let y = (cy + s * dy + jitter.sample(rng)).clamp(0.0, cfg.height);
                    out.push((frame, x, y, None));
                }
                left = left.saturating_sub(points_per_segment);
            }
        }
    }
}

/// Generates a scene of constant-velocity targets plus clutter.
///
/// Targets that leave the image, lose too many detections to dropout, or
/// whose jittered detections are not feasible at `3 * jitter_sigma` (plus a
/// small slack) are redrawn. Ids run frame by frame, shuffled within each
/// frame so that target detections are not recognisable by position.
pub fn generate_scene(cfg: &SceneConfig) -> Result<GeneratedScene, SceneError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let jitter = Normal::new(0.0, cfg.jitter_sigma).map_err(|e| SceneError::InvalidConfig(e.to_string()))?;

    let mut targets: Vec<Detections> = Vec::with_capacity(cfg.targets);
    for target in 0..cfg.targets {
        let mut last = String::new();
        let mut placed = None;
        for _ in 0..MAX_TRIES {
            match place_target(cfg, &mut rng, &jitter) {
                Ok(d) => {
                    placed = Some(d);
                    break;
                }
                Err(reason) => last = reason,
            }
        }
        match placed {
            Some(d) => targets.push(d),
            None => return Err(SceneError::InfeasibleConfig { target, tries: MAX_TRIES, reason: last }),
        }
    }

    let mut rows: Vec<(u32, f64, f64, Option<usize>)> = Vec::new();
    let mut gt_ids: Vec<Vec<usize>> = vec![Vec::new(); targets.len()];
    for frame in 1..=cfg.frames {
        let mut batch: Vec<(u32, f64, f64, Option<usize>)> = Vec::new();
        for (k, dets) in targets.iter().enumerate() {
            batch.extend(dets.iter().filter(|d| d.0 == frame).map(|&(t, x, y)| (t, x, y, Some(k))));
        }
        clutter_frame(cfg, &mut rng, &jitter, frame, &mut batch);
        batch.shuffle(&mut rng);
        for row in batch {
            if let Some(k) = row.3 {
                gt_ids[k].push(rows.len());
            }
            rows.push(row);
        }
    }

    // Coincident detections would be merged on ingest and shift ids, so
    // nudge any exact repeat instead.
    let mut seen = std::collections::HashSet::new();
    for row in rows.iter_mut() {
        while !seen.insert((row.0, row.1.to_bits(), row.2.to_bits())) {
            row.1 = f64::from_bits(row.1.to_bits() + 1);
        }
    }

    let points = PointSet::from_rows(rows.iter().map(|r| (r.0, r.1, r.2)))
        .map_err(|e| SceneError::InvalidConfig(e.to_string()))?;
    let tol = cfg.gt_tolerance();
    let tracks = gt_ids.iter().map(|ids| Track::fit(points.points(), ids, false)).collect();
    Ok(GeneratedScene {
        points,
        gt: TrackSet { tracks, params: TrackParams { eps1: tol, eps2: tol, min_frames: 3 } },
        config: cfg.clone(),
    })
}
