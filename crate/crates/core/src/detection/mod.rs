//! Two-tier track detection, the exhaustive oracle, line-finder baselines
//! and final track selection.
//!
//! Tier 1 finds every subset of detections that one line stabs in x-y.
//! Tier 2 re-runs the sweep inside each such subset over t-x, so that the
//! survivors are also uniformly paced in time. The same pipeline can be run a
//! second time on x/y-swapped input to pick up near-vertical tracks.

mod baseline;
mod hough;
mod naive;
mod ransac;
mod select;

pub use baseline::baseline_detect;
pub use hough::{hough_lines, HoughConfig};
pub use naive::{naive_enumerate, subset_count_estimate, NAIVE_LIMIT};
pub use ransac::{ransac_lines, RansacConfig};
pub use select::{select_tracks, Selection};

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{sweep, SweepError, SweepKind};
use crate::geometry::{minimax_fit, AxisPair, Line2, Point2, PointSet, TimedPoint, RESIDUAL_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetectError {
    #[error("no points to process")]
    EmptyInput,
    #[error("invalid detector configuration: {0}")]
    InvalidConfig(String),
    #[error("exhaustive enumeration would visit about {estimate:.3e} subsets (limit {limit:.0e})")]
    TooLarge { estimate: f64, limit: f64 },
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

/// Structure finder used for tier 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Topological sweep.
    Ts,
    /// Plane sweep with an event queue.
    Ps,
    Ransac,
    Hough,
    /// Exhaustive subset enumeration.
    Naive,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ts" => Ok(Method::Ts),
            "ps" => Ok(Method::Ps),
            "ransac" => Ok(Method::Ransac),
            "hough" => Ok(Method::Hough),
            "naive" => Ok(Method::Naive),
            other => Err(format!("unknown method `{other}` (expected ts, ps, ransac, hough or naive)")),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Ts => "ts",
            Method::Ps => "ps",
            Method::Ransac => "ransac",
            Method::Hough => "hough",
            Method::Naive => "naive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// x-y tolerance in pixels.
    pub eps1: f64,
    /// t-x tolerance in pixels.
    pub eps2: f64,
    pub min_frames: usize,
    pub method: Method,
    pub selection: Selection,
    /// Also run the x/y-swapped pass.
    pub vertical: bool,
    /// Worker threads for tier 2; 0 runs it on the calling thread.
    pub threads: usize,
    pub ransac: RansacConfig,
    pub hough: HoughConfig,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            eps1: 2.0,
            eps2: 2.0,
            min_frames: 3,
            method: Method::Ts,
            selection: Selection::All,
            vertical: true,
            threads: 0,
            ransac: RansacConfig::default(),
            hough: HoughConfig::default(),
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), DetectError> {
        let bad = |m: String| Err(DetectError::InvalidConfig(m));
        for (name, v) in [("eps1", self.eps1), ("eps2", self.eps2)] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if self.min_frames < 3 {
            return bad(format!("min_frames must be at least 3, got {}", self.min_frames));
        }
        match self.selection {
            Selection::TopK(0) => return bad("TopK needs K >= 1".into()),
            Selection::Threshold(tr) if tr < 3 => return bad(format!("threshold must be at least 3, got {tr}")),
            _ => {}
        }
        self.ransac.validate().map_err(DetectError::InvalidConfig)?;
        self.hough.validate().map_err(DetectError::InvalidConfig)?;
        Ok(())
    }
}

/// A feasible track with both of its minimax fits.
///
/// When `axis_swapped` is set the track came from the x/y-swapped pass and
/// both lines are expressed in swapped coordinates: `line_xy` gives x as a
/// function of y and `line_tx` gives y as a function of t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Track {
    /// Member ids ordered by frame.
    pub point_ids: Vec<usize>,
    pub line_xy: Line2,
    pub line_tx: Line2,
    pub residual_xy: f64,
    pub residual_tx: f64,
    #[serde(default)]
    pub axis_swapped: bool,
}

impl Track {
    /// Fits both lines for the given members of `points` (looked up by id).
    pub fn fit(points: &[TimedPoint], ids: &[usize], axis_swapped: bool) -> Track {
        let mut members: Vec<TimedPoint> = ids.iter().map(|&i| points[i]).collect();
        members.sort_by_key(|p| (p.t, p.id));
        let xy: Vec<Point2> = members.iter().map(|p| p.project(AxisPair::XY)).collect();
        let tx: Vec<Point2> = members.iter().map(|p| p.project(AxisPair::TX)).collect();
        let fxy = minimax_fit(&xy);
        let ftx = minimax_fit(&tx);
        Track {
            point_ids: members.iter().map(|p| p.id).collect(),
            line_xy: fxy.line,
            line_tx: ftx.line,
            residual_xy: fxy.max_abs_residual,
            residual_tx: ftx.max_abs_residual,
            axis_swapped,
        }
    }

    pub fn len(&self) -> usize {
        self.point_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.point_ids.is_empty()
    }

    /// Ids in ascending order, the identity used for deduplication.
    pub fn key(&self) -> Vec<usize> {
        let mut k = self.point_ids.clone();
        k.sort_unstable();
        k
    }

    fn within(&self, eps1: f64, eps2: f64) -> bool {
        self.residual_xy <= eps1 + RESIDUAL_TOL && self.residual_tx <= eps2 + RESIDUAL_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackParams {
    pub eps1: f64,
    pub eps2: f64,
    pub min_frames: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackSet {
    pub tracks: Vec<Track>,
    pub params: TrackParams,
}

impl TrackSet {
    pub fn empty(cfg: &DetectorConfig) -> Self {
        Self {
            tracks: Vec::new(),
            params: TrackParams { eps1: cfg.eps1, eps2: cfg.eps2, min_frames: cfg.min_frames },
        }
    }

    /// Sorted, deduplicated key list, handy for set comparisons.
    pub fn keys(&self) -> Vec<Vec<usize>> {
        let mut k: Vec<Vec<usize>> = self.tracks.iter().map(Track::key).collect();
        k.sort();
        k.dedup();
        k
    }

    /// Drops repeated point sets (first occurrence wins) and sorts.
    pub(crate) fn canonicalize(&mut self) {
        let mut seen = HashSet::new();
        self.tracks.retain(|t| seen.insert(t.key()));
        self.tracks.sort_by(|a, b| a.point_ids.cmp(&b.point_ids).then(a.axis_swapped.cmp(&b.axis_swapped)));
    }
}

/// All ways to keep one member per frame. Members of a t-x structure that
/// share a frame cannot both be in a track, and every combination inherits
/// the structure's stabbing lines.
pub(crate) fn one_per_frame(points: &[TimedPoint], ids: &[usize]) -> Vec<Vec<usize>> {
    let mut by_frame: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for &i in ids {
        by_frame.entry(points[i].t).or_default().push(i);
    }
    let mut out = vec![Vec::with_capacity(by_frame.len())];
    for group in by_frame.values() {
        if group.len() == 1 {
            out.iter_mut().for_each(|c| c.push(group[0]));
            continue;
        }
        out = out
            .into_iter()
            .flat_map(|c| {
                group.iter().map(move |&g| {
                    let mut next = c.clone();
                    next.push(g);
                    next
                })
            })
            .collect();
    }
    out
}

/// Two-tier sweep over `members`. Ids index into `points`.
pub(crate) fn two_tier(
    points: &[TimedPoint],
    members: &[TimedPoint],
    kind: SweepKind,
    cfg: &DetectorConfig,
    axis_swapped: bool,
) -> Result<Vec<Track>, DetectError> {
    if members.is_empty() {
        return Ok(Vec::new());
    }
    let tier1 = sweep(kind, members, AxisPair::XY, cfg.eps1, cfg.min_frames)?;
    let subsets: Vec<Vec<usize>> =
        tier1.into_iter().filter(|s| s.point_ids.len() > 2).map(|s| s.point_ids).collect();

    let tier2 = |ids: &Vec<usize>| -> Result<Vec<Vec<usize>>, SweepError> {
        let sub: Vec<TimedPoint> = ids.iter().map(|&i| points[i]).collect();
        let found = sweep(kind, &sub, AxisPair::TX, cfg.eps2, cfg.min_frames)?;
        Ok(found.into_iter().flat_map(|s| one_per_frame(points, &s.point_ids)).collect())
    };
    let nested: Vec<Vec<Vec<usize>>> = if cfg.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| DetectError::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(|| subsets.par_iter().map(tier2).collect::<Result<_, _>>())?
    } else {
        subsets.iter().map(tier2).collect::<Result<_, _>>()?
    };

    let mut seen = HashSet::new();
    let mut tracks = Vec::new();
    for mut ids in nested.into_iter().flatten() {
        ids.sort_unstable();
        if ids.len() < 3 || !seen.insert(ids.clone()) {
            continue;
        }
        let track = Track::fit(points, &ids, axis_swapped);
        if track.within(cfg.eps1, cfg.eps2) {
            tracks.push(track);
        } else {
            log::warn!("dropping infeasible candidate {:?}", track.point_ids);
        }
    }
    Ok(tracks)
}

fn check_input(ps: &PointSet, cfg: &DetectorConfig) -> Result<(), DetectError> {
    cfg.validate()?;
    if ps.is_empty() {
        return Err(DetectError::EmptyInput);
    }
    Ok(())
}

fn single_pass(points: &[TimedPoint], cfg: &DetectorConfig, axis_swapped: bool) -> Result<Vec<Track>, DetectError> {
    match cfg.method {
        Method::Ts => two_tier(points, points, SweepKind::Topological, cfg, axis_swapped),
        Method::Ps => two_tier(points, points, SweepKind::Plane, cfg, axis_swapped),
        Method::Ransac | Method::Hough => baseline::baseline_tracks(points, cfg, axis_swapped),
        Method::Naive => Ok(naive::naive_tracks(points, cfg.eps1, cfg.eps2, axis_swapped)?
            .into_iter()
            .filter(|t| t.len() >= cfg.min_frames)
            .collect()),
    }
}

/// Runs the configured finder once on the data as given.
pub fn find_all_tracks(ps: &PointSet, cfg: &DetectorConfig) -> Result<TrackSet, DetectError> {
    check_input(ps, cfg)?;
    let mut out = TrackSet::empty(cfg);
    out.tracks = single_pass(ps.points(), cfg, false)?;
    out.canonicalize();
    Ok(out)
}

/// Runs [`find_all_tracks`] on the input and on its x/y-swapped copy, and
/// merges the two. A track found by both passes is kept once, unswapped.
pub fn find_all_tracks_with_vertical(ps: &PointSet, cfg: &DetectorConfig) -> Result<TrackSet, DetectError> {
    check_input(ps, cfg)?;
    let mut out = TrackSet::empty(cfg);
    out.tracks = single_pass(ps.points(), cfg, false)?;
    let swapped = ps.swapped_xy();
    out.tracks.extend(single_pass(swapped.points(), cfg, true)?);
    out.canonicalize();
    Ok(out)
}

/// Full pipeline: detection (with the swapped pass when `cfg.vertical`),
/// then selection.
pub fn detect(ps: &PointSet, cfg: &DetectorConfig) -> Result<TrackSet, DetectError> {
    let all = if cfg.vertical { find_all_tracks_with_vertical(ps, cfg)? } else { find_all_tracks(ps, cfg)? };
    Ok(select_tracks(&all, cfg.selection))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(id: usize, t: u32, x: f64, y: f64) -> TimedPoint {
        TimedPoint { id, x, y, t }
    }

    #[test]
    fn one_per_frame_expands_shared_frames() {
        let pts = [tp(0, 1, 0.0, 0.0), tp(1, 1, 1.0, 0.0), tp(2, 2, 0.0, 0.0), tp(3, 3, 0.0, 0.0), tp(4, 3, 0.0, 1.0)];
        let mut combos = one_per_frame(&pts, &[0, 1, 2, 3, 4]);
        combos.iter_mut().for_each(|c| c.sort_unstable());
        combos.sort();
        assert_eq!(combos, vec![vec![0, 2, 3], vec![0, 2, 4], vec![1, 2, 3], vec![1, 2, 4]]);
    }

    #[test]
    fn config_validation() {
        assert!(DetectorConfig::default().validate().is_ok());
        let c = DetectorConfig { eps1: 0.0, ..Default::default() };
        assert!(c.validate().is_err());
        let c = DetectorConfig { min_frames: 2, ..Default::default() };
        assert!(c.validate().is_err());
        let c = DetectorConfig { selection: Selection::Threshold(2), ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Ts, Method::Ps, Method::Ransac, Method::Hough, Method::Naive] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("sweep".parse::<Method>().is_err());
    }
}
