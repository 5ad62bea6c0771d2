use serde::{Deserialize, Serialize};

use crate::detection::TrackSet;
use crate::geometry::{Point2, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchConfig {
    /// Match radius in pixels.
    pub lambda: f64,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self { lambda: 3.0 }
    }
}

/// Two detections match when they are within `lambda` of each other.
pub fn point_match(a: Point2, b: Point2, cfg: &MatchConfig) -> bool {
    a.distance(&b) <= cfg.lambda
}

/// A detection matches a track when it matches any of the track's points.
pub fn track_match(d: Point2, track: &[Point2], cfg: &MatchConfig) -> bool {
    track.iter().any(|p| point_match(d, *p, cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Whole tracks.
    Track,
    /// Individual detections.
    Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSet {
    pub tp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub fp: usize,
    pub level: Level,
}

impl CountSet {
    pub fn new(level: Level) -> Self {
        Self { tp: 0, fn_: 0, fp: 0, level }
    }

    pub fn merge(&mut self, other: &CountSet) {
        self.tp += other.tp;
        self.fn_ += other.fn_;
        self.fp += other.fp;
    }
}

/// Recall, precision and F1 for one level. A ratio whose denominator is zero
/// is reported as 0 with its `*_undefined` flag set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelScore {
    pub counts: CountSet,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
    pub recall_undefined: bool,
    pub precision_undefined: bool,
}

impl LevelScore {
    pub fn from_counts(counts: CountSet) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { (0.0, true) } else { (num as f64 / den as f64, false) };
        let (recall, recall_undefined) = ratio(counts.tp, counts.tp + counts.fn_);
        let (precision, precision_undefined) = ratio(counts.tp, counts.tp + counts.fp);
        let f1 = if recall + precision > 0.0 { 2.0 * recall * precision / (recall + precision) } else { 0.0 };
        Self { counts, recall, precision, f1, recall_undefined, precision_undefined }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub track: LevelScore,
    pub point: LevelScore,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_seconds: Option<f64>,
}

impl MetricsReport {
    pub fn from_counts(track: CountSet, point: CountSet) -> Self {
        Self { track: LevelScore::from_counts(track), point: LevelScore::from_counts(point), runtime_seconds: None }
    }
}

/// Track- and point-level counts for one sequence.
///
/// Matching is many-to-many: a ground-truth track counts as found when any of
/// its points matches any predicted track, and a predicted track is a false
/// positive only when none of its points matches any ground-truth point.
pub fn count(gt: &[Vec<Point2>], pred: &[Vec<Point2>], cfg: &MatchConfig) -> (CountSet, CountSet) {
    let mut tau = CountSet::new(Level::Track);
    let mut d = CountSet::new(Level::Point);

    for g in gt {
        let hits = g.iter().filter(|p| pred.iter().any(|t| track_match(**p, t, cfg))).count();
        d.tp += hits;
        d.fn_ += g.len() - hits;
        if hits > 0 {
            tau.tp += 1;
        } else {
            tau.fn_ += 1;
        }
    }
    for t in pred {
        let misses = t.iter().filter(|p| !gt.iter().any(|g| track_match(**p, g, cfg))).count();
        d.fp += misses;
        if misses == t.len() {
            tau.fp += 1;
        }
    }
    (tau, d)
}

pub fn score_tracks(gt: &[Vec<Point2>], pred: &[Vec<Point2>], cfg: &MatchConfig) -> MetricsReport {
    let (tau, d) = count(gt, pred, cfg);
    MetricsReport::from_counts(tau, d)
}

/// Resolves each track's ids to x-y coordinates.
pub fn track_points(points: &PointSet, tracks: &TrackSet) -> Vec<Vec<Point2>> {
    tracks
        .tracks
        .iter()
        .map(|t| t.point_ids.iter().filter_map(|&i| points.get(i)).map(|p| p.xy()).collect())
        .collect()
}

/// Scores predicted tracks against ground truth over the same points.
pub fn score(points: &PointSet, gt: &TrackSet, pred: &TrackSet, cfg: &MatchConfig) -> MetricsReport {
    score_tracks(&track_points(points, gt), &track_points(points, pred), cfg)
}

/// Sums counts over several sequences before forming ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsAccumulator {
    pub track: CountSet,
    pub point: CountSet,
}

impl Default for MetricsAccumulator {
    fn default() -> Self {
        Self { track: CountSet::new(Level::Track), point: CountSet::new(Level::Point) }
    }
}

impl MetricsAccumulator {
    pub fn add(&mut self, gt: &[Vec<Point2>], pred: &[Vec<Point2>], cfg: &MatchConfig) {
        let (tau, d) = count(gt, pred, cfg);
        self.track.merge(&tau);
        self.point.merge(&d);
    }

    pub fn report(&self) -> MetricsReport {
        MetricsReport::from_counts(self.track, self.point)
    }
}
