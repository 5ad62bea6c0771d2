//! Primal/dual point-line mappings, vertical residuals, minimax (Chebyshev)
//! line fitting and the track feasibility predicate.
//!
//! Lines are stored in slope/intercept form `q = m p + c`. A point `(x, y)`
//! maps to the dual line with slope `x` and intercept `y`; a line `(m, c)`
//! maps to the dual point `(-m, c)`. Both maps are exact involutions on
//! finite inputs, and vertical point-to-line distances survive the mapping
//! with the above/below relationship flipped.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack applied when comparing a residual against a threshold.
///
/// Residuals computed from pixel-scale coordinates carry rounding noise on
/// the order of 1e-13; anything within this slack of the threshold counts as
/// inside.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("at least two points are required, got {0}")]
    TooFewPoints(usize),
    #[error("all points share abscissa {0}; fit the swapped axes instead")]
    DegenerateAbscissa(f64),
    #[error("lines are parallel")]
    Parallel,
    #[error("invalid point at row {index}: {reason}")]
    InvalidPoint { index: usize, reason: String },
}

/// A plane point in whatever coordinate pair is in use (abscissa, ordinate).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Slope/intercept line `ordinate = m * abscissa + c`.
///
/// Vertical lines cannot be represented; near-vertical tracks are handled by
/// running detection a second time on x/y-swapped data.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Line2 {
    pub m: f64,
    pub c: f64,
}

impl Line2 {
    pub const fn new(m: f64, c: f64) -> Self {
        Self { m, c }
    }

    pub fn eval(&self, abscissa: f64) -> f64 {
        self.m * abscissa + self.c
    }

    pub fn is_finite(&self) -> bool {
        self.m.is_finite() && self.c.is_finite()
    }
}

/// One detection: frame index plus pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedPoint {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub t: u32,
}

impl TimedPoint {
    /// Projects the point onto the requested coordinate pair.
    pub fn project(&self, axes: AxisPair) -> Point2 {
        match axes {
            AxisPair::XY => Point2::new(self.x, self.y),
            AxisPair::TX => Point2::new(f64::from(self.t), self.x),
        }
    }

    pub fn xy(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

/// Which coordinates play abscissa and ordinate.
///
/// `XY` is the spatial pair checked against `eps1`; `TX` is the time/x pair
/// checked against `eps2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxisPair {
    XY,
    TX,
}

/// An ordered set of detections with dense ids `0..N`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSet {
    points: Vec<TimedPoint>,
    frame_count: u32,
}

impl PointSet {
    /// Builds a point set from `(frame, x, y)` rows, assigning ids in row
    /// order. Exact duplicates of an earlier row are dropped with a warning.
    pub fn from_rows<I>(rows: I) -> Result<Self, GeometryError>
    where
        I: IntoIterator<Item = (u32, f64, f64)>,
    {
        let mut seen = std::collections::HashSet::new();
        let mut points = Vec::new();
        for (row, (t, x, y)) in rows.into_iter().enumerate() {
            if t < 1 {
                return Err(GeometryError::InvalidPoint {
                    index: row,
                    reason: format!("frame index must be >= 1, got {t}"),
                });
            }
            if !x.is_finite() || !y.is_finite() {
                return Err(GeometryError::InvalidPoint {
                    index: row,
                    reason: "coordinates must be finite".into(),
                });
            }
            // -0.0 and 0.0 are the same location.
            let key = (t, (x + 0.0).to_bits(), (y + 0.0).to_bits());
            if !seen.insert(key) {
                log::warn!("dropping duplicate detection at row {row}: t={t} x={x} y={y}");
                continue;
            }
            points.push(TimedPoint { id: points.len(), x, y, t });
        }
        let frame_count = points.iter().map(|p| p.t).max().unwrap_or(0);
        Ok(Self { points, frame_count })
    }

    pub fn points(&self) -> &[TimedPoint] {
        &self.points
    }

    pub fn get(&self, id: usize) -> Option<&TimedPoint> {
        self.points.get(id)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn frame_count(&self) -> u32 {
        self.frame_count
    }

    /// Copy with x and y exchanged, ids preserved.
    pub fn swapped_xy(&self) -> PointSet {
        PointSet {
            points: self
                .points
                .iter()
                .map(|p| TimedPoint { id: p.id, x: p.y, y: p.x, t: p.t })
                .collect(),
            frame_count: self.frame_count,
        }
    }

    /// Looks up several ids at once, in the given order.
    pub fn select(&self, ids: &[usize]) -> Vec<TimedPoint> {
        ids.iter().map(|&i| self.points[i]).collect()
    }
}

/// Maps a point to its dual line `q = x p + y`.
pub fn point_to_dual_line(d: Point2) -> Line2 {
    Line2::new(d.x, d.y)
}

/// Inverse of [`point_to_dual_line`].
pub fn dual_line_to_point(l: Line2) -> Point2 {
    Point2::new(l.m, l.c)
}

/// Maps a line `(m, c)` to its dual point `(-m, c)`.
pub fn line_to_dual_point(l: Line2) -> Point2 {
    Point2::new(-l.m, l.c)
}

/// Inverse of [`line_to_dual_point`].
pub fn dual_point_to_line(delta: Point2) -> Line2 {
    Line2::new(-delta.x, delta.y)
}

/// Intersection of two non-parallel lines.
pub fn intersect_lines(a: Line2, b: Line2) -> Result<Point2, GeometryError> {
    if a.m == b.m {
        return Err(GeometryError::Parallel);
    }
    let x = (b.c - a.c) / (a.m - b.m);
    // Evaluate on the line with the smaller |slope| to limit error growth.
    let y = if a.m.abs() <= b.m.abs() { a.eval(x) } else { b.eval(x) };
    Ok(Point2::new(x, y))
}

/// The line through two points with distinct abscissae.
pub fn line_through(p: Point2, q: Point2) -> Result<Line2, GeometryError> {
    // Dual lines of p and q meet at the dual point of the line through both.
    let delta = intersect_lines(point_to_dual_line(p), point_to_dual_line(q))?;
    Ok(dual_point_to_line(delta))
}

/// `ordinate - (m * abscissa + c)`: the signed vertical residual.
pub fn signed_residual(d: Point2, l: Line2) -> f64 {
    d.y - l.eval(d.x)
}

/// Result of a minimax line fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub line: Line2,
    pub max_abs_residual: f64,
    /// Indices (into the fitted slice) of up to three points attaining the
    /// maximum residual.
    pub support: Vec<usize>,
}

/// Fits the line minimising the maximum vertical residual.
///
/// The width `max(y - m x) - min(y - m x)` is convex and piecewise linear in
/// `m` with breakpoints at slopes of point pairs; its minimum sits at the
/// slope of an edge of the convex hull, so only hull edges are tried. The
/// optimal line is the midline of the narrowest vertical strip.
pub fn chebyshev_fit(points: &[Point2]) -> Result<FitResult, GeometryError> {
    if points.len() < 2 {
        return Err(GeometryError::TooFewPoints(points.len()));
    }
    let x0 = points[0].x;
    if points.iter().all(|p| p.x == x0) {
        return Err(GeometryError::DegenerateAbscissa(x0));
    }

    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a]
            .x
            .total_cmp(&points[b].x)
            .then(points[a].y.total_cmp(&points[b].y))
    });

    let mut best: Option<(f64, f64)> = None; // (width, slope)
    for slope in hull_edge_slopes(points, &idx) {
        let w = strip_width(points, slope);
        if best.is_none_or(|(bw, _)| w < bw) {
            best = Some((w, slope));
        }
    }
    let (_, m) = best.expect("non-degenerate input has at least one hull edge");

    let (lo, hi) = offsets_range(points, m);
    let line = Line2::new(m, 0.5 * (lo + hi));
    let residuals: Vec<f64> = points.iter().map(|p| signed_residual(*p, line).abs()).collect();
    let max_abs_residual = residuals.iter().copied().fold(0.0, f64::max);
    let slack = 1e-12 * max_abs_residual.max(1.0);
    let support = residuals
        .iter()
        .enumerate()
        .filter(|(_, r)| **r >= max_abs_residual - slack)
        .map(|(i, _)| i)
        .take(3)
        .collect();

    Ok(FitResult { line, max_abs_residual, support })
}

/// Minimax fit that tolerates a shared abscissa: such data is fit by the flat
/// line through the midpoint of the ordinate range, which attains the optimum
/// `(max - min) / 2` among all non-vertical lines. Single points fit exactly.
pub fn minimax_fit(points: &[Point2]) -> FitResult {
    match points.len() {
        0 => FitResult { line: Line2::default(), max_abs_residual: 0.0, support: vec![] },
        1 => FitResult { line: Line2::new(0.0, points[0].y), max_abs_residual: 0.0, support: vec![0] },
        _ => match chebyshev_fit(points) {
            Ok(fit) => fit,
            Err(_) => {
                let (lo, hi) = points
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.y), hi.max(p.y)));
                let line = Line2::new(0.0, 0.5 * (lo + hi));
                let max_abs_residual = 0.5 * (hi - lo);
                let support = points
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.y == lo || p.y == hi)
                    .map(|(i, _)| i)
                    .take(3)
                    .collect();
                FitResult { line, max_abs_residual, support }
            }
        },
    }
}

fn offsets_range(points: &[Point2], m: f64) -> (f64, f64) {
    points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let r = p.y - m * p.x;
        (lo.min(r), hi.max(r))
    })
}

fn strip_width(points: &[Point2], m: f64) -> f64 {
    let (lo, hi) = offsets_range(points, m);
    hi - lo
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Slopes of the non-vertical edges of the convex hull (monotone chain).
fn hull_edge_slopes(points: &[Point2], sorted: &[usize]) -> Vec<f64> {
    let mut lower: Vec<Point2> = Vec::new();
    for &i in sorted {
        let p = points[i];
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &i in sorted.iter().rev() {
        let p = points[i];
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower
        .windows(2)
        .chain(upper.windows(2))
        .filter(|w| w[0].x != w[1].x)
        .map(|w| (w[1].y - w[0].y) / (w[1].x - w[0].x))
        .collect()
}

/// Per-condition outcome of the feasibility test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    /// All frame indices distinct.
    pub c1: bool,
    /// Points within `eps1` (vertically) of some line in x-y.
    pub c2: bool,
    /// Points within `eps2` of some line in t-x.
    pub c3: bool,
}

impl FeasibilityVerdict {
    pub fn feasible(&self) -> bool {
        self.c1 && self.c2 && self.c3
    }
}

/// Optimal minimax residual of a track projected onto `axes`.
pub fn minimax_residual(track: &[TimedPoint], axes: AxisPair) -> f64 {
    let pts: Vec<Point2> = track.iter().map(|p| p.project(axes)).collect();
    minimax_fit(&pts).max_abs_residual
}

/// Checks the three track conditions: distinct frames, `eps1`-collinearity in
/// x-y and `eps2`-linearity of x against t.
pub fn is_feasible(track: &[TimedPoint], eps1: f64, eps2: f64) -> FeasibilityVerdict {
    let mut frames: Vec<u32> = track.iter().map(|p| p.t).collect();
    frames.sort_unstable();
    let c1 = frames.windows(2).all(|w| w[0] != w[1]);
    let c2 = minimax_residual(track, AxisPair::XY) <= eps1 + RESIDUAL_TOL;
    let c3 = minimax_residual(track, AxisPair::TX) <= eps2 + RESIDUAL_TOL;
    FeasibilityVerdict { c1, c2, c3 }
}
