use std::collections::BTreeMap;

use super::{DetectError, Track, TrackParams, TrackSet};
use crate::geometry::{minimax_residual, AxisPair, PointSet, TimedPoint, RESIDUAL_TOL};

/// Largest subset-count estimate the exhaustive enumerator accepts.
pub const NAIVE_LIMIT: f64 = 1e7;

/// Number of one-per-frame subsets (including the empty one): the product of
/// `1 + n_t` over frames.
pub fn subset_count_estimate(points: &[TimedPoint]) -> f64 {
    let mut per_frame: BTreeMap<u32, usize> = BTreeMap::new();
    for p in points {
        *per_frame.entry(p.t).or_default() += 1;
    }
    per_frame.values().map(|&n| (n + 1) as f64).product()
}

/// Exhaustive reference: every subset with at most one point per frame and at
/// least three points that passes both line conditions.
pub fn naive_enumerate(ps: &PointSet, eps1: f64, eps2: f64) -> Result<TrackSet, DetectError> {
    let mut tracks = naive_tracks(ps.points(), eps1, eps2, false)?;
    tracks.sort_by(|a, b| a.point_ids.cmp(&b.point_ids));
    Ok(TrackSet { tracks, params: TrackParams { eps1, eps2, min_frames: 3 } })
}

pub(crate) fn naive_tracks(
    points: &[TimedPoint],
    eps1: f64,
    eps2: f64,
    axis_swapped: bool,
) -> Result<Vec<Track>, DetectError> {
    Ok(naive_subsets(points, eps1, eps2)?
        .into_iter()
        .map(|ids| Track::fit(points, &ids, axis_swapped))
        .collect())
}

/// Indices into `points` of every feasible subset of size >= 3.
pub(crate) fn naive_subsets(points: &[TimedPoint], eps1: f64, eps2: f64) -> Result<Vec<Vec<usize>>, DetectError> {
    let estimate = subset_count_estimate(points);
    if estimate > NAIVE_LIMIT {
        return Err(DetectError::TooLarge { estimate, limit: NAIVE_LIMIT });
    }
    let mut frames: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        frames.entry(p.t).or_default().push(i);
    }
    let groups: Vec<Vec<usize>> = frames.into_values().collect();
    let mut out = Vec::new();
    let mut current: Vec<TimedPoint> = Vec::new();
    let mut current_idx: Vec<usize> = Vec::new();
    walk(points, &groups, 0, eps1, eps2, &mut current, &mut current_idx, &mut out);
    Ok(out)
}

/// Depth-first over frames: skip the frame or take one of its points.
/// Feasibility is inherited by subsets, so an infeasible prefix ends the
/// branch without losing anything.
#[allow(clippy::too_many_arguments)]
fn walk(
    points: &[TimedPoint],
    groups: &[Vec<usize>],
    frame: usize,
    eps1: f64,
    eps2: f64,
    current: &mut Vec<TimedPoint>,
    current_idx: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if frame == groups.len() {
        if current.len() >= 3 {
            let mut ids = current_idx.clone();
            ids.sort_unstable();
            out.push(ids);
        }
        return;
    }
    walk(points, groups, frame + 1, eps1, eps2, current, current_idx, out);
    for &i in &groups[frame] {
        current.push(points[i]);
        current_idx.push(i);
        let ok = current.len() < 3
            || (minimax_residual(current, AxisPair::XY) <= eps1 + RESIDUAL_TOL
                && minimax_residual(current, AxisPair::TX) <= eps2 + RESIDUAL_TOL);
        if ok {
            walk(points, groups, frame + 1, eps1, eps2, current, current_idx, out);
        }
        current.pop();
        current_idx.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_feasible;

    #[test]
    fn collinear_triple_plus_outlier() {
        let ps = PointSet::from_rows([(1, 0.0, 0.0), (2, 1.0, 1.0), (3, 2.0, 2.0), (2, 1.0, 40.0)]).unwrap();
        let out = naive_enumerate(&ps, 0.5, 0.5).unwrap();
        assert_eq!(out.keys(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn single_frame_is_empty() {
        let ps = PointSet::from_rows((0..10).map(|i| (1, f64::from(i), 0.0))).unwrap();
        assert!(naive_enumerate(&ps, 5.0, 5.0).unwrap().tracks.is_empty());
    }

    #[test]
    fn refuses_large_inputs() {
        let ps = PointSet::from_rows((0..200).map(|i| (i % 10 + 1, f64::from(i), 0.0))).unwrap();
        assert!(matches!(naive_enumerate(&ps, 1.0, 1.0), Err(DetectError::TooLarge { .. })));
    }

    #[test]
    fn enumerates_all_feasible_subsets() {
        // Four collinear, evenly paced points: every subset of size >= 3.
        let ps = PointSet::from_rows((1..=4).map(|t| (t, f64::from(t), 2.0 * f64::from(t)))).unwrap();
        let out = naive_enumerate(&ps, 0.1, 0.1).unwrap();
        assert_eq!(out.tracks.len(), 5);
        for t in &out.tracks {
            assert!(is_feasible(&ps.select(&t.point_ids), 0.1, 0.1).feasible());
        }
    }
}
