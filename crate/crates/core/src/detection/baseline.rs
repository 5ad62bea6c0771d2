use std::collections::HashSet;

use super::naive::{naive_subsets, subset_count_estimate};
use super::{hough_lines, ransac_lines, two_tier, DetectError, DetectorConfig, Method, Track, TrackSet};
use crate::arrangement::SweepKind;
use crate::geometry::{AxisPair, Point2, PointSet, TimedPoint};

/// Structures whose one-per-frame subset count stays below this are solved by
/// exhaustive enumeration; larger ones go through the two-tier sweep.
const EXHAUSTIVE_BELOW: f64 = 5e4;

/// Line-finder pipeline: RANSAC or Hough proposes structures in x-y, then
/// each structure is solved exactly for tracks. Unlike the sweep, the line
/// finder may split or miss structures, so recall depends on its tuning.
pub fn baseline_detect(ps: &PointSet, cfg: &DetectorConfig) -> Result<TrackSet, DetectError> {
    if !matches!(cfg.method, Method::Ransac | Method::Hough) {
        return Err(DetectError::InvalidConfig(format!("baseline needs ransac or hough, got {}", cfg.method)));
    }
    cfg.validate()?;
    if ps.is_empty() {
        return Ok(TrackSet::empty(cfg));
    }
    let mut out = TrackSet::empty(cfg);
    out.tracks = baseline_tracks(ps.points(), cfg, false)?;
    out.canonicalize();
    Ok(out)
}

pub(crate) fn baseline_tracks(points: &[TimedPoint], cfg: &DetectorConfig, axis_swapped: bool) -> Result<Vec<Track>, DetectError> {
    let xy: Vec<Point2> = points.iter().map(|p| p.project(AxisPair::XY)).collect();
    let structures = match cfg.method {
        Method::Ransac => {
            let r = &cfg.ransac;
            ransac_lines(&xy, r.inlier_eps, r.iterations, r.min_inliers, r.seed)
        }
        Method::Hough => {
            let h = &cfg.hough;
            hough_lines(&xy, h.rho_bins, h.theta_bins, h.peak_count, h.inlier_eps)
        }
        other => unreachable!("baseline called with {other}"),
    };

    let mut seen = HashSet::new();
    let mut tracks = Vec::new();
    for s in structures {
        let members: Vec<TimedPoint> = s.iter().map(|&i| points[i]).collect();
        let mut frames: Vec<u32> = members.iter().map(|p| p.t).collect();
        frames.sort_unstable();
        frames.dedup();
        if frames.len() < cfg.min_frames {
            continue;
        }
        let found = if subset_count_estimate(&members) <= EXHAUSTIVE_BELOW {
            let subsets: Vec<Vec<usize>> = naive_subsets(&members, cfg.eps1, cfg.eps2)?
                .into_iter()
                .filter(|ids| ids.len() >= cfg.min_frames)
                .map(|local| local.into_iter().map(|i| members[i].id).collect())
                .collect();
            maximal(subsets).into_iter().map(|ids| Track::fit(points, &ids, axis_swapped)).collect()
        } else {
            two_tier(points, &members, SweepKind::Topological, cfg, axis_swapped)?
        };
        for t in found {
            if seen.insert(t.key()) {
                tracks.push(t);
            }
        }
    }
    Ok(tracks)
}

/// Keeps the sets not strictly contained in another.
fn maximal(mut sets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    sets.iter_mut().for_each(|s| s.sort_unstable());
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| s.iter().all(|x| k.binary_search(x).is_ok())) {
            kept.push(s);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_drops_subsets() {
        let kept = maximal(vec![vec![1, 2, 3], vec![1, 2, 3, 4], vec![5, 6, 7], vec![2, 4, 1]]);
        assert_eq!(kept, vec![vec![1, 2, 3, 4], vec![5, 6, 7]]);
    }

    #[test]
    fn rejects_sweep_methods() {
        let ps = PointSet::from_rows([(1, 0.0, 0.0)]).unwrap();
        assert!(baseline_detect(&ps, &DetectorConfig::default()).is_err());
    }

    #[test]
    fn ransac_recovers_clean_track() {
        let ps = PointSet::from_rows((1..=6).map(|t| (t, 10.0 + 4.0 * f64::from(t), 20.0 - 2.0 * f64::from(t)))).unwrap();
        let cfg = DetectorConfig { method: Method::Ransac, ..Default::default() };
        let out = baseline_detect(&ps, &cfg).unwrap();
        assert_eq!(out.keys(), vec![(0..6).collect::<Vec<_>>()]);
    }

    #[test]
    fn empty_input_is_empty() {
        let ps = PointSet::default();
        let cfg = DetectorConfig { method: Method::Hough, ..Default::default() };
        assert!(baseline_detect(&ps, &cfg).unwrap().tracks.is_empty());
    }
}
