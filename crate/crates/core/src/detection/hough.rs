use serde::{Deserialize, Serialize};

use crate::geometry::Point2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoughConfig {
    pub rho_bins: usize,
    pub theta_bins: usize,
    pub peak_count: usize,
    /// Perpendicular inlier distance in pixels.
    pub inlier_eps: f64,
}

impl Default for HoughConfig {
    fn default() -> Self {
        Self { rho_bins: 512, theta_bins: 180, peak_count: 10, inlier_eps: 2.0 }
    }
}

impl HoughConfig {
    pub(crate) fn validate(&self) -> Result<(), String> {
        if self.rho_bins < 2 || self.theta_bins < 2 {
            return Err("hough accumulator needs at least 2 bins per axis".into());
        }
        if self.peak_count == 0 {
            return Err("hough peak_count must be at least 1".into());
        }
        if !(self.inlier_eps.is_finite() && self.inlier_eps > 0.0) {
            return Err(format!("hough inlier_eps must be positive, got {}", self.inlier_eps));
        }
        Ok(())
    }
}

/// Peaks need this many votes; fewer cannot make a track.
const MIN_VOTES: u32 = 3;
/// Half-width, in bins, of the neighbourhood a chosen peak suppresses.
const SUPPRESS: usize = 2;

/// Standard rho-theta Hough transform.
///
/// Angles cover `[0, pi)`; rho is measured from the bounding-box centre and
/// spans the box's half-diagonal. Up to `peak_count` accumulator maxima are
/// taken in vote order (ties by bin index), each suppressing nearby bins, and
/// each returns the points within `inlier_eps` perpendicular distance of the
/// bin-centre line. Returns index sets into `pts`.
pub fn hough_lines(pts: &[Point2], rho_bins: usize, theta_bins: usize, peak_count: usize, inlier_eps: f64) -> Vec<Vec<usize>> {
    if pts.is_empty() || rho_bins < 2 || theta_bins < 2 {
        return Vec::new();
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let r = (0.5 * (x1 - x0)).hypot(0.5 * (y1 - y0)).max(1.0);
    let rho_step = 2.0 * r / rho_bins as f64;
    let angles: Vec<(f64, f64)> = (0..theta_bins)
        .map(|k| {
            let th = std::f64::consts::PI * (k as f64 + 0.5) / theta_bins as f64;
            (th.cos(), th.sin())
        })
        .collect();

    let mut acc = vec![0u32; rho_bins * theta_bins];
    for p in pts {
        let (dx, dy) = (p.x - cx, p.y - cy);
        for (k, (c, s)) in angles.iter().enumerate() {
            let rho = dx * c + dy * s;
            let bin = (((rho + r) / rho_step) as usize).min(rho_bins - 1);
            acc[k * rho_bins + bin] += 1;
        }
    }

    let mut cells: Vec<usize> = (0..acc.len()).filter(|&i| acc[i] >= MIN_VOTES).collect();
    cells.sort_by(|&a, &b| acc[b].cmp(&acc[a]).then(a.cmp(&b)));
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for cell in cells {
        if chosen.len() == peak_count {
            break;
        }
        let (k, b) = (cell / rho_bins, cell % rho_bins);
        if chosen.iter().any(|&(ck, cb)| ck.abs_diff(k) <= SUPPRESS && cb.abs_diff(b) <= SUPPRESS) {
            continue;
        }
        chosen.push((k, b));
    }

    chosen
        .into_iter()
        .filter_map(|(k, b)| {
            let (c, s) = angles[k];
            let rho = -r + (b as f64 + 0.5) * rho_step;
            let inliers: Vec<usize> = (0..pts.len())
                .filter(|&i| ((pts[i].x - cx) * c + (pts[i].y - cy) * s - rho).abs() <= inlier_eps)
                .collect();
            (!inliers.is_empty()).then_some(inliers)
        })
        .collect()
}
