use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{line_through, signed_residual, Point2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RansacConfig {
    pub iterations: usize,
    /// Vertical inlier distance in pixels.
    pub inlier_eps: f64,
    pub min_inliers: usize,
    pub seed: u64,
}

impl Default for RansacConfig {
    fn default() -> Self {
        Self { iterations: 1000, inlier_eps: 2.0, min_inliers: 3, seed: 0 }
    }
}

impl RansacConfig {
    pub(crate) fn validate(&self) -> Result<(), String> {
        if self.iterations == 0 {
            return Err("ransac iterations must be at least 1".into());
        }
        if !(self.inlier_eps.is_finite() && self.inlier_eps > 0.0) {
            return Err(format!("ransac inlier_eps must be positive, got {}", self.inlier_eps));
        }
        Ok(())
    }
}

/// Sequential two-point RANSAC. Each round keeps the model with the most
/// inliers (earliest wins ties), removes its inliers and starts over, until
/// no model reaches `min_inliers`. Returns index sets into `pts`.
pub fn ransac_lines(pts: &[Point2], inlier_eps: f64, iterations: usize, min_inliers: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining: Vec<usize> = (0..pts.len()).collect();
    let mut out = Vec::new();
    let floor = min_inliers.max(2);
    while remaining.len() >= floor {
        let mut best: Vec<usize> = Vec::new();
        for _ in 0..iterations {
            let a = rng.random_range(0..remaining.len());
            let mut b = rng.random_range(0..remaining.len() - 1);
            if b >= a {
                b += 1;
            }
            let Ok(model) = line_through(pts[remaining[a]], pts[remaining[b]]) else {
                continue;
            };
            let inliers: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| signed_residual(pts[i], model).abs() <= inlier_eps)
                .collect();
            if inliers.len() > best.len() {
                best = inliers;
            }
        }
        if best.len() < floor {
            break;
        }
        remaining.retain(|i| best.binary_search(i).is_err());
        out.push(best);
    }
    out
}
