//! Dual arrangements of strip boundaries and the two sweeps over them.
//!
//! Every detection `d` contributes the two dual lines of the points `d ± eps`
//! (vertically). A line of the primal plane lies within `eps` of a subset of
//! detections exactly when its dual point lies between both boundary lines of
//! each of them, so the cells of the arrangement enumerate every maximal
//! subset that some line stabs. Sweeping the arrangement while maintaining
//! per-cell membership turns that into a cell-by-cell enumeration.

mod consensus;
mod offset;
mod plane;
pub mod predicates;
mod topo;

pub use consensus::Consensus;
pub use offset::{build_offset_arrangement, LineKind, OffsetLine};
pub use plane::PlaneSweep;
pub use topo::TopoSweep;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{minimax_fit, AxisPair, Line2, Point2, TimedPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("no points to sweep")]
    EmptyInput,
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("minimum frame count must be at least 1")]
    InvalidMinFrames,
    #[error("sweep state inconsistent at cut position {position}")]
    CorruptState { position: usize },
}

/// A subset of points that one line stabs within tolerance, spanning at
/// least the requested number of frames.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearStructure {
    /// Original point ids, ascending.
    pub point_ids: Vec<usize>,
    /// Minimax line of the members in the swept coordinates.
    pub witness: Line2,
    pub residual: f64,
    pub frames: usize,
}

/// One sweep step: the adjacent pair at cut positions `position` and
/// `position + 1` exchanged places.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepEvent {
    pub position: usize,
    /// Line index that was above before the swap.
    pub upper: usize,
    /// Line index that was below before the swap.
    pub lower: usize,
    pub reported: bool,
}

/// Which sweep to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepKind {
    Topological,
    Plane,
}

pub(crate) fn validate(points: &[TimedPoint], eps: f64, min_frames: usize) -> Result<(), SweepError> {
    if points.is_empty() {
        return Err(SweepError::EmptyInput);
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(SweepError::InvalidEpsilon(eps));
    }
    if min_frames == 0 {
        return Err(SweepError::InvalidMinFrames);
    }
    Ok(())
}

/// Enumerates every maximal `eps`-stabbable subset spanning at least
/// `min_frames` frames, using the topological sweep.
pub fn topo_sweep(
    points: &[TimedPoint],
    axes: AxisPair,
    eps: f64,
    min_frames: usize,
) -> Result<Vec<LinearStructure>, SweepError> {
    let mut sweep = TopoSweep::new(points, axes, eps, min_frames)?;
    while sweep.step()?.is_some() {}
    Ok(sweep.into_structures())
}

/// Same contract as [`topo_sweep`], driven by an event queue ordered by
/// vertex abscissa.
pub fn plane_sweep(
    points: &[TimedPoint],
    axes: AxisPair,
    eps: f64,
    min_frames: usize,
) -> Result<Vec<LinearStructure>, SweepError> {
    let mut sweep = PlaneSweep::new(points, axes, eps, min_frames)?;
    while sweep.step()?.is_some() {}
    Ok(sweep.into_structures())
}

pub fn sweep(
    kind: SweepKind,
    points: &[TimedPoint],
    axes: AxisPair,
    eps: f64,
    min_frames: usize,
) -> Result<Vec<LinearStructure>, SweepError> {
    match kind {
        SweepKind::Topological => topo_sweep(points, axes, eps, min_frames),
        SweepKind::Plane => plane_sweep(points, axes, eps, min_frames),
    }
}

/// Deduplicating collector of reported cells, shared by both sweeps.
#[derive(Debug)]
pub(crate) struct Reporter {
    min_frames: usize,
    /// Fingerprint to the first stored set carrying it.
    seen: std::collections::HashMap<u64, u32>,
    /// Later sets whose fingerprint was already taken.
    collided: Vec<u32>,
    /// Member lists, concatenated; set `k` spans `bounds[k]..bounds[k + 1]`.
    ids: Vec<u32>,
    bounds: Vec<usize>,
}

impl Reporter {
    pub(crate) fn new(min_frames: usize) -> Self {
        Self { min_frames, seen: Default::default(), collided: Vec::new(), ids: Vec::new(), bounds: vec![0] }
    }

    fn set(&self, k: u32) -> &[u32] {
        &self.ids[self.bounds[k as usize]..self.bounds[k as usize + 1]]
    }

    /// Records `region` if it is a local maximum of sufficient span.
    pub(crate) fn offer(&mut self, consensus: &Consensus, region: usize) -> bool {
        if consensus.frames_in(region) < self.min_frames {
            return false;
        }
        let next = (self.bounds.len() - 1) as u32;
        match self.seen.entry(consensus.fingerprint(region)) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(next);
            }
            std::collections::hash_map::Entry::Occupied(o) => {
                let first = *o.get();
                if consensus.holds_exactly(region, self.set(first))
                    || self.collided.iter().any(|&k| consensus.holds_exactly(region, self.set(k)))
                {
                    return true;
                }
                self.collided.push(next);
            }
        }
        self.ids.extend(consensus.members(region).map(|i| i as u32));
        self.bounds.push(self.ids.len());
        true
    }

    /// Reports the local maxima present on the initial cut: a region bounded
    /// by an upper boundary above and a lower boundary below.
    pub(crate) fn offer_initial(&mut self, lines: &[OffsetLine], order: &[u32], consensus: &Consensus) {
        for r in 1..order.len() {
            let above = &lines[order[r - 1] as usize];
            let below = &lines[order[r] as usize];
            if above.kind == LineKind::Upper && below.kind == LineKind::Lower {
                self.offer(consensus, r);
            }
        }
    }

    pub(crate) fn into_structures(self, points: &[TimedPoint], axes: AxisPair) -> Vec<LinearStructure> {
        let mut projected: Vec<Point2> = Vec::new();
        let mut out: Vec<LinearStructure> = (0..self.bounds.len() - 1)
            .map(|k| {
                let local = self.set(k as u32);
                projected.clear();
                projected.extend(local.iter().map(|&i| points[i as usize].project(axes)));
                let fit = minimax_fit(&projected);
                let mut frames: Vec<u32> = local.iter().map(|&i| points[i as usize].t).collect();
                frames.sort_unstable();
                frames.dedup();
                let mut point_ids: Vec<usize> = local.iter().map(|&i| points[i as usize].id).collect();
                point_ids.sort_unstable();
                LinearStructure {
                    point_ids,
                    witness: fit.line,
                    residual: fit.max_abs_residual,
                    frames: frames.len(),
                }
            })
            .collect();
        out.sort_unstable_by(|a, b| a.point_ids.cmp(&b.point_ids));
        out
    }
}
