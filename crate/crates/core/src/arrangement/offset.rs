use serde::{Deserialize, Serialize};

use crate::geometry::{point_to_dual_line, AxisPair, Line2, Point2, TimedPoint};

/// Which side of the tolerance strip a boundary line came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineKind {
    /// Dual of `(a, o - eps)`.
    Lower,
    /// Dual of `(a, o + eps)`.
    Upper,
}

impl LineKind {
    /// Direction of the infinitesimal outward shift applied to the boundary.
    pub(crate) fn sign(self) -> i8 {
        match self {
            LineKind::Lower => -1,
            LineKind::Upper => 1,
        }
    }
}

/// One boundary line of one detection's strip in the dual plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetLine {
    /// Original point id.
    pub source_id: usize,
    /// Index of the source point within the swept slice.
    pub source: u32,
    pub kind: LineKind,
    pub line: Line2,
    pub frame: u32,
}

/// Builds the `2N` boundary lines, sorted top-to-bottom as they appear far
/// to the left: slope ascending, then intercept descending. Exact ties put
/// the upper boundary first, then the lower source id first.
pub fn build_offset_arrangement(points: &[TimedPoint], axes: AxisPair, eps: f64) -> Vec<OffsetLine> {
    let mut lines = Vec::with_capacity(points.len() * 2);
    for (i, p) in points.iter().enumerate() {
        let q = p.project(axes);
        for (kind, o) in [(LineKind::Lower, q.y - eps), (LineKind::Upper, q.y + eps)] {
            lines.push(OffsetLine {
                source_id: p.id,
                source: i as u32,
                kind,
                line: point_to_dual_line(Point2::new(q.x, o)),
                frame: p.t,
            });
        }
    }
    lines.sort_by(|a, b| {
        a.line
            .m
            .total_cmp(&b.line.m)
            .then(b.line.c.total_cmp(&a.line.c))
            .then(b.kind.sign().cmp(&a.kind.sign()))
            .then(a.source_id.cmp(&b.source_id))
    });
    lines
}
