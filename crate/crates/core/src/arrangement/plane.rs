use std::cmp::Ordering;

use super::predicates::cmp_vertex_x;
use super::{build_offset_arrangement, validate, Consensus, LinearStructure, OffsetLine, Reporter, StepEvent, SweepError};
use crate::geometry::{AxisPair, TimedPoint};

/// A queued crossing with its floating abscissa and a bound on that value's
/// rounding error.
#[derive(Debug, Clone, Copy)]
struct Vertex {
    x: f64,
    err: f64,
    a: u32,
    b: u32,
}

impl Vertex {
    fn new(lines: &[OffsetLine], a: u32, b: u32) -> Self {
        let (p, q) = (lines[a as usize].line, lines[b as usize].line);
        let dm = p.m - q.m;
        let x = (q.c - p.c) / dm;
        let err = 8.0 * f64::EPSILON * (p.c.abs() + q.c.abs() + x.abs() * (p.m.abs() + q.m.abs())) / dm.abs();
        Self { x, err, a, b }
    }
}

/// Binary min-heap of vertices keyed by exact abscissa.
#[derive(Debug, Default)]
struct VertexQueue {
    heap: Vec<Vertex>,
}

impl VertexQueue {
    fn less(lines: &[OffsetLine], u: Vertex, v: Vertex) -> bool {
        if u.x + u.err < v.x - v.err {
            return true;
        }
        if u.x - u.err > v.x + v.err {
            return false;
        }
        cmp_vertex_x(lines, (u.a as usize, u.b as usize), (v.a as usize, v.b as usize)) == Ordering::Less
    }

    fn push(&mut self, lines: &[OffsetLine], v: Vertex) {
        self.heap.push(v);
        let mut i = self.heap.len() - 1;
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::less(lines, self.heap[i], self.heap[parent]) {
                break;
            }
            self.heap.swap(i, parent);
            i = parent;
        }
    }

    fn pop(&mut self, lines: &[OffsetLine]) -> Option<Vertex> {
        let last = self.heap.len().checked_sub(1)?;
        self.heap.swap(0, last);
        let top = self.heap.pop();
        let n = self.heap.len();
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut m = i;
            if l < n && Self::less(lines, self.heap[l], self.heap[m]) {
                m = l;
            }
            if r < n && Self::less(lines, self.heap[r], self.heap[m]) {
                m = r;
            }
            if m == i {
                break;
            }
            self.heap.swap(i, m);
            i = m;
        }
        top
    }
}

/// Classical left-to-right sweep: adjacent pairs that will cross are queued
/// by the abscissa of their crossing and processed in that order.
#[derive(Debug)]
pub struct PlaneSweep<'a> {
    points: &'a [TimedPoint],
    axes: AxisPair,
    lines: Vec<OffsetLine>,
    order: Vec<u32>,
    pos: Vec<u32>,
    queue: VertexQueue,
    consensus: Consensus,
    reporter: Reporter,
    steps: usize,
}

impl<'a> PlaneSweep<'a> {
    pub fn new(points: &'a [TimedPoint], axes: AxisPair, eps: f64, min_frames: usize) -> Result<Self, SweepError> {
        validate(points, eps, min_frames)?;
        let lines = build_offset_arrangement(points, axes, eps);
        let order: Vec<u32> = (0..lines.len() as u32).collect();
        let frames: Vec<u32> = points.iter().map(|p| p.t).collect();
        let consensus = Consensus::new(&lines, &order, &frames);
        let mut reporter = Reporter::new(min_frames);
        reporter.offer_initial(&lines, &order, &consensus);
        let mut s = Self {
            points,
            axes,
            lines,
            pos: order.clone(),
            order,
            queue: VertexQueue::default(),
            consensus,
            reporter,
            steps: 0,
        };
        for k in 0..s.order.len().saturating_sub(1) {
            s.enqueue(k);
        }
        Ok(s)
    }

    /// Queues the pair at cut positions `k`, `k + 1` if it crosses ahead.
    fn enqueue(&mut self, k: usize) {
        let (a, b) = (self.order[k], self.order[k + 1]);
        if self.lines[a as usize].line.m < self.lines[b as usize].line.m {
            self.queue.push(&self.lines, Vertex::new(&self.lines, a, b));
        }
    }

    pub fn step(&mut self) -> Result<Option<StepEvent>, SweepError> {
        loop {
            let Some(Vertex { a, b, .. }) = self.queue.pop(&self.lines) else {
                return Ok(None);
            };
            let k = self.pos[a as usize] as usize;
            if self.pos[b as usize] as usize != k + 1 {
                // Stale entry: the pair was separated or has already crossed.
                continue;
            }
            self.order.swap(k, k + 1);
            self.pos[a as usize] = k as u32 + 1;
            self.pos[b as usize] = k as u32;

            let (upper, lower) = (self.lines[a as usize], self.lines[b as usize]);
            let peak = self.consensus.apply_swap(k + 1, &upper, &lower);
            let reported = peak && self.reporter.offer(&self.consensus, k + 1);

            if k > 0 {
                self.enqueue(k - 1);
            }
            if k + 2 < self.order.len() {
                self.enqueue(k + 1);
            }
            self.steps += 1;
            return Ok(Some(StepEvent { position: k, upper: a as usize, lower: b as usize, reported }));
        }
    }

    pub fn lines(&self) -> &[OffsetLine] {
        &self.lines
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn consensus(&self) -> &Consensus {
        &self.consensus
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn into_structures(self) -> Vec<LinearStructure> {
        self.reporter.into_structures(self.points, self.axes)
    }
}
