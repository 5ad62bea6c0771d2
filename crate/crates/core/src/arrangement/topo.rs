use std::cmp::Ordering;

use super::predicates::cmp_vertex_x;
use super::{build_offset_arrangement, validate, Consensus, LinearStructure, OffsetLine, Reporter, StepEvent, SweepError};
use crate::geometry::{AxisPair, TimedPoint};

const NONE: u32 = u32::MAX;

/// Topological sweep over the boundary arrangement.
///
/// The cut is advanced one elementary step at a time: any adjacent pair
/// whose shared vertex is the right endpoint of both cut edges may swap.
/// Right endpoints come from the upper and lower horizon trees, which store
/// for each line the neighbour that bounds its cut edge from above
/// (`upper_delim`) and from below (`lower_delim`).
#[derive(Debug)]
pub struct TopoSweep<'a> {
    points: &'a [TimedPoint],
    axes: AxisPair,
    lines: Vec<OffsetLine>,
    order: Vec<u32>,
    pos: Vec<u32>,
    upper_delim: Vec<u32>,
    lower_delim: Vec<u32>,
    right_end: Vec<u32>,
    left_end: Vec<u32>,
    ready: Vec<u32>,
    consensus: Consensus,
    reporter: Reporter,
    steps: usize,
}

impl<'a> TopoSweep<'a> {
    pub fn new(points: &'a [TimedPoint], axes: AxisPair, eps: f64, min_frames: usize) -> Result<Self, SweepError> {
        validate(points, eps, min_frames)?;
        let lines = build_offset_arrangement(points, axes, eps);
        let n = lines.len();
        let order: Vec<u32> = (0..n as u32).collect();
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
            upper_delim: vec![NONE; n],
            lower_delim: vec![NONE; n],
            right_end: vec![NONE; n],
            left_end: vec![NONE; n],
            ready: Vec::new(),
            consensus,
            reporter,
            steps: 0,
        };
        s.init_trees();
        for l in 0..n {
            s.right_end[l] = s.nearer_delim(l as u32);
        }
        for k in 0..n.saturating_sub(1) {
            if s.is_ready(k) {
                s.ready.push(k as u32);
            }
        }
        Ok(s)
    }

    fn slope(&self, l: u32) -> f64 {
        self.lines[l as usize].line.m
    }

    /// Orders `l ∩ a` against `l ∩ b` along line `l`.
    fn cmp_on(&self, l: u32, a: u32, b: u32) -> Ordering {
        cmp_vertex_x(&self.lines, (l as usize, a as usize), (l as usize, b as usize))
    }

    /// Whether the extension of `k` meets `c` inside `c`'s current edge of
    /// the upper horizon tree.
    fn hits_upper_edge(&self, k: u32, c: u32) -> bool {
        self.slope(k) > self.slope(c) && {
            let end = self.upper_delim[c as usize];
            end == NONE || self.cmp_on(c, k, end) == Ordering::Less
        }
    }

    fn hits_lower_edge(&self, k: u32, c: u32) -> bool {
        self.slope(k) < self.slope(c) && {
            let end = self.lower_delim[c as usize];
            end == NONE || self.cmp_on(c, k, end) == Ordering::Less
        }
    }

    fn init_trees(&mut self) {
        let n = self.lines.len() as u32;
        for k in 1..n {
            let mut c = k - 1;
            while c != NONE && !self.hits_upper_edge(k, c) {
                c = self.upper_delim[c as usize];
            }
            self.upper_delim[k as usize] = c;
        }
        for k in (0..n.saturating_sub(1)).rev() {
            let mut c = k + 1;
            while c != NONE && !self.hits_lower_edge(k, c) {
                c = self.lower_delim[c as usize];
            }
            self.lower_delim[k as usize] = c;
        }
    }

    fn nearer_delim(&self, l: u32) -> u32 {
        let (u, d) = (self.upper_delim[l as usize], self.lower_delim[l as usize]);
        match (u, d) {
            (NONE, _) => d,
            (_, NONE) => u,
            _ if self.cmp_on(l, u, d) == Ordering::Less => u,
            _ => d,
        }
    }

    fn is_ready(&self, k: usize) -> bool {
        let (a, b) = (self.order[k], self.order[k + 1]);
        self.right_end[a as usize] == b && self.right_end[b as usize] == a
    }

    /// Performs one elementary step, or returns `None` once the cut has
    /// passed every vertex.
    pub fn step(&mut self) -> Result<Option<StepEvent>, SweepError> {
        let Some(k) = self.ready.pop() else {
            return Ok(None);
        };
        let k = k as usize;
        if !self.is_ready(k) {
            return Err(SweepError::CorruptState { position: k });
        }
        let n = self.order.len();
        let (a, b) = (self.order[k], self.order[k + 1]);
        self.order.swap(k, k + 1);
        self.pos[a as usize] = k as u32 + 1;
        self.pos[b as usize] = k as u32;
        self.left_end[a as usize] = b;
        self.left_end[b as usize] = a;

        // b now runs above a. Its new upper edge ends where it first meets an
        // edge of the upper tree right of the swept vertex.
        let mut c = if k > 0 { self.order[k - 1] } else { NONE };
        while c != NONE && !(self.hits_upper_edge(b, c) && self.cmp_on(b, c, a) == Ordering::Greater) {
            c = self.upper_delim[c as usize];
        }
        self.upper_delim[b as usize] = c;

        let mut c = if k + 2 < n { self.order[k + 2] } else { NONE };
        while c != NONE && !(self.hits_lower_edge(a, c) && self.cmp_on(a, c, b) == Ordering::Greater) {
            c = self.lower_delim[c as usize];
        }
        self.lower_delim[a as usize] = c;

        self.right_end[a as usize] = self.nearer_delim(a);
        self.right_end[b as usize] = self.nearer_delim(b);

        let (upper, lower) = (self.lines[a as usize], self.lines[b as usize]);
        let peak = self.consensus.apply_swap(k + 1, &upper, &lower);
        let reported = peak && self.reporter.offer(&self.consensus, k + 1);

        if k > 0 && self.is_ready(k - 1) {
            self.ready.push(k as u32 - 1);
        }
        if k + 2 < n && self.is_ready(k + 1) {
            self.ready.push(k as u32 + 1);
        }
        self.steps += 1;
        Ok(Some(StepEvent { position: k, upper: a as usize, lower: b as usize, reported }))
    }

    pub fn lines(&self) -> &[OffsetLine] {
        &self.lines
    }

    /// Line indices along the current cut, top to bottom.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn consensus(&self) -> &Consensus {
        &self.consensus
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// For each line, the line whose crossing ends its current cut edge.
    pub fn right_endpoints(&self) -> impl Iterator<Item = Option<usize>> + '_ {
        self.right_end.iter().map(|&r| (r != NONE).then_some(r as usize))
    }

    /// For each line, the line whose crossing began its current cut edge.
    pub fn left_endpoints(&self) -> impl Iterator<Item = Option<usize>> + '_ {
        self.left_end.iter().map(|&r| (r != NONE).then_some(r as usize))
    }

    pub fn into_structures(self) -> Vec<LinearStructure> {
        self.reporter.into_structures(self.points, self.axes)
    }
}
