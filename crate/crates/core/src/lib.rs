//! Multi-target linear track detection over sparse per-frame detections.
//!
//! Detections that a single line passes within tolerance of, one per frame,
//! and evenly paced in time, form a track. [`detection::find_all_tracks`]
//! enumerates all of them by sweeping an arrangement of dual lines;
//! [`detection::naive_enumerate`] is the exhaustive reference and
//! [`detection::baseline_detect`] the RANSAC/Hough alternative.

pub mod arrangement;
pub mod cli;
pub mod detection;
pub mod eval;
pub mod geometry;
pub mod synth;

pub use detection::{detect, find_all_tracks, find_all_tracks_with_vertical, DetectorConfig, Method, Selection, Track, TrackSet};
pub use geometry::{PointSet, TimedPoint};
