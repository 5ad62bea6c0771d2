//! Detection scoring against ground truth and runtime benchmarking.

pub mod bench;
pub mod metrics;

pub use bench::{bench_scaling, loglog_slope, BenchCell, BenchConfig, BenchError, BenchTable, CellStatus};
pub use metrics::{
    count, point_match, score, score_tracks, track_match, track_points, CountSet, Level, LevelScore, MatchConfig,
    MetricsAccumulator, MetricsReport,
};
