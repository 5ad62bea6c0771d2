//! A target moving straight down the image column is only separable from
//! nearby clutter after swapping the axes.

use trackswept::detection::{find_all_tracks, find_all_tracks_with_vertical, DetectorConfig};
use trackswept::geometry::PointSet;

fn main() {
    let mut rows: Vec<(u32, f64, f64)> = (1..=5).map(|t| (t, 300.0, 40.0 * f64::from(t))).collect();
    rows.extend((1..=5).map(|t| (t, 300.0 + 0.6 * f64::from(t), 900.0)));
    let ps = PointSet::from_rows(rows).unwrap();
    let cfg = DetectorConfig::default();

    let plain = find_all_tracks(&ps, &cfg).unwrap();
    println!("x-y pass only: {:?}", plain.keys());
    let both = find_all_tracks_with_vertical(&ps, &cfg).unwrap();
    for t in &both.tracks {
        println!("{:?} swapped {}", t.point_ids, t.axis_swapped);
    }
}
