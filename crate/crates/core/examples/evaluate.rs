//! Recall, precision and F1 at track and detection level, pooled over seeds.

use trackswept::detection::{detect, DetectorConfig, Selection};
use trackswept::eval::{track_points, MatchConfig, MetricsAccumulator};
use trackswept::synth::{generate_scene, SceneConfig};

fn main() {
    let m = MatchConfig::default();
    let mut acc = MetricsAccumulator::default();
    for seed in 0..5 {
        let scene =
            generate_scene(&SceneConfig { frames: 10, targets: 4, clutter_per_frame: 30, seed, ..Default::default() })
                .unwrap();
        let pred = detect(&scene.points, &DetectorConfig { selection: Selection::TopK(4), ..Default::default() }).unwrap();
        acc.add(&track_points(&scene.points, &scene.gt), &track_points(&scene.points, &pred), &m);
    }
    println!("{}", serde_json::to_string_pretty(&acc.report()).unwrap());
}
