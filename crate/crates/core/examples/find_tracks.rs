//! Generate a cluttered scene, find every feasible track and keep the best.

use trackswept::detection::{detect, find_all_tracks_with_vertical, DetectorConfig, Selection};
use trackswept::synth::{generate_scene, SceneConfig};

fn main() {
    let scene = generate_scene(&SceneConfig { frames: 8, targets: 3, clutter_per_frame: 40, seed: 4, ..Default::default() })
        .unwrap();
    println!("{} points over {} frames", scene.points.len(), scene.points.frame_count());

    let cfg = DetectorConfig::default();
    let all = find_all_tracks_with_vertical(&scene.points, &cfg).unwrap();
    println!("{} feasible tracks before selection", all.tracks.len());

    let picked = detect(&scene.points, &DetectorConfig { selection: Selection::TopK(3), ..cfg }).unwrap();
    for t in &picked.tracks {
        let hit = scene.gt.tracks.iter().any(|g| g.point_ids == t.point_ids);
        println!(
            "len {:2} residual xy {:.2} tx {:.2} ids {:?}{}",
            t.len(),
            t.residual_xy,
            t.residual_tx,
            t.point_ids,
            if hit { "  (ground truth)" } else { "" }
        );
    }
}
