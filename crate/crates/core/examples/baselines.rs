//! RANSAC, Hough and the exhaustive search next to the sweep on one scene.

use trackswept::detection::{detect, DetectorConfig, HoughConfig, Method, Selection};
use trackswept::eval::{score, MatchConfig};
use trackswept::synth::{generate_scene, ClutterMode, SceneConfig};

fn main() {
    let scene = generate_scene(&SceneConfig {
        frames: 5,
        targets: 3,
        clutter_per_frame: 60,
        clutter_mode: ClutterMode::StreakResidue { segment_length: 40.0, points_per_segment: 12 },
        seed: 21,
        ..Default::default()
    })
    .unwrap();
    let base = DetectorConfig { selection: Selection::Threshold(3), ..Default::default() };
    let hough = HoughConfig { rho_bins: 724, peak_count: 3, ..Default::default() };
    for method in [Method::Ts, Method::Ps, Method::Ransac, Method::Hough] {
        let cfg = DetectorConfig { method, hough: hough.clone(), ..base.clone() };
        let pred = detect(&scene.points, &cfg).unwrap();
        let r = score(&scene.points, &scene.gt, &pred, &MatchConfig::default());
        println!(
            "{:6} tracks {:3}  track recall {:.2} precision {:.2}  point recall {:.2}",
            method.to_string(),
            pred.tracks.len(),
            r.track.recall,
            r.track.precision,
            r.point.recall
        );
    }
    // The exhaustive search refuses scenes whose subset count is too large.
    match detect(&scene.points, &DetectorConfig { method: Method::Naive, ..base }) {
        Ok(t) => println!("naive  tracks {}", t.tracks.len()),
        Err(e) => println!("naive  {e}"),
    }
}
