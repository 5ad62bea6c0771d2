//! Write a scene to disk as points.csv, gt.json and scene.json and read it back.

use trackswept::synth::io::{load_points, read_scene, write_scene};
use trackswept::synth::{generate_scene, SceneConfig};

fn main() {
    let dir = std::env::temp_dir().join("trackswept-scene-io");
    let scene = generate_scene(&SceneConfig { seed: 99, ..Default::default() }).unwrap();
    write_scene(&dir, &scene).unwrap();
    println!("wrote {}", dir.display());

    let back = read_scene(&dir).unwrap();
    assert_eq!(back.points, scene.points);
    assert_eq!(back.gt.keys(), scene.gt.keys());
    let pts = load_points(&dir.join("points.csv")).unwrap();
    println!("{} points, {} ground-truth tracks, round trip ok", pts.len(), back.gt.tracks.len());
    for line in std::fs::read_to_string(dir.join("points.csv")).unwrap().lines().take(4) {
        println!("  {line}");
    }
}
