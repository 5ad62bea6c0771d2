use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trackswept::detection::{
    baseline_detect, find_all_tracks, find_all_tracks_with_vertical, hough_lines, naive_enumerate, DetectError,
    DetectorConfig, HoughConfig, Method, TrackSet,
};
use trackswept::geometry::{is_feasible, AxisPair, Point2, PointSet};
use trackswept::synth::{generate_scene, SceneConfig};

fn random_instance(rng: &mut ChaCha8Rng) -> PointSet {
    let frames = rng.random_range(3..=5);
    let n = rng.random_range(3..=25);
    let mut rows = Vec::new();
    // A planted track keeps some instances non-trivial.
    if rng.random_bool(0.7) {
        let (x0, y0) = (rng.random_range(0.0..30.0), rng.random_range(0.0..30.0));
        let (vx, vy) = (rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
        for t in 1..=frames {
            let k = f64::from(t);
            rows.push((t, x0 + vx * k + rng.random_range(-0.8..0.8), y0 + vy * k + rng.random_range(-0.8..0.8)));
        }
    }
    while rows.len() < n {
        rows.push((rng.random_range(1..=frames), rng.random_range(0.0..30.0), rng.random_range(0.0..30.0)));
    }
    PointSet::from_rows(rows).unwrap()
}

fn contained(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.contains(x))
}

fn assert_sound(ps: &PointSet, ts: &TrackSet, cfg: &DetectorConfig) {
    for t in &ts.tracks {
        let pts = if t.axis_swapped { ps.swapped_xy().select(&t.point_ids) } else { ps.select(&t.point_ids) };
        assert!(is_feasible(&pts, cfg.eps1, cfg.eps2).feasible(), "infeasible track {:?}", t.point_ids);
        assert!(t.len() >= 3);
    }
}

#[test]
fn oracle_tracks_are_covered_and_outputs_are_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = DetectorConfig::default();
    for case in 0..120 {
        let ps = random_instance(&mut rng);
        let oracle = naive_enumerate(&ps, cfg.eps1, cfg.eps2).unwrap();
        let found = find_all_tracks_with_vertical(&ps, &cfg).unwrap();
        assert_sound(&ps, &found, &cfg);
        for t in &oracle.tracks {
            assert!(
                found.tracks.iter().any(|f| contained(&t.point_ids, &f.point_ids)),
                "case {case}: oracle track {:?} not covered",
                t.point_ids
            );
        }
        // Unswapped outputs are oracle tracks themselves.
        let keys = oracle.keys();
        for t in found.tracks.iter().filter(|t| !t.axis_swapped) {
            assert!(keys.binary_search(&t.key()).is_ok(), "case {case}: {:?} not in oracle", t.point_ids);
        }
    }
}

#[test]
fn plane_and_topological_sweeps_give_identical_tracks() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..60 {
        let ps = random_instance(&mut rng);
        let ts = find_all_tracks_with_vertical(&ps, &DetectorConfig::default()).unwrap();
        let pl = find_all_tracks_with_vertical(&ps, &DetectorConfig { method: Method::Ps, ..Default::default() }).unwrap();
        assert_eq!(ts, pl);
    }
}

#[test]
fn reflecting_the_input_swaps_the_passes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = DetectorConfig::default();
    for _ in 0..30 {
        let ps = random_instance(&mut rng);
        let both = find_all_tracks_with_vertical(&ps, &cfg).unwrap();
        let reflected = find_all_tracks(&ps.swapped_xy(), &cfg).unwrap();
        // Every swapped-pass track of the original is an unswapped track of
        // the reflection (merge only drops swapped duplicates).
        for t in both.tracks.iter().filter(|t| t.axis_swapped) {
            let r = reflected.tracks.iter().find(|r| r.point_ids == t.point_ids).expect("present");
            assert_eq!(r.line_xy, t.line_xy);
            assert_eq!(r.line_tx, t.line_tx);
        }
    }
}

#[test]
fn two_planted_tracks_among_clutter() {
    let cfg = SceneConfig {
        frames: 5,
        targets: 2,
        clutter_per_frame: 6,
        jitter_sigma: 0.0,
        width: 300.0,
        height: 300.0,
        seed: 9,
        ..Default::default()
    };
    let scene = generate_scene(&cfg).unwrap();
    assert_eq!(scene.points.len(), 40);
    let found = find_all_tracks_with_vertical(&scene.points, &DetectorConfig::default()).unwrap();
    for gt in &scene.gt.tracks {
        assert!(found.tracks.iter().any(|t| t.point_ids == gt.point_ids), "missing {:?}", gt.point_ids);
    }
    let oracle = naive_enumerate(&scene.points, 2.0, 2.0).unwrap();
    for gt in &scene.gt.tracks {
        assert!(oracle.keys().contains(&gt.key()));
    }
}

#[test]
fn irregular_pacing_is_rejected_by_tier_two() {
    // On the line y = x but with x-steps 1, 1, 10, 1.
    let xs = [0.0, 1.0, 2.0, 12.0, 13.0];
    let ps = PointSet::from_rows(xs.iter().enumerate().map(|(i, &x)| (i as u32 + 1, x, x))).unwrap();
    let cfg = DetectorConfig { eps1: 0.5, eps2: 0.5, min_frames: 5, vertical: false, ..Default::default() };
    assert!(find_all_tracks(&ps, &cfg).unwrap().tracks.is_empty());
    let tier1 = trackswept::arrangement::topo_sweep(ps.points(), AxisPair::XY, 0.5, 5).unwrap();
    assert_eq!(tier1.len(), 1);
}

#[test]
fn single_frame_gives_nothing() {
    let ps = PointSet::from_rows((0..100).map(|i| (1, f64::from(i % 10) * 7.0, f64::from(i / 10) * 7.0))).unwrap();
    assert!(find_all_tracks_with_vertical(&ps, &DetectorConfig::default()).unwrap().tracks.is_empty());
}

#[test]
fn vertical_track_needs_the_swapped_pass() {
    let mut rows: Vec<(u32, f64, f64)> = (1..=5).map(|t| (t, 100.0, 10.0 * f64::from(t))).collect();
    // Same-frame clutter crowding the column rules the track out in x-y.
    rows.extend((1..=5).map(|t| (t, 100.0 + 0.5 * f64::from(t), 500.0)));
    let ps = PointSet::from_rows(rows).unwrap();
    let cfg = DetectorConfig::default();
    let plain = find_all_tracks(&ps, &cfg).unwrap();
    assert!(!plain.keys().contains(&vec![0, 1, 2, 3, 4]));
    let both = find_all_tracks_with_vertical(&ps, &cfg).unwrap();
    let t = both.tracks.iter().find(|t| t.point_ids == vec![0, 1, 2, 3, 4]).expect("vertical track");
    assert!(t.axis_swapped);
}

#[test]
fn diagonal_track_is_reported_once() {
    let ps = PointSet::from_rows((1..=6).map(|t| (t, 5.0 * f64::from(t), 5.0 * f64::from(t)))).unwrap();
    let out = find_all_tracks_with_vertical(&ps, &DetectorConfig::default()).unwrap();
    let full: Vec<_> = out.tracks.iter().filter(|t| t.point_ids == vec![0, 1, 2, 3, 4, 5]).collect();
    assert_eq!(full.len(), 1);
    assert!(!full[0].axis_swapped);
    // Smaller cells surface too; selection keeps only the full track.
    let top = trackswept::detection::select_tracks(&out, trackswept::Selection::TopK(3));
    assert_eq!(top.keys(), vec![vec![0, 1, 2, 3, 4, 5]]);
    let plain = find_all_tracks(&ps, &DetectorConfig::default()).unwrap();
    assert!(plain.keys().iter().all(|k| out.keys().contains(k)));
}

#[test]
fn noiseless_scenes_are_recovered_exactly() {
    for seed in 0..50 {
        let frames = 3 + (seed % 5) as u32;
        let targets = 1 + (seed % 3) as usize;
        let cfg = SceneConfig {
            frames,
            targets,
            clutter_per_frame: (2 * targets) / 3 + (seed % 2) as usize,
            jitter_sigma: 0.0,
            seed,
            ..Default::default()
        };
        let scene = generate_scene(&cfg).unwrap();
        let det = DetectorConfig { eps1: 1e-3, eps2: 1e-3, ..Default::default() };
        let found = find_all_tracks_with_vertical(&scene.points, &det).unwrap();
        for gt in &scene.gt.tracks {
            assert!(found.keys().contains(&gt.key()), "seed {seed}: {:?}", gt.point_ids);
        }
    }
}

#[test]
fn detection_is_deterministic_across_thread_counts() {
    let scene = generate_scene(&SceneConfig { frames: 8, clutter_per_frame: 40, seed: 3, ..Default::default() }).unwrap();
    let a = find_all_tracks_with_vertical(&scene.points, &DetectorConfig::default()).unwrap();
    let b = find_all_tracks_with_vertical(&scene.points, &DetectorConfig { threads: 4, ..Default::default() }).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn naive_guard_refuses_big_inputs() {
    let scene = generate_scene(&SceneConfig { frames: 5, clutter_per_frame: 400, ..Default::default() }).unwrap();
    let cfg = DetectorConfig { method: Method::Naive, ..Default::default() };
    assert!(matches!(find_all_tracks(&scene.points, &cfg), Err(DetectError::TooLarge { .. })));
}

#[test]
fn coarse_hough_misses_a_track_the_sweep_finds() {
    // Eight clutter points per target detection; two planted tracks whose
    // lines sit between accumulator bins.
    let scene = generate_scene(&SceneConfig {
        frames: 6,
        targets: 2,
        clutter_per_frame: 16,
        width: 400.0,
        height: 400.0,
        jitter_sigma: 0.3,
        seed: 12,
        ..Default::default()
    })
    .unwrap();
    let sweep = find_all_tracks_with_vertical(&scene.points, &DetectorConfig::default()).unwrap();
    let covered = |ts: &TrackSet, gt: &[usize]| ts.tracks.iter().any(|t| contained(gt, &t.point_ids));
    for gt in &scene.gt.tracks {
        assert!(covered(&sweep, &gt.point_ids));
    }
    let coarse = DetectorConfig {
        method: Method::Hough,
        hough: HoughConfig { rho_bins: 8, theta_bins: 6, peak_count: 2, inlier_eps: 2.0 },
        ..Default::default()
    };
    let hough = baseline_detect(&scene.points, &coarse).unwrap();
    let missed = scene.gt.tracks.iter().filter(|gt| !covered(&hough, &gt.point_ids)).count();
    assert!(missed >= 1);
}

#[test]
fn hough_on_exact_line() {
    let pts: Vec<Point2> = (0..12).map(|i| Point2::new(f64::from(i) * 10.0, 50.0 + f64::from(i) * 3.0)).collect();
    assert_eq!(hough_lines(&pts, 200, 180, 1, 1.0), vec![(0..12).collect::<Vec<_>>()]);
}
