use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use trackswept::detection::TrackParams;
use trackswept::geometry::PointSet;
use trackswept::synth::io::{save_points, save_tracks};
use trackswept::{Track, TrackSet};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trackswept"))
}

fn run(args: &[&str]) -> i32 {
    let out = bin().args(args).output().expect("spawn");
    out.status.code().expect("exit code")
}

fn s(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn gen(dir: &Path, extra: &[&str]) -> PathBuf {
    let out = dir.join("scene");
    let mut args = vec!["gen", "--out", out.to_str().unwrap()];
    args.extend(extra);
    assert_eq!(run(&args), 0);
    out
}

fn json(p: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn gen_writes_points_truth_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let scene = gen(dir.path(), &["--frames", "5", "--targets", "4", "--clutter", "200", "--seed", "3"]);
    let csv = std::fs::read_to_string(scene.join("points.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("frame,x,y"));
    assert_eq!(lines.count(), 1020);
    assert_eq!(json(&scene.join("gt.json"))["tracks"].as_array().unwrap().len(), 4);
    let manifest = json(&scene.join("manifest.json"));
    assert_eq!(manifest["command"], "gen");
}

#[test]
fn gen_without_targets_has_empty_truth() {
    let dir = tempfile::tempdir().unwrap();
    let scene = gen(dir.path(), &["--targets", "0", "--clutter", "10"]);
    assert!(json(&scene.join("gt.json"))["tracks"].as_array().unwrap().is_empty());
}

#[test]
fn repeated_runs_match_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(&dir.path().join("a"), &["--seed", "11", "--clutter", "15"]);
    let b = gen(&dir.path().join("b"), &["--seed", "11", "--clutter", "15"]);
    for f in ["points.csv", "gt.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
    }
    let outs: Vec<Vec<u8>> = [&a, &b]
        .iter()
        .map(|scene| {
            let out = scene.join("tracks.json");
            let code = run(&["detect", "--input", &s(&scene.join("points.csv")), "--out", &s(&out)]);
            assert_eq!(code, 0);
            assert!(scene.join("tracks.manifest.json").exists());
            std::fs::read(out).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn naive_over_the_guard_exits_with_guard_code() {
    let dir = tempfile::tempdir().unwrap();
    let scene = gen(dir.path(), &["--frames", "5", "--targets", "4", "--clutter", "396"]);
    let out = dir.path().join("naive.json");
    let code = run(&["detect", "--input", &s(&scene.join("points.csv")), "--method", "naive", "--out", &s(&out)]);
    assert_eq!(code, 4);
    assert!(!out.exists());
}

#[test]
fn threshold_selection_keeps_long_tracks_only() {
    let dir = tempfile::tempdir().unwrap();
    let scene = gen(dir.path(), &["--frames", "6", "--targets", "3", "--clutter", "25", "--seed", "5"]);
    let out = dir.path().join("t.json");
    let code =
        run(&["detect", "--input", &s(&scene.join("points.csv")), "--select", "thresh:3", "--out", &s(&out)]);
    assert_eq!(code, 0);
    let tracks = json(&out)["tracks"].as_array().unwrap().clone();
    assert!(!tracks.is_empty());
    assert!(tracks.iter().all(|t| t["point_ids"].as_array().unwrap().len() >= 4));
}

#[test]
fn eval_of_truth_against_itself_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let scene = gen(dir.path(), &["--seed", "8"]);
    let gt = s(&scene.join("gt.json"));
    let out = dir.path().join("m.json");
    assert_eq!(run(&["eval", "--pred", &gt, "--gt", &gt, "--points", &s(&scene.join("points.csv")), "--out", &s(&out)]), 0);
    let m = json(&out);
    for level in ["track", "point"] {
        for k in ["recall", "precision", "f1"] {
            assert_eq!(m[level][k].as_f64(), Some(1.0), "{level} {k}");
        }
    }
}

#[test]
fn eval_reproduces_the_count_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let mut rows = Vec::new();
    let mut tracks: Vec<Vec<usize>> = Vec::new();
    for k in 0..45 {
        let y = if k < 43 { 50.0 } else { 900.0 };
        tracks.push((0..3).map(|i| rows.len() + i).collect());
        for t in 1..=3u32 {
            rows.push((t, 100.0 * f64::from(k % 43) + f64::from(t), y));
        }
    }
    let points = PointSet::from_rows(rows).unwrap();
    let params = TrackParams { eps1: 2.0, eps2: 2.0, min_frames: 3 };
    let set = |ids: &[Vec<usize>]| TrackSet {
        tracks: ids.iter().map(|i| Track::fit(points.points(), i, false)).collect(),
        params: params.clone(),
    };
    let (pp, gp, dp) = (dir.path().join("p.csv"), dir.path().join("gt.json"), dir.path().join("pred.json"));
    save_points(&pp, &points).unwrap();
    save_tracks(&gp, &set(&tracks[..43])).unwrap();
    let mut pred = tracks[..42].to_vec();
    pred.extend_from_slice(&tracks[43..]);
    save_tracks(&dp, &set(&pred)).unwrap();
    let out = bin().args(["eval", "--pred", &s(&dp), "--gt", &s(&gp), "--points", &s(&pp)]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let m: Value = serde_json::from_slice(&out.stdout).unwrap();
    let c = &m["track"]["counts"];
    assert_eq!((c["tp"].as_u64(), c["fn"].as_u64(), c["fp"].as_u64()), (Some(42), Some(1), Some(2)));
    let r4 = |k: &str| (m["track"][k].as_f64().unwrap() * 1e4).round() / 1e4;
    assert_eq!((r4("recall"), r4("precision"), r4("f1")), (0.9767, 0.9545, 0.9655));
}

#[test]
fn bad_lambda_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let scene = gen(dir.path(), &[]);
    let gt = s(&scene.join("gt.json"));
    assert_eq!(run(&["eval", "--pred", &gt, "--gt", &gt, "--points", &s(&scene.join("points.csv")), "--lambda", "0"]), 2);
}

#[test]
fn malformed_points_are_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "frame,x\n1,2\n").unwrap();
    let out = bin().args(["detect", "--input", &s(&bad), "--out", &s(&dir.path().join("o.json"))]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains('y'));
}

#[test]
fn bench_writes_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let code = run(&[
        "bench", "--sizes", "60,120", "--methods", "ts,naive", "--repeats", "3", "--frames", "5", "--targets", "2",
        "--out", &s(&out),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("method,n,median_seconds,slope_fit"));
    assert_eq!(text.lines().count(), 1 + 4 + 2);
    assert!(dir.path().join("b.manifest.json").exists());
}
