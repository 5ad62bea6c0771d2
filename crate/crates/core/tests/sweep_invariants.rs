use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trackswept::arrangement::predicates::cmp_vertex_x;
use trackswept::arrangement::{plane_sweep, topo_sweep, LineKind, PlaneSweep, TopoSweep};
use trackswept::geometry::{minimax_residual, AxisPair, TimedPoint};

fn random_points(rng: &mut ChaCha8Rng, n: usize, frames: u32, span: f64, grid: bool) -> Vec<TimedPoint> {
    (0..n)
        .map(|id| {
            let (x, y) = if grid {
                (f64::from(rng.random_range(0..6)), f64::from(rng.random_range(0..6)))
            } else {
                (rng.random_range(0.0..span), rng.random_range(0.0..span))
            };
            TimedPoint { id, x, y, t: rng.random_range(1..=frames) }
        })
        .collect()
}

/// Every subset stabbed by a line through two strip corners, closed
/// tolerance. Maximal stabbable subsets are all among these.
fn vertex_subsets(points: &[TimedPoint], eps: f64) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].x == points[j].x {
                continue;
            }
            for si in [-eps, eps] {
                for sj in [-eps, eps] {
                    let m = (points[j].y + sj - points[i].y - si) / (points[j].x - points[i].x);
                    let c = points[i].y + si - m * points[i].x;
                    let set: Vec<usize> = points
                        .iter()
                        .filter(|p| (p.y - m * p.x - c).abs() <= eps + 1e-9)
                        .map(|p| p.id)
                        .collect();
                    out.push(set);
                }
            }
        }
    }
    out
}

fn distinct_frames(points: &[TimedPoint], ids: &[usize]) -> usize {
    let mut f: Vec<u32> = ids.iter().map(|&i| points[i].t).collect();
    f.sort_unstable();
    f.dedup();
    f.len()
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

#[test]
fn topo_and_plane_sweeps_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..300 {
        let grid = case % 3 == 0;
        let n = rng.random_range(1..=18);
        let pts = random_points(&mut rng, n, 4, 20.0, grid);
        let eps = if grid { 1.0 } else { rng.random_range(0.3..3.0) };
        let min_frames = rng.random_range(1..=3);
        let a = topo_sweep(&pts, AxisPair::XY, eps, min_frames).unwrap();
        let b = plane_sweep(&pts, AxisPair::XY, eps, min_frames).unwrap();
        let ids_a: Vec<_> = a.iter().map(|s| s.point_ids.clone()).collect();
        let ids_b: Vec<_> = b.iter().map(|s| s.point_ids.clone()).collect();
        assert_eq!(ids_a, ids_b, "case {case}");
    }
}

#[test]
fn every_pair_of_non_parallel_lines_is_swept_once() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=40 {
        let pts = random_points(&mut rng, n, 3, 100.0, false);
        let mut ts = TopoSweep::new(&pts, AxisPair::XY, 1.0, 1).unwrap();
        while ts.step().unwrap().is_some() {}
        assert_eq!(ts.steps(), 2 * n * n - 2 * n, "n={n}");
        let mut ps = PlaneSweep::new(&pts, AxisPair::XY, 1.0, 1).unwrap();
        while ps.step().unwrap().is_some() {}
        assert_eq!(ps.steps(), 2 * n * n - 2 * n);
    }
    // Shared abscissae leave more parallel pairs uncrossed.
    for case in 0..50 {
        let pts = random_points(&mut rng, 12, 3, 0.0, true);
        let lines = 2 * pts.len();
        let parallel: usize = (0..pts.len())
            .map(|i| 2 * (0..pts.len()).filter(|&j| pts[j].x == pts[i].x).count() - 1)
            .sum();
        let mut ts = TopoSweep::new(&pts, AxisPair::XY, 1.0, 1).unwrap();
        while ts.step().unwrap().is_some() {}
        assert_eq!(ts.steps(), lines * (lines - 1) / 2 - parallel, "case {case}");
        // The final cut is the initial one reversed, up to parallel classes.
        let order = ts.order();
        let slopes: Vec<f64> = order.iter().map(|&l| ts.lines()[l as usize].line.m).collect();
        assert!(slopes.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn right_endpoints_are_next_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..60 {
        let grid = case % 2 == 0;
        let n = rng.random_range(2..=9);
        let pts = random_points(&mut rng, n, 3, 10.0, grid);
        let mut ts = TopoSweep::new(&pts, AxisPair::XY, 1.0, 1).unwrap();
        loop {
            let lines = ts.lines().to_vec();
            let lefts: Vec<Option<usize>> = ts.left_endpoints().collect();
            let rights: Vec<Option<usize>> = ts.right_endpoints().collect();
            for l in 0..lines.len() {
                let mut best: Option<usize> = None;
                for k in 0..lines.len() {
                    if k == l || lines[k].line.m == lines[l].line.m {
                        continue;
                    }
                    if let Some(p) = lefts[l] {
                        if cmp_vertex_x(&lines, (l, k), (l, p)) != Ordering::Greater {
                            continue;
                        }
                    }
                    if best.is_none_or(|b| cmp_vertex_x(&lines, (l, k), (l, b)) == Ordering::Less) {
                        best = Some(k);
                    }
                }
                assert_eq!(rights[l], best, "case {case} line {l} after {} steps", ts.steps());
            }
            if ts.step().unwrap().is_none() {
                break;
            }
        }
    }
}

#[test]
fn cells_carry_the_consensus_of_their_interior() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..40 {
        let n = rng.random_range(2..=14);
        let pts = random_points(&mut rng, n, 4, 30.0, false);
        let eps = 2.0;
        let mut ts = TopoSweep::new(&pts, AxisPair::XY, eps, 1).unwrap();
        let lines = ts.lines().to_vec();
        let x_of = |i: usize, j: usize| {
            (lines[j].line.c - lines[i].line.c) / (lines[i].line.m - lines[j].line.m)
        };
        while let Some(ev) = ts.step().unwrap() {
            let (a, b) = (ev.upper, ev.lower);
            let xv = x_of(a, b);
            let mut h: f64 = 1.0;
            for k in 0..lines.len() {
                for l in [a, b] {
                    if k != l && lines[k].line.m != lines[l].line.m {
                        let x = x_of(l, k);
                        if x > xv + 1e-12 {
                            h = h.min(x - xv);
                        }
                    }
                }
            }
            let px = xv + 0.5 * h;
            let py = 0.5 * (lines[a].line.eval(px) + lines[b].line.eval(px));
            let region = ev.position + 1;
            let mut frames = std::collections::BTreeSet::new();
            for (i, p) in pts.iter().enumerate() {
                let inside = (p.y + p.x * px - py).abs() <= eps;
                assert_eq!(ts.consensus().contains(region, i), inside, "case {case} point {i}");
                if inside {
                    frames.insert(p.t);
                }
            }
            assert_eq!(ts.consensus().frames_in(region), frames.len());
        }
    }
}

#[test]
fn reports_are_sound_and_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for case in 0..300 {
        let grid = case % 4 == 0;
        let n = rng.random_range(1..=16);
        let pts = random_points(&mut rng, n, 4, 15.0, grid);
        let eps = if grid { 0.5 } else { rng.random_range(0.2..2.5) };
        let min_frames = rng.random_range(1..=3);
        let found = topo_sweep(&pts, AxisPair::XY, eps, min_frames).unwrap();
        for s in &found {
            let members: Vec<TimedPoint> = s.point_ids.iter().map(|&i| pts[i]).collect();
            assert!(minimax_residual(&members, AxisPair::XY) <= eps + 1e-9, "case {case}");
            assert!(s.residual <= eps + 1e-9);
            assert!(s.frames >= min_frames);
        }
        let mut candidates = vertex_subsets(&pts, eps);
        // Points sharing one abscissa with nothing else stabbable.
        for p in &pts {
            candidates.push(vec![p.id]);
        }
        for cand in candidates {
            if distinct_frames(&pts, &cand) < min_frames {
                continue;
            }
            assert!(
                found.iter().any(|s| is_subset(&cand, &s.point_ids)),
                "case {case}: {cand:?} not covered by {:?}",
                found.iter().map(|s| &s.point_ids).collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn single_frame_yields_nothing_with_three_frame_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pts = random_points(&mut rng, 100, 1, 50.0, false);
    assert!(topo_sweep(&pts, AxisPair::XY, 2.0, 3).unwrap().is_empty());
}

#[test]
fn collinear_triple_is_one_structure() {
    let pts: Vec<TimedPoint> =
        (0..3).map(|i| TimedPoint { id: i, x: i as f64, y: 2.0 * i as f64, t: i as u32 + 1 }).collect();
    let found = topo_sweep(&pts, AxisPair::XY, 1.0, 3).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].point_ids, vec![0, 1, 2]);
    assert!(found[0].residual < 1e-12);
}

#[test]
fn initial_order_is_top_to_bottom() {
    let pts = [TimedPoint { id: 0, x: 2.0, y: 0.0, t: 1 }, TimedPoint { id: 1, x: 2.0, y: 10.0, t: 1 }];
    let ts = TopoSweep::new(&pts, AxisPair::XY, 1.0, 1).unwrap();
    let kinds: Vec<LineKind> = ts.order().iter().map(|&l| ts.lines()[l as usize].kind).collect();
    assert_eq!(kinds, vec![LineKind::Upper, LineKind::Lower, LineKind::Upper, LineKind::Lower]);
}
