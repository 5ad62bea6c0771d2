//! Minimax line fits and the three feasibility conditions of a track.

use trackswept::geometry::{chebyshev_fit, is_feasible, Point2, PointSet};

fn main() {
    let pts: Vec<Point2> = [(0.0, 0.0), (1.0, 1.5), (2.0, 1.0), (3.0, 3.5), (4.0, 4.0)]
        .iter()
        .map(|&(x, y)| Point2::new(x, y))
        .collect();
    let fit = chebyshev_fit(&pts).unwrap();
    println!(
        "best line y = {:.4} x + {:.4}, worst vertical residual {:.4}, support {:?}",
        fit.line.m, fit.line.c, fit.max_abs_residual, fit.support
    );

    // Same shape in x-y, but the last detection arrives far too late in x.
    let steady = PointSet::from_rows([(1, 10.0, 10.0), (2, 20.0, 20.5), (3, 30.0, 29.5), (4, 40.0, 40.0)]).unwrap();
    let jumpy = PointSet::from_rows([(1, 10.0, 10.0), (2, 20.0, 20.5), (3, 30.0, 29.5), (4, 70.0, 70.0)]).unwrap();
    for (name, ps) in [("steady", &steady), ("jumpy", &jumpy)] {
        let v = is_feasible(ps.points(), 2.0, 2.0);
        println!("{name}: one-per-frame {} collinear {} even pace {} -> feasible {}", v.c1, v.c2, v.c3, v.feasible());
    }
}
