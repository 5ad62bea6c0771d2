//! Step a topological sweep by hand and watch the consensus of each cell.

use trackswept::arrangement::TopoSweep;
use trackswept::geometry::{AxisPair, PointSet};

fn main() {
    let ps = PointSet::from_rows([
        (1, 0.0, 0.0),
        (2, 10.0, 10.0),
        (3, 20.0, 20.0),
        (1, 5.0, 30.0),
        (2, 13.0, -4.0),
        (3, 30.0, 2.0),
    ])
    .unwrap();
    let mut sweep = TopoSweep::new(ps.points(), AxisPair::XY, 1.0, 3).unwrap();
    println!("{} offset lines, {} regions per cut", sweep.lines().len(), sweep.consensus().regions());
    let mut best = 0;
    while let Some(ev) = sweep.step().unwrap() {
        let region = ev.position + 1;
        let members: Vec<usize> = sweep.consensus().members(region).collect();
        if members.len() > best || ev.reported {
            best = best.max(members.len());
            println!(
                "step {:3}: swap at {:2}, cell members {:?}, frames {}{}",
                sweep.steps(),
                ev.position,
                members,
                sweep.consensus().frames_in(region),
                if ev.reported { "  <- reported" } else { "" }
            );
        }
    }
    println!("total steps {}", sweep.steps());
    for s in sweep.into_structures() {
        println!("structure {:?} frames {} residual {:.3}", s.point_ids, s.frames, s.residual);
    }
}
