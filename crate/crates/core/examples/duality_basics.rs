//! Points become lines and lines become points; incidence and vertical
//! distance survive the trip.

use trackswept::geometry::{
    dual_line_to_point, intersect_lines, line_through, line_to_dual_point, point_to_dual_line, signed_residual, Line2,
    Point2,
};

fn main() {
    let p = Point2::new(3.0, 7.0);
    let p_dual = point_to_dual_line(p);
    println!("point {p:?} -> dual line y = {} x + {}", p_dual.m, p_dual.c);
    assert_eq!(dual_line_to_point(p_dual), p);

    let l = Line2 { m: 2.0, c: 1.0 };
    let l_dual = line_to_dual_point(l);
    println!("line y = 2x + 1 -> dual point {l_dual:?}");
    // p lies on l exactly when l's dual point lies on p's dual line.
    println!("residual of p against l: {}", signed_residual(p, l));
    println!("dual residual:            {}", signed_residual(l_dual, p_dual));

    // Two points determine a line; their dual lines meet at its dual point.
    let q = Point2::new(5.0, 11.0);
    let through = line_through(p, q).unwrap();
    let meet = intersect_lines(point_to_dual_line(p), point_to_dual_line(q)).unwrap();
    println!("line through p and q: y = {} x + {}", through.m, through.c);
    println!("dual lines meet at {meet:?} = dual point {:?}", line_to_dual_point(through));
}
