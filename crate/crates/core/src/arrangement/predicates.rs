//! Exact comparison of vertex abscissae under a symbolic perturbation.
//!
//! Each boundary line's intercept is treated as `c + s*eta + delta_r`, where
//! `s` is +1 for an upper boundary and -1 for a lower one, `r` is the line's
//! rank in the initial order, and `1 >> eta >> delta_0 >> delta_1 >> ...`
//! are infinitesimals. The `eta` term widens every strip outward so that
//! closed-tolerance contacts open up into cells of positive area; the
//! `delta` terms make every vertex simple and every pair of vertex
//! abscissae distinct. Signs are evaluated with a floating-point filter and
//! fall back to exact integer arithmetic when the filter cannot decide.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::Float;

use super::OffsetLine;

/// Exact sign of `sum(sign * x * y)` over double-precision factor pairs,
/// computed on integer mantissas shifted to a common exponent.
fn exact_sign_of_products(terms: &[(i8, f64, f64)]) -> Ordering {
    let mut parts: Vec<(i128, i32)> = Vec::with_capacity(terms.len());
    for &(sign, x, y) in terms {
        let (mx, ex, sx) = x.integer_decode();
        let (my, ey, sy) = y.integer_decode();
        if mx == 0 || my == 0 {
            continue;
        }
        let prod = i128::from(mx) * i128::from(my) * i128::from(sx * sy * sign);
        parts.push((prod, i32::from(ex) + i32::from(ey)));
    }
    let Some(emin) = parts.iter().map(|p| p.1).min() else {
        return Ordering::Equal;
    };
    let total: BigInt = parts.iter().map(|&(v, e)| BigInt::from(v) << (e - emin) as usize).sum();
    total.sign().cmp(&Sign::NoSign)
}

fn flip(o: Ordering, negate: bool) -> Ordering {
    if negate {
        o.reverse()
    } else {
        o
    }
}

/// Compares the abscissa of vertex `i ∩ j` with that of vertex `k ∩ l`.
///
/// Both pairs must be non-parallel. Pairs may share a line. Only identical
/// pairs compare equal.
pub fn cmp_vertex_x(lines: &[OffsetLine], (i, j): (usize, usize), (k, l): (usize, usize)) -> Ordering {
    if (i == k && j == l) || (i == l && j == k) {
        return Ordering::Equal;
    }
    let (li, lj, lk, ll) = (&lines[i].line, &lines[j].line, &lines[k].line, &lines[l].line);
    // x_ij - x_kl = [(C_j - C_i) B - (C_l - C_k) A] / (A B), A = m_i - m_j,
    // B = m_k - m_l. Floating subtraction is sign-exact, so sign(AB) is too.
    let a = li.m - lj.m;
    let b = lk.m - ll.m;
    debug_assert!(a != 0.0 && b != 0.0, "parallel pair in vertex comparison");
    let negate = (a < 0.0) != (b < 0.0);

    let d1 = lj.c - li.c;
    let d3 = ll.c - lk.c;
    let n0 = d1 * b - d3 * a;
    let bound = 8.0 * f64::EPSILON * ((d1 * b).abs() + (d3 * a).abs());
    if n0.abs() > bound {
        return flip(n0.partial_cmp(&0.0).expect("finite"), negate);
    }
    if bound == 0.0 && n0 == 0.0 {
        // d1 and d3 both vanished exactly: the unperturbed numerator is zero.
    } else {
        // (c_j - c_i)(m_k - m_l) - (c_l - c_k)(m_i - m_j), expanded.
        let (ci, cj, ck, cl) = (li.c, lj.c, lk.c, ll.c);
        let (mi, mj, mk, ml) = (li.m, lj.m, lk.m, ll.m);
        let s = exact_sign_of_products(&[
            (1, cj, mk),
            (-1, cj, ml),
            (-1, ci, mk),
            (1, ci, ml),
            (-1, cl, mi),
            (1, cl, mj),
            (1, ck, mi),
            (-1, ck, mj),
        ]);
        if s != Ordering::Equal {
            return flip(s, negate);
        }
    }
    perturbed_sign(lines, (i, j), (k, l), negate)
}

/// Sign of the numerator once the unperturbed part is exactly zero.
#[cold]
fn perturbed_sign(lines: &[OffsetLine], (i, j): (usize, usize), (k, l): (usize, usize), negate: bool) -> Ordering {
    let m = |x: usize| lines[x].line.m;
    // A = m_i - m_j and B = m_k - m_l enter with integer weights.
    let weighted = |wa: i8, wb: i8| {
        exact_sign_of_products(&[(wb, 1.0, m(k)), (-wb, 1.0, m(l)), (-wa, 1.0, m(i)), (wa, 1.0, m(j))])
    };
    let s = |x: usize| lines[x].kind.sign() as i8;

    // eta coefficient: (s_j - s_i) B - (s_l - s_k) A, halved.
    let sg = weighted((s(l) - s(k)) / 2, (s(j) - s(i)) / 2);
    if sg != Ordering::Equal {
        return flip(sg, negate);
    }

    let mut ranks = [i, j, k, l];
    ranks.sort_unstable();
    let mut prev = usize::MAX;
    for r in ranks {
        if r == prev {
            continue;
        }
        prev = r;
        let wb = i8::from(r == j) - i8::from(r == i);
        let wa = i8::from(r == l) - i8::from(r == k);
        let sg = weighted(wa, wb);
        if sg != Ordering::Equal {
            return flip(sg, negate);
        }
    }
    Ordering::Equal
}
