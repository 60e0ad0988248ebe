//! Exact LP feasibility by phase-one simplex over the rationals.
//!
//! The system is brought into the form `A y = b`, `y ≥ 0`, `b ≥ 0` (free
//! variables are split, upper bounds get slack columns, rows are negated
//! as needed) and the sum of one artificial variable per row is minimised.
//! The tableau is stored sparsely by rows; an artificial variable that
//! leaves the basis is discarded, so artificial columns are never stored.
//! Entering columns follow Bland's rule, which rules out cycling.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinearSystem;

type SparseRow = Vec<(usize, BigRational)>;

/// `dst - f · src` for sorted sparse rows.
fn axpy(dst: &SparseRow, src: &SparseRow, f: &BigRational) -> SparseRow {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = j == src.len() || (i < dst.len() && dst[i].0 < src[j].0);
        let take_src = i == dst.len() || (j < src.len() && src[j].0 < dst[i].0);
        if take_dst {
            out.push(dst[i].clone());
            i += 1;
        } else if take_src {
            out.push((src[j].0, -(f * &src[j].1)));
            j += 1;
        } else {
            let v = &dst[i].1 - f * &src[j].1;
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry(row: &SparseRow, c: usize) -> Option<&BigRational> {
    row.binary_search_by_key(&c, |(k, _)| *k).ok().map(|p| &row[p].1)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Basic {
    Column(usize),
    Artificial(usize),
}

/// Decides feasibility exactly. A returned witness satisfies every row and
/// bound of `system`.
pub fn lp_feasible(system: &LinearSystem) -> Option<Vec<BigRational>> {
    // Column layout: the positive part of every variable, then negative
    // parts of free variables, then upper-bound slacks.
    let vars = system.variables();
    let mut negative = vec![None; vars.len()];
    let mut cols = vars.len();
    for (j, v) in vars.iter().enumerate() {
        if !v.nonnegative {
            negative[j] = Some(cols);
            cols += 1;
        }
    }
    let mut rows: Vec<SparseRow> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    let expand = |coeffs: &[(usize, BigRational)]| -> SparseRow {
        let mut r: SparseRow = Vec::with_capacity(coeffs.len());
        for (v, c) in coeffs {
            r.push((*v, c.clone()));
            if let Some(n) = negative[*v] {
                r.push((n, -c.clone()));
            }
        }
        r.sort_by_key(|(k, _)| *k);
        r
    };
    for r in system.rows() {
        rows.push(expand(&r.coeffs));
        rhs.push(r.rhs.clone());
    }
    for (j, v) in vars.iter().enumerate() {
        if v.at_most_one {
            let mut r = expand(&[(j, BigRational::one())]);
            r.push((cols, BigRational::one()));
            cols += 1;
            rows.push(r);
            rhs.push(BigRational::one());
        }
    }
    let mut keep_rows = Vec::new();
    let mut keep_rhs = Vec::new();
    for (r, b) in rows.into_iter().zip(rhs) {
        if r.is_empty() {
            if !b.is_zero() {
                return None;
            }
            continue;
        }
        if b.is_negative() {
            keep_rows.push(r.into_iter().map(|(k, c)| (k, -c)).collect());
            keep_rhs.push(-b);
        } else {
            keep_rows.push(r);
            keep_rhs.push(b);
        }
    }
    let y = phase_one(keep_rows, keep_rhs, cols)?;
    let x: Vec<BigRational> = (0..vars.len())
        .map(|j| match negative[j] {
            Some(n) => &y[j] - &y[n],
            None => y[j].clone(),
        })
        .collect();
    debug_assert!(system.check(&x));
    Some(x)
}

/// Minimises the sum of artificials for `A y = b`, `y ≥ 0`, `b ≥ 0`;
/// returns a feasible `y` when the minimum is zero.
fn phase_one(mut rows: Vec<SparseRow>, mut rhs: Vec<BigRational>, cols: usize) -> Option<Vec<BigRational>> {
    let m = rows.len();
    let mut basis: Vec<Basic> = (0..m).map(Basic::Artificial).collect();
    // Reduced costs of the structural columns: d_j = -Σ_i A_ij.
    let mut cost: SparseRow = Vec::new();
    for r in &rows {
        cost = axpy(&cost, r, &BigRational::one());
    }
    loop {
        let Some(&(c, _)) = cost.iter().find(|(_, d)| d.is_negative()) else {
            break;
        };
        // Ratio test, ties broken by the smallest basic variable.
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if let Some(a) = entry(&rows[i], c) {
                if a.is_positive() {
                    let ratio = &rhs[i] / a;
                    let better = match &leave {
                        None => true,
                        Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
        }
        let (p, _) = leave.expect("phase one is bounded below");
        let pivot = entry(&rows[p], c).expect("pivot entry").clone();
        if !pivot.is_one() {
            for (_, v) in rows[p].iter_mut() {
                *v /= &pivot;
            }
            rhs[p] /= &pivot;
        }
        let prow = rows[p].clone();
        let pb = rhs[p].clone();
        for i in 0..m {
            if i != p {
                if let Some(f) = entry(&rows[i], c).cloned() {
                    rows[i] = axpy(&rows[i], &prow, &f);
                    rhs[i] -= &f * &pb;
                }
            }
        }
        let f = entry(&cost, c).expect("entering cost").clone();
        cost = axpy(&cost, &prow, &f);
        basis[p] = Basic::Column(c);
    }
    if basis
        .iter()
        .zip(&rhs)
        .any(|(b, v)| matches!(b, Basic::Artificial(_)) && !v.is_zero())
    {
        return None;
    }
    let mut y = vec![BigRational::zero(); cols];
    for (b, v) in basis.iter().zip(rhs) {
        if let Basic::Column(j) = b {
            y[*j] = v;
        }
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn substitution_example() {
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", false, false);
        let y = s.add_variable("y", false, false);
        s.add_row(vec![(x, q(1, 1))], q(1, 1)).unwrap();
        s.add_row(vec![(x, q(2, 1)), (y, q(-1, 1))], q(0, 1)).unwrap();
        let w = lp_feasible(&s).unwrap();
        assert_eq!(w, vec![q(1, 1), q(2, 1)]);
    }

    #[test]
    fn overdetermined_example() {
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", true, false);
        let y = s.add_variable("y", true, false);
        s.add_row(vec![(x, q(1, 1)), (y, q(1, 1))], q(1, 1)).unwrap();
        s.add_row(vec![(x, q(1, 1))], q(1, 1)).unwrap();
        s.add_row(vec![(y, q(1, 1))], q(1, 1)).unwrap();
        assert!(lp_feasible(&s).is_none());
    }

    #[test]
    fn bounds_are_enforced() {
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", true, true);
        s.add_row(vec![(x, q(2, 1))], q(3, 1)).unwrap();
        assert!(lp_feasible(&s).is_none());
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", true, false);
        s.add_row(vec![(x, q(1, 1))], q(-1, 2)).unwrap();
        assert!(lp_feasible(&s).is_none());
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", false, true);
        s.add_row(vec![(x, q(1, 1))], q(-1, 2)).unwrap();
        assert_eq!(lp_feasible(&s).unwrap(), vec![q(-1, 2)]);
    }

    #[test]
    fn fractional_witness() {
        // x + y = 1, x - y = 0 → x = y = 1/2.
        let mut s = LinearSystem::new();
        let x = s.add_variable("x", true, true);
        let y = s.add_variable("y", true, true);
        s.add_row(vec![(x, q(1, 1)), (y, q(1, 1))], q(1, 1)).unwrap();
        s.add_row(vec![(x, q(1, 1)), (y, q(-1, 1))], q(0, 1)).unwrap();
        assert_eq!(lp_feasible(&s).unwrap(), vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn redundant_rows_and_empty_systems() {
        let mut s = LinearSystem::new();
        assert_eq!(lp_feasible(&s), Some(vec![]));
        let x = s.add_variable("x", true, false);
        s.add_row(vec![(x, q(1, 1))], q(2, 1)).unwrap();
        s.add_row(vec![(x, q(2, 1))], q(4, 1)).unwrap();
        s.add_row(vec![], q(0, 1)).unwrap();
        assert_eq!(lp_feasible(&s).unwrap(), vec![q(2, 1)]);
        s.add_row(vec![], q(1, 1)).unwrap();
        assert!(lp_feasible(&s).is_none());
    }
}
