//! Integer linear systems via Smith normal form.
//!
//! `A x = b` over `Z` is diagonalised as `D = U A V` with unimodular `U`,
//! `V`; the system is solvable iff every `(U b)_i` is divisible by `d_i`
//! (and vanishes past the rank), and then `x = V y` with `y_i = (U b)_i / d_i`.
//! A system over `Z_n` is embedded into `Z` by giving every row a fresh
//! slack variable with coefficient `n`.
//!
//! Pivots are chosen of minimal absolute value to keep entries small;
//! entries are arbitrary-precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{GroupSystem, Modulus};

/// A solution of the system (reduced into `[0, n)` for `Z_n`), or `None`.
pub fn solve_group_system(s: &GroupSystem) -> Option<Vec<BigInt>> {
    let vars = s.variables().len();
    let rows = s.rows();
    let slack = matches!(s.modulus(), Modulus::Cyclic(_));
    let cols = vars + if slack { rows.len() } else { 0 };
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); cols]; rows.len()];
    let mut b: Vec<BigInt> = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        for (v, c) in &r.coeffs {
            a[i][*v] += c;
        }
        if let Modulus::Cyclic(n) = s.modulus() {
            a[i][vars + i] = BigInt::from(n);
        }
        b.push(r.rhs.clone());
    }
    let x = solve_integer(a, b, cols)?;
    let mut x: Vec<BigInt> = x.into_iter().take(vars).collect();
    if let Modulus::Cyclic(n) = s.modulus() {
        let n = BigInt::from(n);
        for v in &mut x {
            *v = v.mod_floor(&n);
        }
    }
    debug_assert!(s.check(&x));
    Some(x)
}

/// Solves `A x = b` over `Z` for an `r × c` matrix.
fn solve_integer(mut a: Vec<Vec<BigInt>>, mut b: Vec<BigInt>, cols: usize) -> Option<Vec<BigInt>> {
    let rows = a.len();
    // `v` accumulates the column operations: x = V y.
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let t = rank;
        let Some((pr, pc)) = min_entry(&a, t..rows, t..cols) else {
            break;
        };
        swap_rows(&mut a, &mut b, t, pr);
        swap_cols(&mut a, &mut v, t, pc);
        loop {
            // Clear column t below the pivot and row t right of it, keeping
            // remainders; a nonzero remainder is smaller than the pivot.
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0].iter_mut().zip(&top[t]).skip(t) {
                        *x -= &q * y;
                    }
                    let bt = b[t].clone();
                    b[i] -= &q * bt;
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let y = row[t].clone();
                        row[j] -= &q * y;
                    }
                    for row in v.iter_mut() {
                        let y = row[t].clone();
                        row[j] -= &q * y;
                    }
                }
            }
            let row_clear = (t + 1..cols).all(|j| a[t][j].is_zero());
            let col_clear = (t + 1..rows).all(|i| a[i][t].is_zero());
            if row_clear && col_clear {
                break;
            }
            // Move the smallest leftover of row/column t into the pivot.
            let mut best = (t, t);
            for i in t + 1..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            swap_rows(&mut a, &mut b, t, best.0);
            swap_cols(&mut a, &mut v, t, best.1);
        }
        rank += 1;
    }
    if b[rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rank {
        let (q, r) = b[i].div_rem(&a[i][i]);
        if !r.is_zero() {
            return None;
        }
        y[i] = q;
    }
    Some(
        v.iter()
            .map(|row| row.iter().zip(&y).map(|(c, yi)| c * yi).sum())
            .collect(),
    )
}

fn min_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_rows(a: &mut [Vec<BigInt>], b: &mut [BigInt], i: usize, j: usize) {
    a.swap(i, j);
    b.swap(i, j);
}

fn swap_cols(a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(modulus: Modulus, n: usize, rows: &[(&[i64], i64)]) -> GroupSystem {
        let mut s = GroupSystem::new(modulus);
        for i in 0..n {
            s.add_variable(format!("x{i}"));
        }
        for (coeffs, rhs) in rows {
            let c = coeffs.iter().enumerate().map(|(i, &c)| (i, BigInt::from(c))).collect();
            s.add_row(c, BigInt::from(*rhs)).unwrap();
        }
        s
    }

    #[test]
    fn small_examples() {
        let s = system(Modulus::Integers, 2, &[(&[1, 1], 1)]);
        assert!(s.check(&solve_group_system(&s).unwrap()));
        assert!(solve_group_system(&system(Modulus::Integers, 1, &[(&[2], 1)])).is_none());
        let z3 = solve_group_system(&system(Modulus::Cyclic(3), 1, &[(&[2], 1)])).unwrap();
        assert_eq!(z3, vec![BigInt::from(2)]);
        assert!(solve_group_system(&system(Modulus::Cyclic(4), 1, &[(&[2], 1)])).is_none());
        // 6x + 10y + 15z = 1 needs all three coefficients.
        let s = system(Modulus::Integers, 3, &[(&[6, 10, 15], 1)]);
        assert!(s.check(&solve_group_system(&s).unwrap()));
        // Inconsistent rows.
        assert!(solve_group_system(&system(Modulus::Integers, 2, &[(&[1, 1], 1), (&[2, 2], 3)])).is_none());
        // Empty system and empty rows.
        assert_eq!(solve_group_system(&system(Modulus::Integers, 0, &[])), Some(vec![]));
        assert!(solve_group_system(&system(Modulus::Integers, 1, &[(&[0], 1)])).is_none());
    }

    #[test]
    fn agrees_with_enumeration_on_small_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(1..=5u64);
            let vars = rng.gen_range(1..=3usize);
            let rows: Vec<(Vec<i64>, i64)> = (0..rng.gen_range(1..=3))
                .map(|_| ((0..vars).map(|_| rng.gen_range(-3..=3)).collect(), rng.gen_range(-3..=3)))
                .collect();
            let rows_ref: Vec<(&[i64], i64)> = rows.iter().map(|(c, b)| (c.as_slice(), *b)).collect();
            let s = system(Modulus::Cyclic(n), vars, &rows_ref);
            let brute = (0..n.pow(vars as u32)).any(|code| {
                let x: Vec<BigInt> = (0..vars).map(|i| BigInt::from(code / n.pow(i as u32) % n)).collect();
                s.check(&x)
            });
            assert_eq!(solve_group_system(&s).is_some(), brute);
        }
    }
}
