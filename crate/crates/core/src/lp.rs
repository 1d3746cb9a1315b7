//! Exact phase-one simplex over the rationals.
//!
//! Only feasibility of `A λ = b, λ ≥ 0` is needed (`b ≥ 0`), which is all the
//! half-space test asks for.

use alloc::vec;
use alloc::vec::Vec;
use num_rational::Ratio;

type Q = Ratio<i128>;

/// Decides whether `rows · λ = rhs` has a solution with `λ ≥ 0`.
///
/// `rows` is a dense `m × n` integer matrix and `rhs` must be nonnegative.
pub fn feasible(rows: &[Vec<i64>], rhs: &[i64]) -> bool {
    let m = rows.len();
    if m == 0 {
        return true;
    }
    let n = rows[0].len();
    assert!(rhs.iter().all(|&b| b >= 0), "rhs must be nonnegative");
    // Columns: n originals, m artificials, then rhs.
    let width = n + m + 1;
    let zero = Q::from_integer(0);
    let one = Q::from_integer(1);
    let mut t: Vec<Vec<Q>> = vec![vec![zero; width]; m + 1];
    for i in 0..m {
        for j in 0..n {
            t[i][j] = Q::from_integer(rows[i][j] as i128);
        }
        t[i][n + i] = one;
        t[i][width - 1] = Q::from_integer(rhs[i] as i128);
    }
    // Objective row: minimize Σ artificials, expressed in nonbasic terms.
    for j in 0..width {
        let mut s = zero;
        for row in t.iter().take(m) {
            s += row[j];
        }
        t[m][j] = if (n..n + m).contains(&j) { zero } else { s };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        // Bland: smallest index with positive reduced gain.
        let Some(enter) = (0..n + m).find(|&j| t[m][j] > zero) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter] > zero {
                let r = t[i][width - 1] / t[i][enter];
                match &leave {
                    Some((li, lr)) if r > *lr || (r == *lr && basis[i] > basis[*li]) => {}
                    _ => leave = Some((i, r)),
                }
            }
        }
        let Some((pr, _)) = leave else {
            // Unbounded in phase one cannot happen; objective is bounded below by 0.
            break;
        };
        let piv = t[pr][enter];
        for x in t[pr].iter_mut() {
            *x /= piv;
        }
        let pivot_row = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != pr && row[enter] != zero {
                let f = row[enter];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * *p;
                }
            }
        }
        basis[pr] = enter;
    }
    t[m][width - 1] == zero
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_systems() {
        // λ1 − λ2 = 0, λ1 + λ2 = 1: feasible.
        assert!(feasible(&[vec![1, -1], vec![1, 1]], &[0, 1]));
        // λ1 + λ2 = 0, λ1 + λ2 = 1: infeasible.
        assert!(!feasible(&[vec![1, 1], vec![1, 1]], &[0, 1]));
        // 2λ = 1.
        assert!(feasible(&[vec![2]], &[1]));
    }
}
