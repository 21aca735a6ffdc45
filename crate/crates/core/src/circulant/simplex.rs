//! Dense tableau simplex for `max cᵀx  s.t.  Ax ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! The origin is feasible, so no phase one is needed. Bland's rule prevents
//! cycling on the degenerate vertices circulant feasibility produces.

const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Unbounded,
}

pub(crate) fn maximize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> LpOutcome {
    let m = a.len();
    let nv = c.len();
    debug_assert!(b.iter().all(|&v| v >= 0.0));
    let width = nv + m + 1;
    // rows 0..m constraints, row m objective (reduced costs, negated)
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..nv].copy_from_slice(&a[i]);
        t[i][nv + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..nv {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    for _ in 0..10_000 {
        let Some(col) = (0..nv + m).find(|&j| t[m][j] < -PIVOT_EPS) else {
            break;
        };
        let mut row: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][col] > PIVOT_EPS {
                let ratio = t[i][width - 1] / t[i][col];
                let better = ratio < best - 1e-15
                    || (ratio <= best + 1e-15 && row.is_some_and(|r| basis[i] < basis[r]));
                if row.is_none() || better {
                    best = ratio;
                    row = Some(i);
                }
            }
        }
        let Some(row) = row else {
            return LpOutcome::Unbounded;
        };
        pivot(&mut t, row, col);
        basis[row] = col;
    }

    let mut x = vec![0.0; nv];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nv {
            x[bv] = t[i][width - 1];
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { x, value }
}

fn pivot(t: &mut [Vec<f64>], row: usize, col: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let factor = r[col];
        if factor != 0.0 {
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let a = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]];
        let b = vec![4.0, 12.0, 18.0];
        match maximize(&a, &b, &[3.0, 5.0]) {
            LpOutcome::Optimal { x, value } => {
                assert!((value - 36.0).abs() < 1e-12);
                assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] - 6.0).abs() < 1e-12);
            }
            LpOutcome::Unbounded => panic!("bounded problem"),
        }
    }

    #[test]
    fn detects_unbounded() {
        let a = vec![vec![1.0, -1.0]];
        assert_eq!(maximize(&a, &[1.0], &[0.0, 1.0]), LpOutcome::Unbounded);
    }
}
