//! Max-min allocation over the scaled simplex:
//!
//! ```text
//! maximize   min_k (H p)_k
//! subject to sum(p) = budget, p >= 0
//! ```
//!
//! with `H` entrywise non-negative. Solved exactly as the LP
//! `max t s.t. t - (H p)_k <= 0, sum(p) <= budget` by a dense tableau
//! simplex with Bland's rule. All right-hand sides are non-negative, so the
//! slack basis is feasible and no phase one is needed.

const EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MaxMinSolution {
    pub powers: Vec<f64>,
    pub value: f64,
}

/// `min_k (H p)_k`.
pub fn objective(h: &[Vec<f64>], p: &[f64]) -> f64 {
    h.iter()
        .map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

pub fn solve(h: &[Vec<f64>], budget: f64) -> MaxMinSolution {
    let m = h.len();
    assert!(m > 0, "max-min needs at least one row");
    assert!(h.iter().all(|r| r.len() == m), "gain matrix must be square");
    if m == 1 {
        let p = vec![budget];
        return MaxMinSolution { value: objective(h, &p), powers: p };
    }

    let scale = h.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    assert!(scale > 0.0 && scale.is_finite(), "gain matrix must have a positive entry");

    // variables: p_0..p_{m-1}, t; slacks s_0..s_m
    let n_vars = m + 1;
    let n_cols = n_vars + m + 1;
    let rows = m + 1;
    let mut tab = vec![vec![0.0; n_cols + 1]; rows];
    for k in 0..m {
        for j in 0..m {
            tab[k][j] = -h[k][j] / scale;
        }
        tab[k][m] = 1.0;
        tab[k][n_vars + k] = 1.0;
    }
    for j in 0..m {
        tab[m][j] = 1.0;
    }
    tab[m][n_vars + m] = 1.0;
    tab[m][n_cols] = 1.0;
    let mut basis: Vec<usize> = (0..rows).map(|i| n_vars + i).collect();
    let mut reduced = vec![0.0; n_cols + 1];
    reduced[m] = 1.0;

    loop {
        let Some(enter) = (0..n_cols).find(|&j| reduced[j] > EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..rows {
            let a = tab[i][enter];
            if a > EPS {
                let ratio = tab[i][n_cols] / a;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best - EPS || (ratio <= best + EPS && basis[i] < basis[l])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        // the feasible set is bounded
        let r = leave.expect("max-min LP is bounded");
        let piv = tab[r][enter];
        for v in tab[r].iter_mut() {
            *v /= piv;
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != r {
                let f = row[enter];
                if f != 0.0 {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
        let f = reduced[enter];
        for (x, y) in reduced.iter_mut().zip(&pivot_row) {
            *x -= f * y;
        }
        basis[r] = enter;
    }

    let mut p = vec![0.0; m];
    for (i, &b) in basis.iter().enumerate() {
        if b < m {
            p[b] = tab[i][n_cols].max(0.0);
        }
    }
    // H >= 0, so spending any leftover budget never lowers the objective
    let total: f64 = p.iter().sum();
    let p: Vec<f64> = if total > 0.0 {
        p.iter().map(|x| x / total * budget).collect()
    } else {
        vec![budget / m as f64; m]
    };
    MaxMinSolution { value: objective(h, &p), powers: p }
}
