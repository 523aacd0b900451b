//! Phase-one simplex for `A x = b, x >= 0`.
//!
//! Dense tableau, Bland's rule. Sized for the 2x2 scenario (16 columns, at most
//! nine rows); nothing here tries to be fast.

const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(crate) struct PhaseOne {
    pub x: Vec<f64>,
    /// Sum of the artificial variables at the optimum, an upper bound on the
    /// L1 distance between `A x` and `b`.
    pub infeasibility: f64,
}

pub(crate) fn phase_one(a: &[Vec<f64>], b: &[f64]) -> PhaseOne {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let rhs = width - 1;

    let mut tab = vec![vec![0.0; width]; m];
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            tab[i][j] = flip * a[i][j];
        }
        tab[i][n + i] = 1.0;
        tab[i][rhs] = flip * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs of the auxiliary objective: sum of artificials
    let mut cost = vec![0.0; width];
    for row in &tab {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[rhs] -= row[rhs];
    }

    // Bland's rule terminates; the bound only guards against NaN input.
    for _ in 0..10_000 {
        let Some(enter) = (0..n + m).find(|&j| cost[j] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if tab[i][enter] > PIVOT_EPS {
                let ratio = tab[i][rhs] / tab[i][enter];
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let best = tab[l][rhs] / tab[l][enter];
                        if ratio < best - PIVOT_EPS || (ratio <= best + PIVOT_EPS && basis[i] < basis[l]) {
                            Some(i)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
        }
        // unbounded is impossible for a sum of nonnegative artificials
        let Some(row) = leave else { break };
        pivot(&mut tab, &mut cost, row, enter);
        basis[row] = enter;
    }

    let mut x = vec![0.0; n];
    let mut infeasibility = 0.0;
    for (i, &var) in basis.iter().enumerate() {
        let value = tab[i][rhs].max(0.0);
        if var < n {
            x[var] = value;
        } else {
            infeasibility += value;
        }
    }
    PhaseOne { x, infeasibility }
}

fn pivot(tab: &mut [Vec<f64>], cost: &mut [f64], row: usize, col: usize) {
    let p = tab[row][col];
    for v in tab[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let f = r[col];
        if f != 0.0 {
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
    }
    let f = cost[col];
    if f != 0.0 {
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            *v -= f * pv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_a_feasible_point() {
        // x0 + x1 + x2 = 1, x0 - x1 = 0.2
        let a = vec![vec![1.0, 1.0, 1.0], vec![1.0, -1.0, 0.0]];
        let b = vec![1.0, 0.2];
        let sol = phase_one(&a, &b);
        assert!(sol.infeasibility < 1e-12);
        assert!((sol.x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((sol.x[0] - sol.x[1] - 0.2).abs() < 1e-12);
        assert!(sol.x.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn reports_infeasibility() {
        // x0 + x1 = 1, x0 + x1 = 2
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let sol = phase_one(&a, &[1.0, 2.0]);
        assert!((sol.infeasibility - 1.0).abs() < 1e-12);
        // x0 = -1 has no nonnegative solution
        let sol = phase_one(&[vec![1.0]], &[-1.0]);
        assert!((sol.infeasibility - 1.0).abs() < 1e-12);
    }
}
