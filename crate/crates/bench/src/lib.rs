//! Inputs shared by the criterion benches.

use ctxbell::{CorrelationTable, TermDocMatrix};

/// Deterministic spread of joints-only tables across [-1, 1]^4.
pub fn table_grid(per_axis: usize) -> Vec<CorrelationTable> {
    let step = 2.0 / (per_axis.max(2) - 1) as f64;
    let axis: Vec<f64> = (0..per_axis.max(2)).map(|i| -1.0 + i as f64 * step).collect();
    let mut out = Vec::new();
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                for &d in &axis {
                    out.push(CorrelationTable::new([[a, b], [c, d]]).expect("grid stays in range"));
                }
            }
        }
    }
    out
}

/// Banded `n x n` count matrix.
pub fn banded_matrix(n: usize) -> TermDocMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i.abs_diff(j) <= 1 {
                        (1 + (i + j) % 3) as f64
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    TermDocMatrix::from_dense(&rows).expect("nonzero matrix")
}
