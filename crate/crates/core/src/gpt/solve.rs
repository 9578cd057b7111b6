//! Dense elimination for the small barycentric systems
//! `[v_s; 1] μ = [x; 1]`.

/// Pivots below this (relative to the largest coefficient) count as zero.
pub const PIVOT_TOL: f64 = 1e-10;
/// Max residual for a solution to count as consistent.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Builds the `(d+1) × k` matrix whose columns are the chosen points with a
/// trailing 1.
fn augmented_columns(points: &[&[f64]]) -> Vec<Vec<f64>> {
    let d = points.first().map_or(0, |p| p.len());
    (0..=d)
        .map(|r| {
            points
                .iter()
                .map(|p| if r < d { p[r] } else { 1.0 })
                .collect()
        })
        .collect()
}

/// Row echelon form with partial pivoting; returns the rank and the
/// reduced rows (each row carries the rhs in its last slot, if present).
fn eliminate(rows: &mut [Vec<f64>], ncols: usize) -> usize {
    let scale = rows
        .iter()
        .flat_map(|r| r[..ncols].iter())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = PIVOT_TOL * scale;
    let mut rank = 0;
    for c in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let (best, val) = (rank..rows.len())
            .map(|r| (r, rows[r][c].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val < tol {
            continue;
        }
        rows.swap(rank, best);
        for r in (rank + 1)..rows.len() {
            let factor = rows[r][c] / rows[rank][c];
            if factor != 0.0 {
                let (top, bottom) = rows.split_at_mut(r);
                for (dst, src) in bottom[0].iter_mut().zip(&top[rank]).skip(c) {
                    *dst -= factor * src;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the `(d+1) × k` matrix `[points; 1]`; equals `k` iff the points
/// are affinely independent.
pub fn affine_rank(points: &[&[f64]]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let mut rows = augmented_columns(points);
    let k = points.len();
    eliminate(&mut rows, k)
}

/// Unique `μ` with `Σ μ_j p_j = x`, `Σ μ_j = 1`, if the points are affinely
/// independent and the system is consistent. Signs are not checked.
pub fn barycentric_weights(points: &[&[f64]], x: &[f64]) -> Option<Vec<f64>> {
    let k = points.len();
    if k == 0 {
        return None;
    }
    let a = augmented_columns(points);
    let mut rows: Vec<Vec<f64>> = a
        .iter()
        .zip(x.iter().copied().chain(std::iter::once(1.0)))
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    if eliminate(&mut rows, k) < k {
        return None;
    }
    // Rank k means the first k rows are upper triangular with nonzero
    // diagonal after pivoting.
    let mut mu = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = ((i + 1)..k).map(|j| rows[i][j] * mu[j]).sum();
        mu[i] = (rows[i][k] - s) / rows[i][i];
    }
    let residual = a
        .iter()
        .zip(x.iter().copied().chain(std::iter::once(1.0)))
        .map(|(row, b)| (row.iter().zip(&mu).map(|(a, m)| a * m).sum::<f64>() - b).abs())
        .fold(0.0, f64::max);
    (residual <= RESIDUAL_TOL).then_some(mu)
}
