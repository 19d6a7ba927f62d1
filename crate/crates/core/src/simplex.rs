//! Dense tableau simplex for `max 1·u  s.t.  M u <= 1, u >= 0` with `M > 0`.
//!
//! This is the form a zero-sum matrix game takes after shifting its payoffs
//! positive; the optimal duals give the opponent's strategy. The origin is
//! feasible, so no phase one is needed.

const REDUCED_COST_TOL: f64 = 1e-12;
const PIVOT_TOL: f64 = 1e-11;
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 50;

#[derive(Debug, Clone)]
pub(crate) struct PackingSolution {
    /// Primal variables `u`.
    pub primal: Vec<f64>,
    /// Constraint duals.
    pub dual: Vec<f64>,
    pub objective: f64,
}

/// `m` is row-major with `rows` constraints over `cols` variables.
pub(crate) fn solve_packing(m: &[f64], rows: usize, cols: usize) -> Option<PackingSolution> {
    debug_assert_eq!(m.len(), rows * cols);
    let width = cols + rows + 1;
    let rhs = width - 1;
    let mut tab = vec![0.0; rows * width];
    for r in 0..rows {
        tab[r * width..r * width + cols].copy_from_slice(&m[r * cols..(r + 1) * cols]);
        tab[r * width + cols + r] = 1.0;
        tab[r * width + rhs] = 1.0;
    }
    let mut obj = vec![0.0; width];
    obj[..cols].fill(-1.0);
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    let max_pivots = 50 * (rows + cols) + 1000;
    let mut degenerate = 0usize;
    for _ in 0..max_pivots {
        let bland = degenerate >= DEGENERATE_STREAK;
        let entering = if bland {
            (0..rhs).find(|&k| obj[k] < -REDUCED_COST_TOL)
        } else {
            (0..rhs)
                .filter(|&k| obj[k] < -REDUCED_COST_TOL)
                .min_by(|&a, &b| obj[a].total_cmp(&obj[b]))
        };
        let Some(k) = entering else {
            let mut primal = vec![0.0; cols];
            for (r, &b) in basis.iter().enumerate() {
                if b < cols {
                    primal[b] = tab[r * width + rhs];
                }
            }
            let dual = obj[cols..cols + rows].to_vec();
            return Some(PackingSolution {
                primal,
                dual,
                objective: obj[rhs],
            });
        };

        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let a = tab[r * width + k];
            if a > PIVOT_TOL {
                let ratio = tab[r * width + rhs] / a;
                let better = match leave {
                    None => true,
                    Some((lr, best)) => ratio < best || (ratio == best && basis[r] < basis[lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // Unbounded cannot happen for a positive packing matrix.
        let (lr, ratio) = leave?;
        if ratio <= 0.0 {
            degenerate += 1;
        } else {
            degenerate = 0;
        }
        pivot(&mut tab, &mut obj, width, rows, lr, k);
        basis[lr] = k;
    }
    None
}

fn pivot(tab: &mut [f64], obj: &mut [f64], width: usize, rows: usize, pr: usize, pc: usize) {
    let inv = 1.0 / tab[pr * width + pc];
    for v in &mut tab[pr * width..(pr + 1) * width] {
        *v *= inv;
    }
    tab[pr * width + pc] = 1.0;
    let (before, rest) = tab.split_at_mut(pr * width);
    let (prow, after) = rest.split_at_mut(width);
    let eliminate = |row: &mut [f64]| {
        let f = row[pc];
        if f != 0.0 {
            for (x, p) in row.iter_mut().zip(prow.iter()) {
                *x -= f * p;
            }
            row[pc] = 0.0;
        }
    };
    for row in before.chunks_mut(width).chain(after.chunks_mut(width)) {
        eliminate(row);
    }
    debug_assert_eq!(before.len() / width + 1 + after.len() / width, rows);
    eliminate(obj);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_constraint() {
        // max u1 + u2 s.t. 2u1 + 4u2 <= 1 → u1 = 0.5.
        let s = solve_packing(&[2.0, 4.0], 1, 2).unwrap();
        assert!((s.objective - 0.5).abs() < 1e-15);
        assert!((s.primal[0] - 0.5).abs() < 1e-15);
        assert!((s.dual[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn strong_duality_on_two_by_two() {
        let m = [2.0, 1.0, 1.0, 2.0];
        let s = solve_packing(&m, 2, 2).unwrap();
        assert!((s.objective - 2.0 / 3.0).abs() < 1e-12);
        let dual_obj: f64 = s.dual.iter().sum();
        assert!((dual_obj - s.objective).abs() < 1e-12);
    }
}
