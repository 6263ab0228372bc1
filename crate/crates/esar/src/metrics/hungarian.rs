//! Minimum-cost assignment on rectangular matrices.

use super::MetricsError;

/// Solves the minimum-cost assignment problem for a rectangular cost matrix
/// (rows x cols, not necessarily square) and returns the optimal pairing as
/// `(row, col)` pairs sorted by row. Every index on the smaller side is
/// matched; the larger side keeps its surplus unmatched.
///
/// Costs must be finite and non-negative. An empty matrix yields an empty
/// assignment. The implementation is the potential-based shortest augmenting
/// path method, `O(n^2 * m)`; ties resolve by scan order, so results are
/// deterministic.
pub fn hungarian(cost: &[Vec<f64>]) -> Result<Vec<(usize, usize)>, MetricsError> {
    let n = cost.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = cost[0].len();
    for (i, row) in cost.iter().enumerate() {
        if row.len() != m {
            return Err(MetricsError::InvalidCost(format!(
                "row {i} has {} entries, row 0 has {m}",
                row.len()
            )));
        }
        for (j, &c) in row.iter().enumerate() {
            if !(c.is_finite() && c >= 0.0) {
                return Err(MetricsError::InvalidCost(format!(
                    "cost[{i}][{j}] = {c} must be finite and non-negative"
                )));
            }
        }
    }
    if m == 0 {
        return Ok(Vec::new());
    }

    // The solver needs rows <= cols; transpose and swap back otherwise.
    if n > m {
        let transposed: Vec<Vec<f64>> = (0..m)
            .map(|j| (0..n).map(|i| cost[i][j]).collect())
            .collect();
        let mut pairs: Vec<(usize, usize)> = hungarian(&transposed)?
            .into_iter()
            .map(|(r, c)| (c, r))
            .collect();
        pairs.sort_unstable();
        return Ok(pairs);
    }

    // Potentials u (rows), v (cols); p[j] = 1-based row matched to col j.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = (1..=m)
        .filter(|&j| p[j] != 0)
        .map(|j| (p[j] - 1, j - 1))
        .collect();
    pairs.sort_unstable();
    Ok(pairs)
}


#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::oracle::brute_force_min_cost;
    use super::*;

    fn total(cost: &[Vec<f64>], pairs: &[(usize, usize)]) -> f64 {
        pairs.iter().map(|&(i, j)| cost[i][j]).sum()
    }

    #[test]
    fn two_by_two_picks_the_diagonal_swap() {
        let cost = vec![vec![4.0, 1.0], vec![2.0, 8.0]];
        let pairs = hungarian(&cost).unwrap();
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);
        assert_eq!(total(&cost, &pairs), 3.0);
    }

    #[test]
    fn empty_and_degenerate_inputs() {
        assert_eq!(hungarian(&[]).unwrap(), vec![]);
        let no_cols: Vec<Vec<f64>> = vec![vec![], vec![]];
        assert_eq!(hungarian(&no_cols).unwrap(), vec![]);
        let one = vec![vec![5.0]];
        assert_eq!(hungarian(&one).unwrap(), vec![(0, 0)]);
    }

    #[test]
    fn wide_matrix_matches_all_rows() {
        let cost = vec![vec![10.0, 2.0, 7.0, 1.0], vec![4.0, 3.0, 9.0, 5.0]];
        let pairs = hungarian(&cost).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(total(&cost, &pairs), 4.0); // (0,3)+(1,1)
    }

    #[test]
    fn tall_matrix_matches_all_cols() {
        let cost = vec![vec![10.0, 2.0], vec![4.0, 3.0], vec![1.0, 9.0]];
        let pairs = hungarian(&cost).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(total(&cost, &pairs), 3.0); // (2,0)+(0,1)
    }

    #[test]
    fn rejects_bad_matrices() {
        let ragged = vec![vec![1.0, 2.0], vec![3.0]];
        assert!(matches!(hungarian(&ragged), Err(MetricsError::InvalidCost(_))));
        let negative = vec![vec![1.0, -2.0]];
        assert!(matches!(hungarian(&negative), Err(MetricsError::InvalidCost(_))));
        let nan = vec![vec![f64::NAN]];
        assert!(matches!(hungarian(&nan), Err(MetricsError::InvalidCost(_))));
    }

    #[test]
    fn matches_brute_force_on_random_integer_matrices() {
        // Integer-valued costs make optimal totals exactly comparable.
        let mut rng = ChaCha8Rng::seed_from_u64(0xA55);
        for case in 0..300 {
            let n = rng.random_range(1..=5);
            let m = rng.random_range(1..=5);
            let cost: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..m).map(|_| rng.random_range(0..100) as f64).collect())
                .collect();
            let pairs = hungarian(&cost).unwrap();
            assert_eq!(pairs.len(), n.min(m), "case {case}");
            let got = total(&cost, &pairs);
            let want = brute_force_min_cost(&cost);
            assert_eq!(got, want, "case {case}: {cost:?}");
        }
    }
}
