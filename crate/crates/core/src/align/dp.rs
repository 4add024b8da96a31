//! Dynamic-programming search for the optimal reparameterization between two
//! SRVF curves.
//!
//! The solver walks a lattice over (target index, warp-value index) pairs
//! using a fixed menu of local slope steps, accumulating the discretized
//! alignment cost `∫ (q_target − (q_moving∘γ)√γ̇)²` segment by segment.

use crate::error::{Error, Result};
use crate::fdata::Grid;

/// Local (Δtarget, Δwarp) index steps searched by the lattice.
///
/// The reachable slopes span [1/3, 3]; the diagonal step comes first so that
/// cost ties resolve toward the identity warp.
pub const DEFAULT_STEPS: [(usize, usize); 7] =
    [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];

/// Discretized alignment cost of one lattice segment.
///
/// The warp is linear from `(from.0, from.1)` to `(to.0, to.1)` in normalized
/// grid coordinates; `q_moving` is linearly interpolated at the warped
/// abscissae and the squared residual integrated by the trapezoid rule over
/// the target grid points the segment covers.
pub fn segment_cost(
    grid: &Grid,
    q_target: &[f64],
    q_moving: &[f64],
    from: (usize, usize),
    to: (usize, usize),
) -> f64 {
    let u = grid.normalized();
    let (i0, j0) = from;
    let (i1, j1) = to;
    let slope = (u[j1] - u[j0]) / (u[i1] - u[i0]);
    let sqrt_slope = slope.sqrt();

    // The warp passes exactly through the lattice nodes, so the endpoint
    // residuals use direct lookups; only interior points interpolate.
    let mut acc = 0.0;
    let mut prev_t = u[i0];
    let mut prev_g = {
        let r = q_target[i0] - q_moving[j0] * sqrt_slope;
        r * r
    };
    for k in i0 + 1..=i1 {
        let t = u[k];
        let qm = if k == i1 {
            q_moving[j1]
        } else {
            grid.interp(q_moving, u[j0] + slope * (t - u[i0]))
        };
        let r = q_target[k] - qm * sqrt_slope;
        let g = r * r;
        acc += (t - prev_t) * (g + prev_g) * 0.5;
        prev_t = t;
        prev_g = g;
    }
    acc
}

pub(crate) struct DpSolution {
    /// Warp values γ(u_k) at every grid point.
    pub gamma: Vec<f64>,
    /// Achieved L2 alignment cost (square root of the accumulated integral).
    pub cost: f64,
}

/// Solve for the warp minimizing the lattice-restricted alignment cost.
pub(crate) fn solve(
    grid: &Grid,
    q_target: &[f64],
    q_moving: &[f64],
    steps: &[(usize, usize)],
) -> Result<DpSolution> {
    let m = grid.len();
    if q_target.len() != m || q_moving.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "SRVF lengths {}/{} do not match grid length {m}",
            q_target.len(),
            q_moving.len()
        )));
    }
    let u = grid.normalized();

    let mut cost = vec![f64::INFINITY; m * m];
    let mut choice = vec![u8::MAX; m * m];
    cost[0] = 0.0;

    for i in 1..m {
        let row = i * m;
        for j in 1..m {
            let mut best = f64::INFINITY;
            let mut best_k = u8::MAX;
            for (k, &(di, dj)) in steps.iter().enumerate() {
                if di > i || dj > j {
                    continue;
                }
                let prev = cost[(i - di) * m + (j - dj)];
                if !prev.is_finite() {
                    continue;
                }
                let c = prev + segment_cost(grid, q_target, q_moving, (i - di, j - dj), (i, j));
                if c < best {
                    best = c;
                    best_k = k as u8;
                }
            }
            cost[row + j] = best;
            choice[row + j] = best_k;
        }
    }

    let total = cost[m * m - 1];
    if !total.is_finite() {
        return Err(Error::InvalidParameter(
            "no lattice path reaches the corner; step set too restrictive for this grid".into(),
        ));
    }

    // Walk the predecessor choices back from the corner, then fill gamma by
    // linear interpolation across multi-index steps.
    let mut path = vec![(m - 1, m - 1)];
    let (mut i, mut j) = (m - 1, m - 1);
    while i > 0 || j > 0 {
        let k = choice[i * m + j] as usize;
        let (di, dj) = steps[k];
        i -= di;
        j -= dj;
        path.push((i, j));
    }
    path.reverse();

    let mut gamma = vec![0.0; m];
    for w in path.windows(2) {
        let (i0, j0) = w[0];
        let (i1, j1) = w[1];
        let slope = (u[j1] - u[j0]) / (u[i1] - u[i0]);
        for k in i0..=i1 {
            gamma[k] = u[j0] + slope * (u[k] - u[i0]);
        }
    }
    gamma[0] = 0.0;
    gamma[m - 1] = 1.0;

    Ok(DpSolution { gamma, cost: total.max(0.0).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive enumeration of all monotone lattice paths; the independent
    /// oracle for the DP minimization.
    fn brute_force_min(
        grid: &Grid,
        q_target: &[f64],
        q_moving: &[f64],
        steps: &[(usize, usize)],
    ) -> f64 {
        fn rec(
            grid: &Grid,
            qt: &[f64],
            qm: &[f64],
            steps: &[(usize, usize)],
            at: (usize, usize),
            acc: f64,
            best: &mut f64,
        ) {
            let m = grid.len();
            if at == (m - 1, m - 1) {
                if acc < *best {
                    *best = acc;
                }
                return;
            }
            for &(di, dj) in steps {
                let next = (at.0 + di, at.1 + dj);
                if next.0 < m && next.1 < m {
                    let c = segment_cost(grid, qt, qm, at, next);
                    rec(grid, qt, qm, steps, next, acc + c, best);
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(grid, q_target, q_moving, steps, (0, 0), 0.0, &mut best);
        best
    }

    #[test]
    fn dp_equals_brute_force_on_small_grids() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(91);
        for m in [3usize, 4, 5, 6] {
            let grid = Grid::unit(m).unwrap();
            for _ in 0..30 {
                let q1: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
                let q2: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
                let sol = solve(&grid, &q1, &q2, &DEFAULT_STEPS).unwrap();
                let oracle = brute_force_min(&grid, &q1, &q2, &DEFAULT_STEPS);
                assert_eq!(
                    sol.cost,
                    oracle.max(0.0).sqrt(),
                    "DP disagrees with enumeration on m={m}"
                );
            }
        }
    }

    #[test]
    fn identical_curves_give_identity_warp_and_zero_cost() {
        let grid = Grid::unit(40).unwrap();
        let q: Vec<f64> =
            grid.normalized().iter().map(|t| (3.0 * t).cos()).collect();
        let sol = solve(&grid, &q, &q, &DEFAULT_STEPS).unwrap();
        assert_eq!(sol.cost, 0.0);
        for (g, t) in sol.gamma.iter().zip(grid.normalized()) {
            assert!((g - t).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_zero_curves_tie_break_to_identity() {
        let grid = Grid::unit(12).unwrap();
        let q = vec![0.0; 12];
        let sol = solve(&grid, &q, &q, &DEFAULT_STEPS).unwrap();
        assert_eq!(sol.cost, 0.0);
        for (g, t) in sol.gamma.iter().zip(grid.normalized()) {
            assert!((g - t).abs() < 1e-14);
        }
    }
}
