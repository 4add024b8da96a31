//! Geometry of warp SRVFs on the unit Hilbert sphere.
//!
//! ψ = √γ̇ lives on the positive orthant of the sphere; distances are arc
//! lengths and averaging happens through the log/exp maps at a base point.

use crate::fdata::Grid;
use crate::numerics::{inner_product, l2_norm};

const ANGLE_EPS: f64 = 1e-10;

/// Arc length between two unit-norm ψ's.
pub(crate) fn psi_distance(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    let ip = inner_product(grid.normalized(), a, b);
    ip.clamp(-1.0, 1.0).acos()
}

/// Inverse exponential map of `psi` at `base`: the tangent vector pointing
/// from `base` toward `psi` with length equal to their arc distance.
pub(crate) fn log_map(grid: &Grid, base: &[f64], psi: &[f64]) -> Vec<f64> {
    let theta = psi_distance(grid, base, psi);
    if theta < ANGLE_EPS {
        return psi.iter().zip(base).map(|(p, b)| p - b).collect();
    }
    let scale = theta / theta.sin();
    let cos_t = theta.cos();
    psi.iter()
        .zip(base)
        .map(|(p, b)| scale * (p - cos_t * b))
        .collect()
}

/// Exponential map of tangent vector `v` at `base`, projected back to the
/// unit sphere to absorb quadrature rounding.
pub(crate) fn exp_map(grid: &Grid, base: &[f64], v: &[f64]) -> Vec<f64> {
    let norm = l2_norm(grid.normalized(), v);
    let mut out: Vec<f64> = if norm < ANGLE_EPS {
        base.iter().zip(v).map(|(b, t)| b + t).collect()
    } else {
        let c = norm.cos();
        let s = norm.sin() / norm;
        base.iter().zip(v).map(|(b, t)| c * b + s * t).collect()
    };
    let n = l2_norm(grid.normalized(), &out);
    if n > ANGLE_EPS {
        for x in &mut out {
            *x /= n;
        }
    }
    out
}

/// Karcher mean of ψ's by fixed-point log/exp averaging.
pub(crate) fn karcher_mean(grid: &Grid, psis: &[Vec<f64>], max_iter: usize, tol: f64) -> Vec<f64> {
    let u = grid.normalized();
    let m = grid.len();
    let n = psis.len();
    debug_assert!(n > 0);

    let mut base = vec![0.0; m];
    for psi in psis {
        for (b, p) in base.iter_mut().zip(psi) {
            *b += p / n as f64;
        }
    }
    let norm = l2_norm(u, &base).max(ANGLE_EPS);
    for b in &mut base {
        *b /= norm;
    }

    for _ in 0..max_iter {
        let mut vbar = vec![0.0; m];
        for psi in psis {
            let v = log_map(grid, &base, psi);
            for (a, x) in vbar.iter_mut().zip(v) {
                *a += x / n as f64;
            }
        }
        if l2_norm(u, &vbar) < tol {
            break;
        }
        base = exp_map(grid, &base, &vbar);
    }
    base
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_psi(grid: &Grid, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut v: Vec<f64> = grid.normalized().iter().map(|&t| f(t)).collect();
        let n = l2_norm(grid.normalized(), &v);
        for x in &mut v {
            *x /= n;
        }
        v
    }

    #[test]
    fn log_exp_roundtrip() {
        let grid = Grid::unit(101).unwrap();
        let base = unit_psi(&grid, |_| 1.0);
        let psi = unit_psi(&grid, |t| 1.0 + 0.3 * (2.0 * t - 1.0));
        let v = log_map(&grid, &base, &psi);
        let back = exp_map(&grid, &base, &v);
        for (a, b) in back.iter().zip(&psi) {
            assert_relative_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn log_map_norm_equals_distance() {
        let grid = Grid::unit(101).unwrap();
        let base = unit_psi(&grid, |_| 1.0);
        let psi = unit_psi(&grid, |t| (1.0 + 0.5 * t).sqrt());
        let v = log_map(&grid, &base, &psi);
        assert_relative_eq!(
            l2_norm(grid.normalized(), &v),
            psi_distance(&grid, &base, &psi),
            epsilon = 1e-10
        );
    }

    #[test]
    fn karcher_mean_of_single_point_is_that_point() {
        let grid = Grid::unit(51).unwrap();
        let psi = unit_psi(&grid, |t| 1.0 + 0.2 * t);
        let mean = karcher_mean(&grid, &[psi.clone()], 20, 1e-6);
        for (a, b) in mean.iter().zip(&psi) {
            assert_relative_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn karcher_mean_of_symmetric_pair_is_midpoint() {
        let grid = Grid::unit(101).unwrap();
        let id = unit_psi(&grid, |_| 1.0);
        let a = unit_psi(&grid, |t| 1.0 + 0.25 * (2.0 * t - 1.0));
        let b = unit_psi(&grid, |t| 1.0 - 0.25 * (2.0 * t - 1.0));
        let mean = karcher_mean(&grid, &[a.clone(), b.clone()], 50, 1e-9);
        // The two points are reflections of each other through the identity
        // direction, so the mean lies along it and is equidistant.
        assert_relative_eq!(
            psi_distance(&grid, &mean, &a),
            psi_distance(&grid, &mean, &b),
            epsilon = 1e-6
        );
        assert!(psi_distance(&grid, &mean, &id) < 1e-5);
    }
}
