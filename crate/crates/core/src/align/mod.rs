//! Elastic alignment: optimal warping, amplitude/phase distances, and the
//! Karcher mean of a function set under the amplitude distance.

pub mod dp;
pub(crate) mod sphere;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdata::{FunctionalDataset, FunctionalSample, Grid, SrvfCurve};
use crate::numerics::{cumtrapz, finite_differences, l2_distance, l2_norm, trapz};

/// Orientation-preserving reparameterization of [0, 1] with its sphere
/// representation ψ = √γ̇.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WarpRepr", into = "WarpRepr")]
pub struct WarpingFunction {
    values: Vec<f64>,
    psi: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct WarpRepr {
    values: Vec<f64>,
}

impl From<WarpingFunction> for WarpRepr {
    fn from(w: WarpingFunction) -> Self {
        WarpRepr { values: w.values }
    }
}

impl TryFrom<WarpRepr> for WarpingFunction {
    type Error = Error;
    fn try_from(r: WarpRepr) -> Result<Self> {
        // Deserialization has no grid at hand; warp values live on the
        // normalized grid, so a uniform one of matching length rebuilds ψ.
        let grid = Grid::unit(r.values.len())?;
        WarpingFunction::from_values(&grid, r.values)
    }
}

const BOUNDARY_TOL: f64 = 1e-8;

impl WarpingFunction {
    /// Identity warp on the given grid.
    pub fn identity(grid: &Grid) -> WarpingFunction {
        WarpingFunction {
            values: grid.normalized().to_vec(),
            psi: vec![1.0; grid.len()],
        }
    }

    /// Build from γ values on the grid, pinning the boundaries exactly and
    /// deriving ψ by finite differences.
    pub fn from_values(grid: &Grid, mut values: Vec<f64>) -> Result<WarpingFunction> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "warp has {} values, grid has {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("warp contains non-finite value".into()));
        }
        if values[0].abs() > BOUNDARY_TOL || (values[values.len() - 1] - 1.0).abs() > BOUNDARY_TOL {
            return Err(Error::InvalidParameter(format!(
                "warp boundaries ({}, {}) are not pinned to (0, 1)",
                values[0],
                values[values.len() - 1]
            )));
        }
        values[0] = 0.0;
        *values.last_mut().unwrap() = 1.0;
        let mut run_max = 0.0_f64;
        for v in values.iter_mut() {
            if *v < run_max - 1e-9 {
                return Err(Error::InvalidParameter("warp is not monotone".into()));
            }
            run_max = run_max.max(*v);
            *v = (*v).max(run_max).clamp(0.0, 1.0);
        }
        let psi = psi_from_gamma(grid, &values);
        Ok(WarpingFunction { values, psi })
    }

    /// Reconstruct γ from its sphere representation: `γ(t) = ∫₀ᵗ ψ²`,
    /// rescaled so the boundaries pin exactly.
    pub fn from_psi(grid: &Grid, psi: &[f64]) -> Result<WarpingFunction> {
        if psi.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "psi has {} values, grid has {}",
                psi.len(),
                grid.len()
            )));
        }
        let sq: Vec<f64> = psi.iter().map(|p| p * p).collect();
        let mut gamma = cumtrapz(grid.normalized(), &sq);
        let total = *gamma.last().unwrap();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidParameter("psi integrates to a degenerate warp".into()));
        }
        for g in &mut gamma {
            *g /= total;
        }
        gamma[0] = 0.0;
        *gamma.last_mut().unwrap() = 1.0;
        let psi = psi_from_gamma(grid, &gamma);
        Ok(WarpingFunction { values: gamma, psi })
    }

    /// γ evaluated at the grid points (normalized coordinates).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// ψ = √γ̇ at the grid points.
    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Numerical inverse γ⁻¹ sampled on the grid.
    pub fn invert(&self, grid: &Grid) -> WarpingFunction {
        let u = grid.normalized();
        let g = &self.values;
        let m = g.len();
        let mut inv = vec![0.0; m];
        for (k, &target) in u.iter().enumerate() {
            let hi = g.partition_point(|&v| v < target).min(m - 1).max(1);
            let lo = hi - 1;
            let dv = g[hi] - g[lo];
            inv[k] = if dv > 1e-14 {
                u[lo] + (target - g[lo]) / dv * (u[hi] - u[lo])
            } else {
                u[lo]
            };
        }
        inv[0] = 0.0;
        inv[m - 1] = 1.0;
        // A monotone input keeps the interpolated inverse monotone up to
        // rounding; from_values re-pins and re-derives psi.
        WarpingFunction::from_values(grid, inv).expect("inverse of a valid warp is valid")
    }

    /// Composition (self ∘ inner)(t) = self(inner(t)).
    pub fn compose(&self, grid: &Grid, inner: &WarpingFunction) -> WarpingFunction {
        let values: Vec<f64> = inner
            .values
            .iter()
            .map(|&x| grid.interp(&self.values, x))
            .collect();
        WarpingFunction::from_values(grid, values)
            .expect("composition of valid warps is valid")
    }

    /// Time warping of a sample: `(f ∘ γ)(t)` on the grid.
    pub fn warp_sample(&self, grid: &Grid, f: &FunctionalSample) -> FunctionalSample {
        let values: Vec<f64> = self
            .values
            .iter()
            .map(|&x| grid.interp(f.values(), x))
            .collect();
        FunctionalSample::new(values).expect("warped sample stays finite")
    }

    /// Group action on SRVF space: `(q ∘ γ)·√γ̇`.
    pub fn warp_srvf(&self, grid: &Grid, q: &SrvfCurve) -> SrvfCurve {
        let values: Vec<f64> = self
            .values
            .iter()
            .zip(&self.psi)
            .map(|(&x, &p)| grid.interp(q.values(), x) * p)
            .collect();
        SrvfCurve::new(values, q.initial_value()).expect("warped SRVF stays finite")
    }
}

fn psi_from_gamma(grid: &Grid, gamma: &[f64]) -> Vec<f64> {
    finite_differences(grid.normalized(), gamma)
        .into_iter()
        .map(|d| d.max(0.0).sqrt())
        .collect()
}

/// Output of the Karcher-mean alignment of a function set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlignmentResult {
    /// Karcher mean in SRVF space (μ_q).
    pub karcher_mean_srvf: SrvfCurve,
    /// Karcher mean mapped back to function space (μ_f).
    pub karcher_mean_f: FunctionalSample,
    /// Aligned functions f_i ∘ γ_i.
    pub aligned: Vec<FunctionalSample>,
    /// Aligned SRVFs (q_i ∘ γ_i)·√γ̇_i.
    pub aligned_srvf: Vec<SrvfCurve>,
    /// Warping functions γ_i.
    pub warps: Vec<WarpingFunction>,
    /// Matching passes performed.
    pub iterations: usize,
    /// Whether the iteration stopped before exhausting `max_iter`.
    pub converged: bool,
    /// Σ_i d_a(μ, f_i)² for each mean iterate, in iteration order.
    pub objective: Vec<f64>,
}

/// Optimal warp aligning `q_moving` onto `q_target`, with the achieved
/// amplitude cost `‖q_target − (q_moving∘γ)√γ̇‖`.
pub fn optimal_warp(
    grid: &Grid,
    q_target: &SrvfCurve,
    q_moving: &SrvfCurve,
) -> Result<(WarpingFunction, f64)> {
    optimal_warp_with_steps(grid, q_target, q_moving, &dp::DEFAULT_STEPS)
}

/// Same as [`optimal_warp`] with a caller-supplied slope step set.
pub fn optimal_warp_with_steps(
    grid: &Grid,
    q_target: &SrvfCurve,
    q_moving: &SrvfCurve,
    steps: &[(usize, usize)],
) -> Result<(WarpingFunction, f64)> {
    let sol = dp::solve(grid, q_target.values(), q_moving.values(), steps)?;
    Ok((WarpingFunction::from_values(grid, sol.gamma)?, sol.cost))
}

/// Phase distance: arc length between the sphere representations of two
/// warps, `arccos ∫ ψ₁ψ₂` under trapezoidal quadrature.
pub fn phase_distance(grid: &Grid, g1: &WarpingFunction, g2: &WarpingFunction) -> f64 {
    let prod: Vec<f64> = g1.psi.iter().zip(&g2.psi).map(|(a, b)| a * b).collect();
    trapz(grid.normalized(), &prod).clamp(-1.0, 1.0).acos()
}

/// Amplitude distance between two functions: the warping-minimized SRVF
/// residual of Eq. d_a.
pub fn amplitude_distance(
    grid: &Grid,
    f1: &FunctionalSample,
    f2: &FunctionalSample,
) -> Result<f64> {
    let q1 = f1.to_srvf(grid);
    let q2 = f2.to_srvf(grid);
    Ok(optimal_warp(grid, &q1, &q2)?.1)
}

/// Iterative Karcher mean of a dataset under the amplitude distance.
///
/// Each pass aligns every SRVF to the current mean by dynamic programming,
/// recenters the warps so their sphere Karcher mean is the identity, and
/// updates the mean as the average of the aligned SRVFs. Stops when the
/// relative L2 change of the mean drops below `tol`, or when the summed
/// squared alignment cost of the mean iterates stops decreasing (the lattice
/// quantization floor).
pub fn karcher_mean(
    data: &FunctionalDataset,
    max_iter: usize,
    tol: f64,
) -> Result<AlignmentResult> {
    let n = data.n_samples();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    let grid = data.grid();
    let u = grid.normalized();

    let qs: Vec<SrvfCurve> = data
        .samples()
        .par_iter()
        .map(|f| f.to_srvf(grid))
        .collect();

    // Initialize with the SRVF of the sample closest in L2 to the
    // cross-sectional mean.
    let m = grid.len();
    let mut cross_mean = vec![0.0; m];
    for f in data.samples() {
        for (acc, v) in cross_mean.iter_mut().zip(f.values()) {
            *acc += v / n as f64;
        }
    }
    let init_idx = (0..n)
        .min_by(|&a, &b| {
            let da = l2_distance(u, data.samples()[a].values(), &cross_mean);
            let db = l2_distance(u, data.samples()[b].values(), &cross_mean);
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    let mean_init = data.samples().iter().map(|f| f.initial_value()).sum::<f64>() / n as f64;

    let mut mu = qs[init_idx].values().to_vec();
    let mut warps: Vec<WarpingFunction> = Vec::new();
    let mut aligned_srvf: Vec<SrvfCurve> = Vec::new();
    let mut objective: Vec<f64> = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let mut prev_state: Option<(Vec<WarpingFunction>, Vec<SrvfCurve>, Vec<f64>)> = None;

    for pass in 0..max_iter {
        // Matching step: every q_i aligned to the current mean.
        let matched: Vec<(WarpingFunction, f64)> = qs
            .par_iter()
            .map(|q| {
                let sol = dp::solve(grid, &mu, q.values(), &dp::DEFAULT_STEPS)?;
                Ok((WarpingFunction::from_values(grid, sol.gamma)?, sol.cost))
            })
            .collect::<Result<_>>()?;
        let obj: f64 = matched.iter().map(|(_, c)| c * c).sum();

        // The first pass scores the initializer (a raw sample), not a mean
        // iterate; it is not part of the objective trace. Later passes score
        // the previous pass's mean: keep the best iterate and stop once the
        // objective stops decreasing.
        if pass > 0 {
            if objective.last().is_some_and(|&last| obj > last) {
                if let Some((w, a, m_prev)) = prev_state.take() {
                    warps = w;
                    aligned_srvf = a;
                    mu = m_prev;
                }
                converged = true;
                break;
            }
            objective.push(obj);
        }
        prev_state = Some((warps.clone(), aligned_srvf.clone(), mu.clone()));

        // Recenter so the sphere Karcher mean of the warps is the identity.
        let psis: Vec<Vec<f64>> = matched.iter().map(|(w, _)| w.psi.clone()).collect();
        let mean_psi = sphere::karcher_mean(grid, &psis, 20, 1e-6);
        let center_inv = WarpingFunction::from_psi(grid, &mean_psi)?.invert(grid);
        warps = matched
            .into_par_iter()
            .map(|(w, _)| w.compose(grid, &center_inv))
            .collect();

        aligned_srvf = warps
            .par_iter()
            .zip(&qs)
            .map(|(w, q)| w.warp_srvf(grid, q))
            .collect();

        let mut mu_new = vec![0.0; m];
        for q in &aligned_srvf {
            for (acc, v) in mu_new.iter_mut().zip(q.values()) {
                *acc += v / n as f64;
            }
        }
        let rel = l2_distance(u, &mu_new, &mu) / l2_norm(u, &mu).max(1e-12);
        mu = mu_new;
        iterations += 1;
        if rel < tol {
            converged = true;
            break;
        }
    }

    let aligned: Vec<FunctionalSample> = warps
        .par_iter()
        .zip(data.samples())
        .map(|(w, f)| w.warp_sample(grid, f))
        .collect();

    let karcher_mean_srvf = SrvfCurve::new(mu, mean_init)?;
    let karcher_mean_f = karcher_mean_srvf.to_function(grid);

    Ok(AlignmentResult {
        karcher_mean_srvf,
        karcher_mean_f,
        aligned,
        aligned_srvf,
        warps,
        iterations,
        converged,
        objective,
    })
}

/// Align test functions to a fixed training mean: one dynamic-programming
/// pass per function, no recentering.
pub fn align_to_mean(
    train_grid: &Grid,
    test: &FunctionalDataset,
    mu_q: &SrvfCurve,
) -> Result<(Vec<SrvfCurve>, Vec<WarpingFunction>)> {
    train_grid.ensure_same(test.grid())?;
    if mu_q.len() != train_grid.len() {
        return Err(Error::DimensionMismatch(format!(
            "mean SRVF has {} values, grid has {}",
            mu_q.len(),
            train_grid.len()
        )));
    }
    let grid = test.grid();
    let out: Vec<(SrvfCurve, WarpingFunction)> = test
        .samples()
        .par_iter()
        .map(|f| {
            let q = f.to_srvf(grid);
            let sol = dp::solve(grid, mu_q.values(), q.values(), &dp::DEFAULT_STEPS)?;
            let w = WarpingFunction::from_values(grid, sol.gamma)?;
            let aligned = w.warp_srvf(grid, &q);
            Ok((aligned, w))
        })
        .collect::<Result<_>>()?;
    Ok(out.into_iter().unzip())
}
