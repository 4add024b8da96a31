//! Small quadrature and interpolation helpers shared by the numeric modules.
//!
//! Everything here works on plain slices over a common abscissa vector; the
//! higher-level types in [`crate::fdata`] decide which abscissae to pass.

/// Trapezoidal integral of `y` over the (sorted) abscissae `x`.
pub(crate) fn trapz(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += (x[i] - x[i - 1]) * (y[i] + y[i - 1]) * 0.5;
    }
    acc
}

/// Cumulative trapezoidal integral, anchored at 0 for the first point.
pub(crate) fn cumtrapz(x: &[f64], y: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), y.len());
    let mut out = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..x.len() {
        acc += (x[i] - x[i - 1]) * (y[i] + y[i - 1]) * 0.5;
        out.push(acc);
    }
    out
}

/// L2 inner product `∫ a·b` under trapezoidal quadrature.
pub(crate) fn inner_product(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += (x[i] - x[i - 1]) * (a[i] * b[i] + a[i - 1] * b[i - 1]) * 0.5;
    }
    acc
}

/// L2 norm under trapezoidal quadrature.
pub(crate) fn l2_norm(x: &[f64], a: &[f64]) -> f64 {
    inner_product(x, a, a).max(0.0).sqrt()
}

/// L2 distance `‖a − b‖` under trapezoidal quadrature.
pub(crate) fn l2_distance(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for i in 1..x.len() {
        let da = a[i] - b[i];
        let db = a[i - 1] - b[i - 1];
        acc += (x[i] - x[i - 1]) * (da * da + db * db) * 0.5;
    }
    acc.max(0.0).sqrt()
}

/// Three-point finite differences on possibly non-uniform abscissae.
///
/// Interior points use the centered formula that is exact for quadratics;
/// endpoints fall back to the one-sided two-point difference.
pub(crate) fn finite_differences(x: &[f64], f: &[f64]) -> Vec<f64> {
    let m = x.len();
    debug_assert!(m >= 2);
    debug_assert_eq!(m, f.len());
    let mut d = vec![0.0; m];
    d[0] = (f[1] - f[0]) / (x[1] - x[0]);
    d[m - 1] = (f[m - 1] - f[m - 2]) / (x[m - 1] - x[m - 2]);
    for i in 1..m - 1 {
        let hl = x[i] - x[i - 1];
        let hr = x[i + 1] - x[i];
        // Difference form cancels exactly on constants.
        d[i] = (hl * hl * (f[i + 1] - f[i]) + hr * hr * (f[i] - f[i - 1]))
            / (hl * hr * (hl + hr));
    }
    d
}

/// Linear interpolation of `(xs, ys)` at `x`, clamped to the table ends.
///
/// `xs` must be sorted ascending. Used on warped abscissae which stay inside
/// the domain by construction, so clamping only absorbs float rounding.
pub(crate) fn interp_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    // partition_point gives the first index with xs[idx] > x, so idx-1 brackets x.
    let hi = xs.partition_point(|&v| v <= x);
    let lo = hi - 1;
    let w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    ys[lo] + w * (ys[hi] - ys[lo])
}

/// Mean of a slice.
pub(crate) fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample standard deviation (n−1 denominator); 0 for fewer than two values.
pub(crate) fn sample_std(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}
