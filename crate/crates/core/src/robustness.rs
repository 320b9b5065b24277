//! Breakdown bounds, maximal-depth curves, depth variances and the constancy
//! diagnostic for rotationally symmetric laws.

use crate::depth::{circle_grid, depth_raw, vmf_population_depth, ModeSign};
use crate::error::{DepthError, Result};
use crate::quadrature::{rotsym_expectation, QuadratureSpec};
use crate::sphere::{check_dims, DeltaSpec, DirectionalSample, UnitVector};

fn check_positive_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(DepthError::InvalidParameter(format!(
            "concentration must be positive and finite, got {kappa}"
        )));
    }
    Ok(())
}

/// Lower bound on the breakdown point of the deepest point under
/// vMF(theta0, kappa): `(D(theta0) - D(-theta0)) / (2 d_sup)`, computed as
/// `E[delta(-V) - delta(V)] / (2 d_sup)` with `V = W'theta0`.
pub fn bdp_lower_bound_vmf(spec: &DeltaSpec, q: usize, kappa: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_positive_kappa(kappa)?;
    let gap = rotsym_expectation(|v| spec.eval(-v) - spec.eval(v), q, kappa, quad)?;
    Ok(gap / (2.0 * spec.d_sup()))
}

/// The same bound for an empirical law with deepest point `theta_hat`.
pub fn bdp_lower_bound_empirical(
    spec: &DeltaSpec,
    sample: &DirectionalSample,
    theta_hat: &UnitVector,
) -> Result<f64> {
    check_dims(sample.dim(), theta_hat.dim())?;
    if sample.is_empty() {
        return Err(DepthError::EmptySample);
    }
    let top = depth_raw(spec, theta_hat.coords(), sample);
    let bottom = depth_raw(spec, (-theta_hat).coords(), sample);
    Ok((top - bottom) / (2.0 * spec.d_sup()))
}

/// `D(theta0, vMF(theta0, kappa))` over an increasing grid of concentrations.
pub fn max_depth_curve(
    spec: &DeltaSpec,
    q: usize,
    kappa_grid: &[f64],
    quad: &QuadratureSpec,
) -> Result<Vec<(f64, f64)>> {
    for k in kappa_grid {
        check_positive_kappa(*k)?;
    }
    if kappa_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DepthError::InvalidParameter("concentration grid must be increasing".into()));
    }
    kappa_grid
        .iter()
        .map(|&k| Ok((k, vmf_population_depth(spec, q, k, ModeSign::Mode, quad)?)))
        .collect()
}

/// `Var[delta(+-V)]` under vMF(theta0, kappa), the asymptotic variance of
/// `sqrt(n) (D_n(+-theta0) - D(+-theta0))`.
pub fn depth_variance(spec: &DeltaSpec, at: ModeSign, q: usize, kappa: f64, quad: &QuadratureSpec) -> Result<f64> {
    let s = at.sign();
    let m1 = rotsym_expectation(|v| spec.eval(s * v), q, kappa, quad)?;
    let m2 = rotsym_expectation(|v| spec.eval(s * v).powi(2), q, kappa, quad)?;
    Ok((m2 - m1 * m1).max(0.0))
}

/// Range `max - min` of the depth over `grid` equispaced angles of a circular
/// sample. Zero means the depth is constant on the grid.
pub fn constancy_diagnostic(spec: &DeltaSpec, sample: &DirectionalSample, grid: usize) -> Result<f64> {
    if sample.dim() != 2 {
        return Err(DepthError::NotCircle(sample.dim()));
    }
    let points: Vec<UnitVector> = circle_grid(grid.max(1)).into_iter().map(UnitVector::from_angle).collect();
    constancy_diagnostic_at(spec, sample, &points)
}

/// Range of the depth over a supplied set of locations, for any dimension.
pub fn constancy_diagnostic_at(spec: &DeltaSpec, sample: &DirectionalSample, points: &[UnitVector]) -> Result<f64> {
    if sample.is_empty() {
        return Err(DepthError::EmptySample);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in points {
        check_dims(sample.dim(), p.dim())?;
        let d = depth_raw(spec, p.coords(), sample);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok(if points.is_empty() { 0.0 } else { hi - lo })
}
