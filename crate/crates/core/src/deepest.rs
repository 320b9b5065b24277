//! Deepest points `arg max_theta D(theta, H_n)`.
//!
//! For the cosine kernel the maximizer is the spherical mean. Other kernels
//! minimize `f(theta) = (1/n) sum delta(theta'W_i)` by multistart projected
//! gradient descent on the sphere.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::depth::{circle_grid, depth_raw, mean_distance, spherical_mean};
use crate::error::{DepthError, Result};
use crate::sphere::{dot, norm, DeltaSpec, DirectionalSample, KernelKind, UnitVector};

/// Inner products above this are left out of the gradient.
pub const GRADIENT_EXCLUSION: f64 = 1e-9;

/// Tuning of the multistart descent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeepestOptions {
    /// Stop when the tangent gradient norm falls to this level.
    pub grad_tol: f64,
    /// Iterations per start.
    pub max_iter: usize,
    /// Step halvings tried per iteration before the start is declared stuck.
    pub max_halvings: usize,
    /// Sufficient-decrease constant of the backtracking rule.
    pub armijo: f64,
    /// Extra grid starts on the circle.
    pub circle_starts: usize,
}

impl Default for DeepestOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-8,
            max_iter: 200,
            max_halvings: 60,
            armijo: 1e-4,
            circle_starts: 360,
        }
    }
}

/// A deepest point together with bookkeeping from the search.
#[derive(Debug, Clone, PartialEq)]
pub struct DeepestResult {
    pub point: UnitVector,
    pub depth: f64,
    /// Descent iterations of the winning start.
    pub iterations: usize,
    /// Number of starts or grid points evaluated.
    pub candidates_evaluated: usize,
}

struct Candidate {
    point: Vec<f64>,
    depth: f64,
    iterations: usize,
}

/// Larger depth first, then the lexicographically smaller point.
fn better(a: &Candidate, b: &Candidate) -> Ordering {
    match a.depth.total_cmp(&b.depth) {
        Ordering::Equal => {
            for (x, y) in a.point.iter().zip(&b.point) {
                match y.total_cmp(x) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        }
        o => o,
    }
}

fn normalized(x: &[f64]) -> Vec<f64> {
    let n = norm(x);
    x.iter().map(|v| v / n).collect()
}

/// Ambient gradient `(1/n) sum delta'(theta'W_i) W_i` with near-coincident
/// points left out.
fn gradient(spec: &DeltaSpec, theta: &[f64], sample: &DirectionalSample) -> Vec<f64> {
    let mut g = vec![0.0; theta.len()];
    for w in sample.rows() {
        let t = dot(theta, w);
        if t > 1.0 - GRADIENT_EXCLUSION {
            continue;
        }
        let d = spec.derivative(t);
        for (gi, wi) in g.iter_mut().zip(w) {
            *gi += d * wi;
        }
    }
    let n = sample.len() as f64;
    g.iter_mut().for_each(|x| *x /= n);
    g
}

fn descend(spec: &DeltaSpec, sample: &DirectionalSample, start: &[f64], opts: &DeepestOptions) -> Candidate {
    let mut theta = normalized(start);
    let mut f = mean_distance(spec, &theta, sample);
    let mut iterations = 0;
    while iterations < opts.max_iter {
        let g = gradient(spec, &theta, sample);
        let radial = dot(&theta, &g);
        let gt: Vec<f64> = g.iter().zip(&theta).map(|(gi, ti)| gi - radial * ti).collect();
        let gn2 = dot(&gt, &gt);
        if gn2.sqrt() <= opts.grad_tol {
            break;
        }
        iterations += 1;
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<f64> = theta.iter().zip(&gt).map(|(t, d)| t - step * d).collect();
            let trial = normalized(&trial);
            let ft = mean_distance(spec, &trial, sample);
            if ft <= f - opts.armijo * step * gn2 {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((next, fnext)) = accepted else { break };
        let gain = f - fnext;
        theta = next;
        f = fnext;
        if gain <= 1e-15 * (1.0 + f.abs()) {
            break;
        }
    }
    Candidate {
        depth: depth_raw(spec, &theta, sample),
        point: theta,
        iterations,
    }
}

/// Deepest point of `sample` under `spec`.
///
/// The cosine kernel returns the spherical mean, or
/// [`DepthError::ConstantDepth`] when the resultant vanishes. Other kernels
/// descend from every sample point, the spherical mean when defined and, on
/// the circle, `opts.circle_starts` equispaced angles; the deepest end point
/// wins, ties going to the lexicographically smallest coordinates.
pub fn deepest(spec: &DeltaSpec, sample: &DirectionalSample, opts: &DeepestOptions) -> Result<DeepestResult> {
    if sample.is_empty() {
        return Err(DepthError::EmptySample);
    }
    if spec.kind() == KernelKind::Cos {
        let point = spherical_mean(sample).map_err(|e| match e {
            DepthError::NullResultant => DepthError::ConstantDepth,
            other => other,
        })?;
        let depth = depth_raw(spec, point.coords(), sample);
        return Ok(DeepestResult {
            point,
            depth,
            iterations: 0,
            candidates_evaluated: 1,
        });
    }

    let mut starts: Vec<Vec<f64>> = sample.rows().map(<[f64]>::to_vec).collect();
    if let Ok(m) = spherical_mean(sample) {
        starts.push(m.into_coords());
    }
    if sample.dim() == 2 {
        starts.extend(circle_grid(opts.circle_starts).into_iter().map(|a| vec![a.cos(), a.sin()]));
    }
    let candidates_evaluated = starts.len();
    let best = starts
        .par_iter()
        .map(|s| descend(spec, sample, s, opts))
        .reduce_with(|a, b| if better(&b, &a) == Ordering::Greater { b } else { a })
        .expect("at least one start");
    log::debug!(
        "deepest[{}]: depth {:.12} after {} iterations, {} starts",
        spec.name(),
        best.depth,
        best.iterations,
        candidates_evaluated
    );
    Ok(DeepestResult {
        point: UnitVector::from_raw_unchecked(best.point),
        depth: best.depth,
        iterations: best.iterations,
        candidates_evaluated,
    })
}

/// Exhaustive search over the angles `2 pi k / resolution` of a circular
/// sample; the first maximizing index wins.
pub fn deepest_circle_grid(
    spec: &DeltaSpec,
    sample: &DirectionalSample,
    resolution: usize,
) -> Result<DeepestResult> {
    if sample.dim() != 2 {
        return Err(DepthError::NotCircle(sample.dim()));
    }
    if resolution < 360 {
        return Err(DepthError::InvalidParameter(format!(
            "grid resolution must be at least 360, got {resolution}"
        )));
    }
    let (k, depth) = (0..resolution)
        .into_par_iter()
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / resolution as f64;
            (k, depth_raw(spec, &[a.cos(), a.sin()], sample))
        })
        .reduce_with(|a, b| match b.1.total_cmp(&a.1) {
            Ordering::Greater => b,
            Ordering::Equal if b.0 < a.0 => b,
            _ => a,
        })
        .expect("nonempty grid");
    let a = 2.0 * std::f64::consts::PI * k as f64 / resolution as f64;
    Ok(DeepestResult {
        point: UnitVector::from_angle(a),
        depth,
        iterations: 0,
        candidates_evaluated: resolution,
    })
}
