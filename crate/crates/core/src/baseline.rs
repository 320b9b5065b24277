//! Angular Tukey and angular simplicial depths on the circle.
//!
//! Both use closed arcs: points on the boundary of a half-circle or arc count
//! as inside. A data pair `W_i = -W_j` has no shorter arc and covers nothing.

use std::f64::consts::PI;

use crate::error::{DepthError, Result};
use crate::sphere::{check_dims, DirectionalSample, UnitVector};

/// Tolerance for treating two data points as antipodal in the simplicial depth.
pub const ANTIPODAL_TOLERANCE: f64 = 1e-12;

fn check_circle(theta: &UnitVector, sample: &DirectionalSample) -> Result<()> {
    if sample.dim() != 2 {
        return Err(DepthError::NotCircle(sample.dim()));
    }
    check_dims(2, theta.dim())
}

/// Angles of the sample relative to `theta`, in `[-pi, pi)`.
fn relative_angles(theta: &UnitVector, sample: &DirectionalSample) -> Vec<f64> {
    let (c, s) = (theta.coords()[0], theta.coords()[1]);
    sample
        .rows()
        .map(|w| {
            // rotate w by -theta so that theta sits at angle 0
            let x = c * w[0] + s * w[1];
            let y = c * w[1] - s * w[0];
            let a = y.atan2(x);
            if a >= PI {
                -PI
            } else {
                a
            }
        })
        .collect()
}

/// Angular Tukey depth: the smallest fraction of the sample in a closed
/// half-circle containing `theta`.
///
/// With `theta` at angle 0 the half-circles containing it are `[a, a + pi]`,
/// `a in [-pi, 0]`. The count is a sum of indicators of closed intervals in
/// `a`, so its minimum is attained at an endpoint or strictly between two
/// consecutive breakpoints; each candidate is counted by binary search in the
/// sorted angles. O(n log n).
pub fn atd_circle(theta: &UnitVector, sample: &DirectionalSample) -> Result<f64> {
    check_circle(theta, sample)?;
    let mut phi = relative_angles(theta, sample);
    phi.sort_by(|a, b| a.total_cmp(b));
    let n = phi.len();
    let at_antipode = phi.iter().take_while(|&&p| p == -PI).count();

    // count of phi in [a, a + pi]; phi = -pi is also the angle pi
    let count = |a: f64| -> usize {
        let b = a + PI;
        let lo = phi.partition_point(|&p| p < a);
        let hi = phi.partition_point(|&p| p <= b);
        let mut c = hi - lo;
        if a > -PI && b >= PI {
            c += at_antipode;
        }
        c
    };

    let mut breaks: Vec<f64> = phi
        .iter()
        .map(|&p| if p <= 0.0 { p } else { p - PI })
        .chain([-PI, 0.0])
        .collect();
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup();

    let mut best = count(-PI).min(count(0.0));
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        best = best.min(count(mid));
        if best == 0 {
            break;
        }
    }
    Ok(best as f64 / n as f64)
}

/// Angular simplicial depth: the fraction of pairs `i < j` whose closed
/// shorter arc contains `theta`. Exact pair enumeration, O(n^2).
pub fn asd_circle(theta: &UnitVector, sample: &DirectionalSample) -> Result<f64> {
    check_circle(theta, sample)?;
    let n = sample.len();
    if n < 2 {
        return Err(DepthError::SampleTooSmall { needed: 2, found: n });
    }
    let phi = relative_angles(theta, sample);
    let mut covered = 0u64;
    for i in 0..n {
        let wi = sample.row(i);
        for j in (i + 1)..n {
            let wj = sample.row(j);
            if (wi[0] + wj[0]).abs() <= ANTIPODAL_TOLERANCE && (wi[1] + wj[1]).abs() <= ANTIPODAL_TOLERANCE {
                continue;
            }
            let (lo, hi) = if phi[i] <= phi[j] { (phi[i], phi[j]) } else { (phi[j], phi[i]) };
            // an arc wrapping through pi cannot contain 0 except at an endpoint
            let hit = if hi - lo <= PI {
                lo <= 0.0 && 0.0 <= hi
            } else {
                lo == 0.0 || hi == 0.0
            };
            if hit {
                covered += 1;
            }
        }
    }
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    Ok(covered as f64 / pairs as f64)
}
