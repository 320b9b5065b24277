//! Distance-based depth `D(theta, H) = d_sup - E_H[delta(theta'W)]`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{DepthError, Result};
use crate::quadrature::{rotsym_expectation, QuadratureSpec};
use crate::sphere::{check_dims, dot, norm, DeltaSpec, DirectionalSample, KernelKind, UnitVector};

/// Threshold on `||W_bar||` below which the spherical mean is undefined.
pub const NULL_RESULTANT_TOLERANCE: f64 = 1e-12;

/// Depth of one location.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthValue {
    pub value: f64,
    pub theta: UnitVector,
    pub kind: KernelKind,
}

/// Which end of the modal axis a population depth is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSign {
    /// `theta = theta0`
    Mode,
    /// `theta = -theta0`
    Antimode,
}

impl ModeSign {
    pub fn sign(self) -> f64 {
        match self {
            ModeSign::Mode => 1.0,
            ModeSign::Antimode => -1.0,
        }
    }
}

/// `(1/n) sum_i delta(theta'W_i)` without dimension checks.
pub(crate) fn mean_distance(spec: &DeltaSpec, theta: &[f64], sample: &DirectionalSample) -> f64 {
    let total: f64 = sample.rows().map(|w| spec.eval(dot(theta, w))).sum();
    total / sample.len() as f64
}

pub(crate) fn depth_raw(spec: &DeltaSpec, theta: &[f64], sample: &DirectionalSample) -> f64 {
    spec.d_sup() - mean_distance(spec, theta, sample)
}

/// Empirical depth of `theta` with respect to `sample`.
pub fn depth(spec: &DeltaSpec, theta: &UnitVector, sample: &DirectionalSample) -> Result<DepthValue> {
    check_dims(sample.dim(), theta.dim())?;
    let value = depth_raw(spec, theta.coords(), sample);
    Ok(DepthValue {
        value,
        theta: theta.clone(),
        kind: spec.kind(),
    })
}

/// Cosine depth through the closed form `1 + theta' W_bar`.
pub fn depth_cos_closed(theta: &UnitVector, sample: &DirectionalSample) -> Result<DepthValue> {
    check_dims(sample.dim(), theta.dim())?;
    let mean = sample.resultant();
    Ok(DepthValue {
        value: 1.0 + dot(theta.coords(), &mean),
        theta: theta.clone(),
        kind: KernelKind::Cos,
    })
}

/// `W_bar / ||W_bar||`.
pub fn spherical_mean(sample: &DirectionalSample) -> Result<UnitVector> {
    let mean = sample.resultant();
    let len = norm(&mean);
    if len < NULL_RESULTANT_TOLERANCE {
        return Err(DepthError::NullResultant);
    }
    UnitVector::from_components(&mean)
}

/// Mean resultant length `||W_bar||` of a sample.
pub fn resultant_length(sample: &DirectionalSample) -> f64 {
    norm(&sample.resultant())
}

/// Depth at the angles `2 pi k / grid`, `k = 0..grid`, of a circular sample.
pub fn depth_profile_circle(
    spec: &DeltaSpec,
    sample: &DirectionalSample,
    grid: usize,
) -> Result<Vec<(f64, f64)>> {
    if sample.dim() != 2 {
        return Err(DepthError::NotCircle(sample.dim()));
    }
    if grid < 4 {
        return Err(DepthError::InvalidParameter(format!(
            "profile grid must have at least 4 points, got {grid}"
        )));
    }
    Ok(circle_grid(grid)
        .into_par_iter()
        .map(|alpha| {
            let theta = [alpha.cos(), alpha.sin()];
            (alpha, depth_raw(spec, &theta, sample))
        })
        .collect())
}

pub(crate) fn circle_grid(grid: usize) -> Vec<f64> {
    (0..grid).map(|k| 2.0 * PI * k as f64 / grid as f64).collect()
}

/// Population depth of `+-theta0` under vMF(theta0, kappa) on `S^{q-1}`:
/// `d_sup - E[delta(+-V)]` with `V = W'theta0`.
pub fn vmf_population_depth(
    spec: &DeltaSpec,
    q: usize,
    kappa: f64,
    at: ModeSign,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let s = at.sign();
    let mean = rotsym_expectation(|v| spec.eval(s * v), q, kappa, quad)?;
    Ok(spec.d_sup() - mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;
    use crate::sphere::random_rotation;
    use proptest::prelude::*;

    fn e(q: usize, j: usize) -> UnitVector {
        UnitVector::basis(q, j).unwrap()
    }

    fn random_sample(q: usize, n: usize, rng: &mut CounterRng) -> DirectionalSample {
        let pts = (0..n)
            .map(|_| {
                let xs: Vec<f64> = (0..q).map(|_| rng.standard_normal()).collect();
                UnitVector::from_components(&xs).unwrap()
            })
            .collect();
        DirectionalSample::new(pts).unwrap()
    }

    #[test]
    fn depth_examples() {
        let theta = UnitVector::from_angle(0.7);
        let mass = DirectionalSample::new(vec![theta.clone()]).unwrap();
        let arc = DeltaSpec::arc();
        assert_eq!(depth(&arc, &theta, &mass).unwrap().value, PI);
        assert!(depth(&arc, &-&theta, &mass).unwrap().value.abs() < 1e-15);

        let pair = DirectionalSample::new(vec![e(2, 1), e(2, 2)]).unwrap();
        let d = depth(&arc, &e(2, 1), &pair).unwrap().value;
        assert!((d - 3.0 * PI / 4.0).abs() < 1e-15);
        let d = depth(&DeltaSpec::chord(), &e(2, 1), &pair).unwrap().value;
        assert!((d - (2.0 - 2f64.sqrt() / 2.0)).abs() < 1e-15);
        assert!((d - 1.29289).abs() < 1e-5);
    }

    #[test]
    fn depth_errors() {
        let s = DirectionalSample::new(vec![e(3, 1)]).unwrap();
        assert!(matches!(
            depth(&DeltaSpec::arc(), &e(2, 1), &s),
            Err(DepthError::DimMismatch { .. })
        ));
        assert_eq!(DirectionalSample::new(vec![]).unwrap_err(), DepthError::EmptySample);
    }

    #[test]
    fn cos_closed_examples() {
        let pair = DirectionalSample::new(vec![e(2, 1), e(2, 2)]).unwrap();
        assert!((depth_cos_closed(&e(2, 1), &pair).unwrap().value - 1.5).abs() < 1e-15);
        let w = UnitVector::from_angle(1.1);
        let anti = DirectionalSample::new(vec![w.clone(), -&w]).unwrap();
        assert!((depth_cos_closed(&UnitVector::from_angle(4.0), &anti).unwrap().value - 1.0).abs() < 1e-15);
        let mass = DirectionalSample::new(vec![w.clone()]).unwrap();
        assert!((depth_cos_closed(&w, &mass).unwrap().value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn spherical_mean_examples() {
        let w = UnitVector::from_angle(2.0);
        let mass = DirectionalSample::new(vec![w.clone()]).unwrap();
        let m = spherical_mean(&mass).unwrap();
        assert!((m.inner(&w).unwrap() - 1.0).abs() < 1e-15);
        let pair = DirectionalSample::new(vec![e(2, 1), e(2, 2)]).unwrap();
        let m = spherical_mean(&pair).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((m.coords()[0] - h).abs() < 1e-15 && (m.coords()[1] - h).abs() < 1e-15);
        let anti = DirectionalSample::new(vec![w.clone(), -&w]).unwrap();
        assert_eq!(spherical_mean(&anti).unwrap_err(), DepthError::NullResultant);
    }

    #[test]
    fn profile_examples() {
        let w = UnitVector::from_angle(0.4);
        let anti = DirectionalSample::new(vec![w.clone(), -&w]).unwrap();
        let prof = depth_profile_circle(&DeltaSpec::arc(), &anti, 8).unwrap();
        assert_eq!(prof.len(), 8);
        for (_, d) in &prof {
            assert!((d - PI / 2.0).abs() < 1e-12);
        }
        let mass = DirectionalSample::from_angles(&[0.0]).unwrap();
        for spec in [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()] {
            let prof = depth_profile_circle(&spec, &mass, 36).unwrap();
            let best = prof
                .iter()
                .enumerate()
                .max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
                .unwrap()
                .0;
            assert_eq!(best, 0);
        }
        let sphere = DirectionalSample::new(vec![e(3, 1)]).unwrap();
        assert_eq!(
            depth_profile_circle(&DeltaSpec::arc(), &sphere, 8).unwrap_err(),
            DepthError::NotCircle(3)
        );
        assert!(depth_profile_circle(&DeltaSpec::arc(), &mass, 3).is_err());
    }

    #[test]
    fn vmf_population_depth_examples() {
        let quad = QuadratureSpec::default();
        let a3 = 1.0 / 5f64.tanh() - 0.2;
        let plus = vmf_population_depth(&DeltaSpec::cos(), 3, 5.0, ModeSign::Mode, &quad).unwrap();
        let minus = vmf_population_depth(&DeltaSpec::cos(), 3, 5.0, ModeSign::Antimode, &quad).unwrap();
        assert!((plus - (1.0 + a3)).abs() < 1e-12);
        assert!((minus - (1.0 - a3)).abs() < 1e-12);
        assert!((plus - 1.800_090_8).abs() < 1e-7);
        for q in [2, 3, 5] {
            let d = vmf_population_depth(&DeltaSpec::arc(), q, 1e-9, ModeSign::Mode, &quad).unwrap();
            assert!((d - PI / 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn continuity_bound() {
        // |D(theta') - D(theta)| <= L h for the cos and chord kernels (L = 1),
        // since delta(theta'w) is 1-Lipschitz in the chord and hence the arc
        let mut rng = CounterRng::new(41);
        let sample = random_sample(3, 40, &mut rng);
        for spec in [DeltaSpec::cos(), DeltaSpec::chord()] {
            for _ in 0..50 {
                let theta = random_sample(3, 1, &mut rng).point(0);
                let other = random_sample(3, 1, &mut rng).point(0);
                let h = theta.angle_to(&other).unwrap();
                let diff = depth(&spec, &theta, &sample).unwrap().value
                    - depth(&spec, &other, &sample).unwrap().value;
                assert!(diff.abs() <= h + 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn rotation_invariance(seed in any::<u64>(), q in 2usize..7, n in 1usize..30) {
            let mut rng = CounterRng::new(seed);
            let sample = random_sample(q, n, &mut rng);
            let theta = random_sample(q, 1, &mut rng).point(0);
            let o = random_rotation(q, seed.rotate_left(17)).unwrap();
            let rs = o.apply_sample(&sample).unwrap();
            let rt = o.apply(&theta).unwrap();
            for spec in [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()] {
                let a = depth(&spec, &theta, &sample).unwrap().value;
                let b = depth(&spec, &rt, &rs).unwrap().value;
                prop_assert!((a - b).abs() <= 1e-10);
            }
        }

        #[test]
        fn closed_form_agrees(seed in any::<u64>(), q in 2usize..11, n in 1usize..50) {
            let mut rng = CounterRng::new(seed);
            let sample = random_sample(q, n, &mut rng);
            let theta = random_sample(q, 1, &mut rng).point(0);
            let a = depth(&DeltaSpec::cos(), &theta, &sample).unwrap().value;
            let b = depth_cos_closed(&theta, &sample).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn antisymmetric_kernels_reflect(seed in any::<u64>(), q in 2usize..6, n in 1usize..30) {
            let mut rng = CounterRng::new(seed);
            let sample = random_sample(q, n, &mut rng);
            let theta = random_sample(q, 1, &mut rng).point(0);
            for spec in [DeltaSpec::arc(), DeltaSpec::cos()] {
                let a = depth(&spec, &theta, &sample).unwrap().value;
                let b = depth(&spec, &-&theta, &sample).unwrap().value;
                prop_assert!((a + b - spec.d_sup()).abs() <= 1e-12);
                prop_assert!(a >= 0.0 && a <= spec.d_sup());
            }
        }
    }

    #[test]
    fn chord_is_not_antisymmetric() {
        let sample = DirectionalSample::from_angles(&[0.0]).unwrap();
        let theta = UnitVector::from_angle(PI / 2.0);
        let spec = DeltaSpec::chord();
        let a = depth(&spec, &theta, &sample).unwrap().value;
        let b = depth(&spec, &-&theta, &sample).unwrap().value;
        // both equal 2 - sqrt(2)
        assert!((a + b - 2.0).abs() > 0.01);
    }
}
