//! Max-depth classification of directions into two populations.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::baseline::{asd_circle, atd_circle};
use crate::depth::depth_raw;
use crate::error::{DepthError, Result};
use crate::rng::{mix64, stream_seed, CounterRng};
use crate::sphere::{check_dims, DeltaSpec, DirectionalSample, KernelKind, UnitVector};

/// Depth used by the classifier: a distance-based depth or one of the circle
/// baselines.
#[derive(Debug, Clone)]
pub enum ClassifierDepth {
    Distance(DeltaSpec),
    Atd,
    Asd,
}

impl ClassifierDepth {
    pub fn name(&self) -> &str {
        match self {
            ClassifierDepth::Distance(s) => s.name(),
            ClassifierDepth::Atd => "atd",
            ClassifierDepth::Asd => "asd",
        }
    }

    fn evaluate(&self, w: &UnitVector, sample: &DirectionalSample) -> Result<f64> {
        match self {
            ClassifierDepth::Distance(spec) => Ok(depth_raw(spec, w.coords(), sample)),
            ClassifierDepth::Atd => atd_circle(w, sample),
            ClassifierDepth::Asd => asd_circle(w, sample),
        }
    }
}

impl From<DeltaSpec> for ClassifierDepth {
    fn from(s: DeltaSpec) -> Self {
        ClassifierDepth::Distance(s)
    }
}

impl fmt::Display for ClassifierDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierDepth {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "atd" => Ok(ClassifierDepth::Atd),
            "asd" => Ok(ClassifierDepth::Asd),
            other => Ok(ClassifierDepth::Distance(DeltaSpec::builtin(other.parse::<KernelKind>()?)?)),
        }
    }
}

/// Population label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Population {
    One,
    Two,
}

impl Population {
    pub fn as_u8(self) -> u8 {
        match self {
            Population::One => 1,
            Population::Two => 2,
        }
    }

    pub fn from_u8(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Population::One),
            2 => Ok(Population::Two),
            _ => Err(DepthError::InvalidParameter(format!("label must be 1 or 2, got {v}"))),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Population::One => Population::Two,
            Population::Two => Population::One,
        }
    }
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Fitted two-population max-depth classifier.
#[derive(Debug, Clone)]
pub struct DepthClassifier {
    depth: ClassifierDepth,
    sample1: DirectionalSample,
    sample2: DirectionalSample,
    tie_seed: u64,
}

/// Stores the training samples; depths are computed on demand.
pub fn fit(
    depth: impl Into<ClassifierDepth>,
    sample1: DirectionalSample,
    sample2: DirectionalSample,
    tie_seed: u64,
) -> Result<DepthClassifier> {
    let depth = depth.into();
    check_dims(sample1.dim(), sample2.dim())?;
    if sample1.is_empty() || sample2.is_empty() {
        return Err(DepthError::EmptySample);
    }
    if !matches!(depth, ClassifierDepth::Distance(_)) && sample1.dim() != 2 {
        return Err(DepthError::NotCircle(sample1.dim()));
    }
    if matches!(depth, ClassifierDepth::Asd) {
        for s in [&sample1, &sample2] {
            if s.len() < 2 {
                return Err(DepthError::SampleTooSmall { needed: 2, found: s.len() });
            }
        }
    }
    Ok(DepthClassifier {
        depth,
        sample1,
        sample2,
        tie_seed,
    })
}

impl DepthClassifier {
    pub fn depth(&self) -> &ClassifierDepth {
        &self.depth
    }

    pub fn dim(&self) -> usize {
        self.sample1.dim()
    }

    pub fn tie_seed(&self) -> u64 {
        self.tie_seed
    }

    /// Depths of `w` in both training samples.
    pub fn depths(&self, w: &UnitVector) -> Result<(f64, f64)> {
        check_dims(self.dim(), w.dim())?;
        Ok((self.depth.evaluate(w, &self.sample1)?, self.depth.evaluate(w, &self.sample2)?))
    }

    /// Population with the larger depth at `w`; exact ties are settled by a
    /// fair coin seeded from `tie_seed` and the bits of `w`.
    pub fn classify(&self, w: &UnitVector) -> Result<Population> {
        let (d1, d2) = self.depths(w)?;
        Ok(if d1 > d2 {
            Population::One
        } else if d2 > d1 {
            Population::Two
        } else if tie_coin(self.tie_seed, w) {
            Population::One
        } else {
            Population::Two
        })
    }

    pub fn classify_all(&self, test: &DirectionalSample) -> Result<Vec<Population>> {
        check_dims(self.dim(), test.dim())?;
        (0..test.len()).into_par_iter().map(|i| self.classify(&test.point(i))).collect()
    }

    /// Model with the two training samples swapped.
    pub fn swapped(&self) -> Self {
        Self {
            depth: self.depth.clone(),
            sample1: self.sample2.clone(),
            sample2: self.sample1.clone(),
            tie_seed: self.tie_seed,
        }
    }
}

fn point_hash(w: &UnitVector) -> u64 {
    w.coords().iter().fold(0x6A09_E667_F3BC_C908, |h, x| mix64(h ^ x.to_bits()))
}

fn tie_coin(tie_seed: u64, w: &UnitVector) -> bool {
    CounterRng::new(stream_seed(tie_seed, point_hash(w))).next_f64() < 0.5
}

/// Fraction of `test` points whose predicted population differs from `labels`.
pub fn misclassification_rate(model: &DepthClassifier, test: &DirectionalSample, labels: &[Population]) -> Result<f64> {
    if test.len() != labels.len() {
        return Err(DepthError::LengthMismatch {
            left: test.len(),
            right: labels.len(),
        });
    }
    let predicted = model.classify_all(test)?;
    let wrong = predicted.iter().zip(labels).filter(|(p, l)| p != l).count();
    Ok(wrong as f64 / labels.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::spherical_mean;
    use crate::sampling::{sample_uniform, sample_vmf, VmfModel};
    use crate::sphere::{dot, random_rotation};
    use std::f64::consts::PI;

    fn kernels() -> [DeltaSpec; 3] {
        [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()]
    }

    #[test]
    fn point_masses() {
        let w = UnitVector::from_components(&[1.0, 1.0, 0.0]).unwrap();
        let m = fit(
            DeltaSpec::arc(),
            DirectionalSample::new(vec![w.clone()]).unwrap(),
            DirectionalSample::new(vec![-&w]).unwrap(),
            0,
        )
        .unwrap();
        let (d1, d2) = m.depths(&w).unwrap();
        assert!((d1 - PI).abs() < 1e-7 && d2.abs() < 1e-7);
        assert_eq!(m.classify(&w).unwrap(), Population::One);
        assert_eq!(m.classify(&-&w).unwrap(), Population::Two);
    }

    #[test]
    fn training_points_and_swaps() {
        let a = sample_vmf(&VmfModel::on_circle(0.0, 8.0).unwrap(), 30, 1).unwrap();
        let b = sample_vmf(&VmfModel::on_circle(PI, 8.0).unwrap(), 30, 2).unwrap();
        for kind in ["arc", "cos", "chord", "atd", "asd"] {
            let depth: ClassifierDepth = kind.parse().unwrap();
            let m = fit(depth, a.clone(), b.clone(), 5).unwrap();
            assert_eq!(m.classify(&UnitVector::from_angle(0.0)).unwrap(), Population::One);
            let flipped = m.swapped();
            let queries = sample_uniform(2, 200, 3).unwrap();
            for w in queries.points() {
                let (d1, d2) = m.depths(&w).unwrap();
                if d1 != d2 {
                    assert_eq!(m.classify(&w).unwrap(), flipped.classify(&w).unwrap().other());
                }
            }
        }
    }

    #[test]
    fn fit_validation() {
        let one = DirectionalSample::from_angles(&[0.1]).unwrap();
        assert!(fit(DeltaSpec::cos(), one.clone(), one.clone(), 0).is_ok());
        assert!(matches!(
            fit(ClassifierDepth::Asd, one.clone(), one.clone(), 0),
            Err(DepthError::SampleTooSmall { .. })
        ));
        let sphere = DirectionalSample::new(vec![UnitVector::basis(3, 1).unwrap()]).unwrap();
        assert!(matches!(
            fit(DeltaSpec::cos(), one.clone(), sphere.clone(), 0),
            Err(DepthError::DimMismatch { .. })
        ));
        assert_eq!(
            fit(ClassifierDepth::Atd, sphere.clone(), sphere, 0).unwrap_err(),
            DepthError::NotCircle(3)
        );
    }

    #[test]
    fn identical_samples_flip_fair_coins() {
        let s = sample_vmf(&VmfModel::new(UnitVector::basis(3, 1).unwrap(), 2.0).unwrap(), 20, 4).unwrap();
        let m = fit(DeltaSpec::chord(), s.clone(), s, 77).unwrap();
        let queries = sample_uniform(3, 10_000, 8).unwrap();
        let labels = m.classify_all(&queries).unwrap();
        let ones = labels.iter().filter(|l| **l == Population::One).count() as f64 / 10_000.0;
        assert!((0.48..=0.52).contains(&ones), "{ones}");
        assert_eq!(labels, m.classify_all(&queries).unwrap());
    }

    #[test]
    fn cosine_rule_is_a_halfspace() {
        let a = sample_vmf(&VmfModel::new(UnitVector::basis(4, 1).unwrap(), 2.0).unwrap(), 25, 1).unwrap();
        let b = sample_vmf(&VmfModel::new(UnitVector::basis(4, 2).unwrap(), 2.0).unwrap(), 35, 2).unwrap();
        let diff: Vec<f64> = a.resultant().iter().zip(b.resultant()).map(|(x, y)| x - y).collect();
        let m = fit(DeltaSpec::cos(), a, b, 0).unwrap();
        for w in sample_uniform(4, 500, 9).unwrap().points() {
            let s = dot(w.coords(), &diff);
            if s.abs() > 1e-12 {
                let expected = if s > 0.0 { Population::One } else { Population::Two };
                assert_eq!(m.classify(&w).unwrap(), expected);
            }
        }
        assert!(spherical_mean(&sample_uniform(4, 3, 1).unwrap()).is_ok());
    }

    #[test]
    fn rotation_equivariance() {
        let a = sample_vmf(&VmfModel::new(UnitVector::basis(3, 1).unwrap(), 3.0).unwrap(), 20, 1).unwrap();
        let b = sample_vmf(&VmfModel::new(UnitVector::basis(3, 3).unwrap(), 3.0).unwrap(), 20, 2).unwrap();
        let o = random_rotation(3, 12).unwrap();
        for spec in kernels() {
            let m = fit(spec.clone(), a.clone(), b.clone(), 0).unwrap();
            let r = fit(spec, o.apply_sample(&a).unwrap(), o.apply_sample(&b).unwrap(), 0).unwrap();
            for w in sample_uniform(3, 200, 5).unwrap().points() {
                let (d1, d2) = m.depths(&w).unwrap();
                if (d1 - d2).abs() > 1e-10 {
                    assert_eq!(m.classify(&w).unwrap(), r.classify(&o.apply(&w).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn rates() {
        let a = DirectionalSample::from_angles(&[0.0, 0.1]).unwrap();
        let b = DirectionalSample::from_angles(&[PI, PI + 0.1]).unwrap();
        let m = fit(DeltaSpec::arc(), a.clone(), b.clone(), 0).unwrap();
        let test = a.concat(&b).unwrap();
        let truth = [Population::One, Population::One, Population::Two, Population::Two];
        assert_eq!(misclassification_rate(&m, &test, &truth).unwrap(), 0.0);
        let wrong: Vec<Population> = truth.iter().map(|p| p.other()).collect();
        assert_eq!(misclassification_rate(&m, &test, &wrong).unwrap(), 1.0);
        assert_eq!(
            misclassification_rate(&m, &test, &truth[..3]).unwrap_err(),
            DepthError::LengthMismatch { left: 4, right: 3 }
        );
    }

    #[test]
    fn distance_depths_are_positive() {
        for spec in kernels() {
            let s = sample_uniform(3, 50, 6).unwrap();
            for w in sample_uniform(3, 100, 7).unwrap().points() {
                assert!(depth_raw(&spec, w.coords(), &s) > 0.0);
            }
        }
    }
}
