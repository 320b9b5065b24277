//! Two-population max-depth classification on the sphere.

use sphere_depth::rng::stream_seed;
use sphere_depth::{
    fit, misclassification_rate, sample_two_populations, ClassifierDepth, DeltaSpec, MixtureModel, UnitVector,
    VmfModel,
};

fn main() -> sphere_depth::Result<()> {
    let q = 5;
    let h1 = MixtureModel::from(VmfModel::new(UnitVector::basis(q, 1)?, 4.0)?);
    let h2 = MixtureModel::from(VmfModel::new(UnitVector::basis(q, q)?, 4.0)?);

    let (train, labels) = sample_two_populations(&h1, &h2, 300, stream_seed(1, 0))?;
    let pick = |want| {
        let pts = train.points().zip(&labels).filter(|(_, l)| **l == want).map(|(p, _)| p).collect();
        sphere_depth::DirectionalSample::new(pts)
    };
    let (s1, s2) = (pick(sphere_depth::Population::One)?, pick(sphere_depth::Population::Two)?);
    let (test, truth) = sample_two_populations(&h1, &h2, 500, stream_seed(1, 1))?;

    for spec in [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()] {
        let name = spec.name().to_owned();
        let model = fit(ClassifierDepth::Distance(spec), s1.clone(), s2.clone(), 9)?;
        println!("{name:<6} test error {:.3}", misclassification_rate(&model, &test, &truth)?);
    }
    Ok(())
}
