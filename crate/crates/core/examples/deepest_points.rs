//! Deepest points of a vMF sample and of a circular sample.

use sphere_depth::{deepest, deepest_circle_grid, sample_vmf, DeepestOptions, DeltaSpec, UnitVector, VmfModel};

fn main() -> sphere_depth::Result<()> {
    let theta0 = UnitVector::new(vec![0.0, 0.6, 0.8])?;
    let sample = sample_vmf(&VmfModel::new(theta0.clone(), 5.0)?, 400, 7)?;
    let opts = DeepestOptions::default();
    for spec in [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()] {
        let r = deepest(&spec, &sample, &opts)?;
        println!(
            "{:<6} depth {:.5}  angle to mode {:.4} rad  ({} starts)",
            spec.name(),
            r.depth,
            r.point.angle_to(&theta0)?,
            r.candidates_evaluated
        );
    }

    let circle = sample_vmf(&VmfModel::on_circle(2.0, 3.0)?, 25, 11)?;
    let fast = deepest(&DeltaSpec::arc(), &circle, &opts)?;
    let brute = deepest_circle_grid(&DeltaSpec::arc(), &circle, 100_000)?;
    println!(
        "\ncircular median: optimizer {:.5} rad, grid {:.5} rad",
        fast.point.angle()?,
        brute.point.angle()?
    );
    Ok(())
}
