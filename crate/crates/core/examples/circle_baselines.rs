//! Angular Tukey and simplicial depths next to the arc-distance depth.

use std::f64::consts::PI;

use sphere_depth::{asd_circle, atd_circle, depth, sample_mixture, DeltaSpec, MixtureModel, UnitVector, VmfModel};

fn main() -> sphere_depth::Result<()> {
    let law = MixtureModel::uniform_weights(vec![VmfModel::on_circle(3.0 * PI / 4.0, 5.0)?, VmfModel::on_circle(5.0 * PI / 4.0, 5.0)?])?;
    let sample = sample_mixture(&law, 200, 5)?;
    println!("{:>7}{:>8}{:>8}{:>8}", "angle", "atd", "asd", "arc");
    for k in 0..12 {
        let a = 2.0 * PI * k as f64 / 12.0;
        let t = UnitVector::from_angle(a);
        println!(
            "{:>7.3}{:>8.3}{:>8.3}{:>8.3}",
            a,
            atd_circle(&t, &sample)?,
            asd_circle(&t, &sample)?,
            depth(&DeltaSpec::arc(), &t, &sample)?.value
        );
    }
    Ok(())
}
