//! Depth of a few locations under the three distance kernels.

use std::f64::consts::PI;

use sphere_depth::{depth, depth_cos_closed, sample_vmf, DeltaSpec, UnitVector, VmfModel};

fn main() -> sphere_depth::Result<()> {
    let mode = UnitVector::basis(3, 3)?;
    let sample = sample_vmf(&VmfModel::new(mode.clone(), 5.0)?, 500, 42)?;

    let probes = [
        ("mode", mode.clone()),
        ("equator", UnitVector::basis(3, 1)?),
        ("antipode", -&mode),
    ];
    println!("{:<10}{:>10}{:>10}{:>10}", "location", "arc", "cos", "chord");
    for (name, theta) in &probes {
        print!("{name:<10}");
        for spec in [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()] {
            print!("{:>10.4}", depth(&spec, theta, &sample)?.value);
        }
        println!();
    }

    let closed = depth_cos_closed(&mode, &sample)?.value;
    println!("\ncos depth at the mode via the sample mean: {closed:.4}");

    // a custom kernel: squared chord, normalised to d_sup = 1
    let half_chord = DeltaSpec::custom("half-chord-sq", |t| (1.0 - t) / 2.0)?;
    println!("custom kernel at the mode: {:.4}", depth(&half_chord, &mode, &sample)?.value);

    let circle = sphere_depth::DirectionalSample::from_angles(&[0.0, PI / 2.0, PI])?;
    let d = depth(&DeltaSpec::arc(), &UnitVector::from_angle(PI / 2.0), &circle)?;
    println!("arc depth of the middle of three circle points: {:.4}", d.value);
    Ok(())
}
