//! Breakdown lower bounds, concentration curves and asymptotic variances.

use sphere_depth::{
    bdp_lower_bound_vmf, depth_variance, max_depth_curve, DeltaSpec, ModeSign, QuadratureSpec,
};

fn main() -> sphere_depth::Result<()> {
    let quad = QuadratureSpec::default();
    let kernels = [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()];
    let kappas = [0.5, 1.0, 5.0, 20.0, 100.0];

    println!("breakdown lower bound, q = 3");
    print!("{:>8}", "kappa");
    for k in &kernels {
        print!("{:>10}", k.name());
    }
    println!();
    for kappa in kappas {
        print!("{kappa:>8}");
        for spec in &kernels {
            print!("{:>10.4}", bdp_lower_bound_vmf(spec, 3, kappa, &quad)?);
        }
        println!();
    }

    println!("\nmaximal depth against kappa, arc kernel, q = 5");
    for (kappa, d) in max_depth_curve(&DeltaSpec::arc(), 5, &kappas, &quad)? {
        println!("{kappa:>8} {d:.5}");
    }

    println!("\nasymptotic variance of the depth at the mode, q = 3, kappa = 5");
    for spec in &kernels {
        println!("{:<6} {:.5}", spec.name(), depth_variance(spec, ModeSign::Mode, 3, 5.0, &quad)?);
    }
    Ok(())
}
