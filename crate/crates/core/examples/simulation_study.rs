//! Small efficiency study written as CSV and SVG.

use sphere_depth::experiments::{run, Experiment, ExperimentConfig, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ExperimentConfig {
        replications: 20,
        q: vec![3],
        n: vec![25, 100],
        kappa: vec![10.0],
        ..ExperimentConfig::desk(Experiment::Efficiency)
    };
    let table = run(&config)?;
    for kernel in ["arc", "cos", "chord"] {
        for n in ["25", "100"] {
            let mse = table.value(&[("stat", "mse"), ("n", n), ("kernel", kernel)], "value").unwrap_or(f64::NAN);
            println!("{kernel:<6} n={n:<4} mse {mse:.5}");
        }
    }
    let dir = std::env::temp_dir();
    table.emit(Format::Csv, dir.join("efficiency.csv"))?;
    table.emit(Format::Svg, dir.join("efficiency.svg"))?;
    println!("wrote efficiency.csv and efficiency.svg to {}", dir.display());
    Ok(())
}
