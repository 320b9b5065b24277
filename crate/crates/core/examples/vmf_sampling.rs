//! Draws from vMF, mixture and contaminated laws and writes one sample file.

use sphere_depth::io::write_sample;
use sphere_depth::{
    mean_resultant_length, resultant_length, sample_contaminated, sample_mixture, sample_vmf, ContaminatedModel,
    MixtureModel, QuadratureSpec, UnitVector, VmfModel,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let quad = QuadratureSpec::default();
    for q in [2, 3, 10] {
        let model = VmfModel::new(UnitVector::basis(q, q)?, 5.0)?;
        let s = sample_vmf(&model, 20_000, 1)?;
        println!(
            "q={q:<3} empirical resultant {:.4}  population {:.4}",
            resultant_length(&s),
            mean_resultant_length(q, 5.0, &quad)?
        );
    }

    let bimodal = MixtureModel::uniform_weights(vec![
        VmfModel::on_circle(0.0, 10.0)?,
        VmfModel::on_circle(std::f64::consts::PI, 10.0)?,
    ])?;
    let s = sample_mixture(&bimodal, 1000, 2)?;
    println!("bimodal circle sample: resultant {:.4}", resultant_length(&s));

    let base = VmfModel::new(UnitVector::basis(3, 3)?, 5.0)?;
    let atom = -&UnitVector::basis(3, 3)?;
    let dirty = sample_contaminated(&ContaminatedModel::new(base, 0.1, atom.clone())?, 1000, 3)?;
    let hits = dirty.points().filter(|p| p == &atom).count();
    println!("contaminated sample: {hits} of 1000 points at the antipode");

    let path = std::env::temp_dir().join("vmf_q3.csv");
    write_sample(&dirty, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
