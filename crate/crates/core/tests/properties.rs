use proptest::prelude::*;

use sphere_depth::classification::{fit, Population};
use sphere_depth::deepest::{deepest, DeepestOptions};
use sphere_depth::depth::depth;
use sphere_depth::rng::stream_seed;
use sphere_depth::sampling::{sample_contaminated, sample_mixture, sample_vmf, ContaminatedModel, MixtureModel, VmfModel};
use sphere_depth::sphere::{random_rotation, DeltaSpec, UnitVector};

fn kernel(i: usize) -> DeltaSpec {
    [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()][i % 3].clone()
}

fn mode(q: usize, seed: u64) -> UnitVector {
    let s = sphere_depth::sampling::sample_uniform(q, 1, seed).unwrap();
    s.point(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vmf_draws_are_prefix_stable(q in 2usize..8, kappa in 0.1f64..50.0, n in 1usize..80, seed: u64) {
        let model = VmfModel::new(mode(q, seed ^ 1), kappa).unwrap();
        let long = sample_vmf(&model, n + 17, seed).unwrap();
        let short = sample_vmf(&model, n, seed).unwrap();
        prop_assert_eq!(long.prefix(n).unwrap(), short);
    }

    #[test]
    fn samples_stay_on_sphere(q in 2usize..12, kappa in 0.0f64..500.0, seed: u64) {
        let model = VmfModel::new(mode(q, seed), kappa.max(1e-9)).unwrap();
        for row in sample_vmf(&model, 64, seed).unwrap().rows() {
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_contamination_is_base_sample(q in 2usize..6, kappa in 0.5f64..20.0, n in 1usize..60, seed: u64) {
        let base = MixtureModel::from(VmfModel::new(mode(q, seed), kappa).unwrap());
        let atom = UnitVector::basis(q, 1).unwrap();
        let clean = sample_contaminated(&ContaminatedModel::new(base.clone(), 0.0, atom).unwrap(), n, seed).unwrap();
        let direct = sample_mixture(&base, n, stream_seed(seed, 1)).unwrap();
        prop_assert_eq!(clean, direct);
    }

    #[test]
    fn deepest_point_is_equivariant(q in 2usize..5, k in 0usize..3, seed: u64) {
        let spec = kernel(k);
        let model = VmfModel::new(mode(q, seed), 4.0).unwrap();
        let s = sample_vmf(&model, 31, seed).unwrap();
        let o = random_rotation(q, seed.wrapping_add(9)).unwrap();
        let opts = DeepestOptions::default();
        let a = deepest(&spec, &s, &opts).unwrap();
        let b = deepest(&spec, &o.apply_sample(&s).unwrap(), &opts).unwrap();
        prop_assert!((a.depth - b.depth).abs() < 1e-9);
        prop_assert!(o.apply(&a.point).unwrap().angle_to(&b.point).unwrap() < 1e-4);
    }

    #[test]
    fn deepest_point_beats_every_observation(q in 2usize..6, k in 0usize..3, seed: u64) {
        let spec = kernel(k);
        let s = sample_vmf(&VmfModel::new(mode(q, seed), 2.0).unwrap(), 25, seed).unwrap();
        let best = deepest(&spec, &s, &DeepestOptions::default()).unwrap();
        for p in s.points() {
            prop_assert!(depth(&spec, &p, &s).unwrap().value <= best.depth + 1e-12);
        }
    }

    #[test]
    fn swapping_training_sets_flips_labels(q in 2usize..6, k in 0usize..3, seed: u64) {
        let s1 = sample_vmf(&VmfModel::new(UnitVector::basis(q, 1).unwrap(), 3.0).unwrap(), 20, seed).unwrap();
        let s2 = sample_vmf(&VmfModel::new(UnitVector::basis(q, q).unwrap(), 3.0).unwrap(), 20, !seed).unwrap();
        let model = fit(kernel(k), s1, s2, seed).unwrap();
        let flipped = model.swapped();
        for w in sphere_depth::sampling::sample_uniform(q, 20, seed ^ 5).unwrap().points() {
            let (d1, d2) = model.depths(&w).unwrap();
            if d1 != d2 {
                prop_assert_eq!(model.classify(&w).unwrap(), flipped.classify(&w).unwrap().other());
            }
        }
    }

    #[test]
    fn identical_training_sets_tie_by_coin(seed: u64) {
        let s = sample_vmf(&VmfModel::on_circle(1.0, 5.0).unwrap(), 15, seed).unwrap();
        let model = fit(DeltaSpec::arc(), s.clone(), s, seed).unwrap();
        let test = sphere_depth::sampling::sample_uniform(2, 200, seed ^ 3).unwrap();
        let labels = model.classify_all(&test).unwrap();
        let ones = labels.iter().filter(|l| **l == Population::One).count();
        prop_assert!((50..=150).contains(&ones));
        prop_assert_eq!(labels, model.classify_all(&test).unwrap());
    }
}
