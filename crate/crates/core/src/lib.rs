//! Distance-based depth functions for directional data on the unit
//! hypersphere `S^{q-1}`.
//!
//! The depth of a location `theta` with respect to a distribution `H` is
//! `D(theta, H) = d_sup - E_H[delta(theta'W)]` for a rotation-invariant
//! distance `delta`. The crate provides the arc-length, cosine and chord
//! kernels, deepest-point estimators, analytic robustness quantities for
//! von Mises-Fisher laws, a max-depth classifier, circle baselines, and a
//! reproducible Monte Carlo harness.
//!
//! ```
//! use sphere_depth::{deepest, depth, sample_vmf, DeepestOptions, DeltaSpec, UnitVector, VmfModel};
//!
//! let mode = UnitVector::basis(3, 3).unwrap();
//! let sample = sample_vmf(&VmfModel::new(mode.clone(), 5.0).unwrap(), 200, 1).unwrap();
//! let d = depth(&DeltaSpec::arc(), &mode, &sample).unwrap();
//! assert!(d.value > std::f64::consts::FRAC_PI_2);
//!
//! let best = deepest(&DeltaSpec::chord(), &sample, &DeepestOptions::default()).unwrap();
//! assert!(best.point.angle_to(&mode).unwrap() < 0.2);
//! ```

pub mod baseline;
pub mod classification;
pub mod deepest;
pub mod depth;
pub mod error;
pub mod experiments;
pub mod io;
pub mod quadrature;
pub mod robustness;
pub mod rng;
pub mod sampling;
pub mod sphere;

pub use baseline::{asd_circle, atd_circle};
pub use classification::{fit, misclassification_rate, ClassifierDepth, DepthClassifier, Population};
pub use deepest::{deepest, deepest_circle_grid, DeepestOptions, DeepestResult};
pub use depth::{
    depth, depth_cos_closed, depth_profile_circle, resultant_length, spherical_mean, vmf_population_depth,
    DepthValue, ModeSign,
};
pub use error::{DepthError, Result};
pub use quadrature::{rotsym_expectation, QuadratureSpec};
pub use robustness::{
    bdp_lower_bound_empirical, bdp_lower_bound_vmf, constancy_diagnostic, constancy_diagnostic_at, depth_variance,
    max_depth_curve,
};
pub use sampling::{
    mean_resultant_length, mixture_density, sample_contaminated, sample_mixture, sample_two_populations,
    sample_uniform, sample_vmf, vmf_density, ContaminatedModel, MixtureModel, VmfModel,
};
pub use sphere::{
    distance, inner, random_rotation, squared_error, unit_from_components, DeltaSpec, DirectionalSample,
    KernelKind, Rotation, UnitVector,
};
