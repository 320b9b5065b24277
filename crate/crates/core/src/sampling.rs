//! Reproducible samplers for von Mises-Fisher laws, their mixtures, point-mass
//! contaminations and the uniform law, plus the vMF density and mean
//! resultant length.
//!
//! vMF draws use the tangent-normal decomposition `x = t theta0 + sqrt(1-t^2) xi`:
//! the cosine `t` comes from Wood's beta-envelope rejection scheme and `xi` is
//! a uniform direction orthogonal to `theta0`. The orthogonal frame is the
//! Householder reflection sending `e_q` to `theta0`, with the sign chosen so
//! that the reflection vector never cancels (see [`HouseholderFrame`]).
//!
//! Every sampler is a pure function of `(model, n, seed)`, and the first `k`
//! points of a size-`n` sample are the size-`k` sample.

use std::f64::consts::PI;

use crate::classification::Population;
use crate::error::{DepthError, Result};
use crate::quadrature::{rotsym_expectation, vmf_cosine_normalizer, QuadratureSpec};
use crate::rng::{stream_seed, CounterRng};
use crate::sphere::{check_dims, dot, norm, DirectionalSample, UnitVector};

/// vMF(theta0, kappa) on `S^{q-1}`; `kappa = 0` is the uniform law.
#[derive(Debug, Clone, PartialEq)]
pub struct VmfModel {
    mode: UnitVector,
    kappa: f64,
}

impl VmfModel {
    pub fn new(mode: UnitVector, kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(DepthError::InvalidParameter(format!(
                "concentration must be finite and nonnegative, got {kappa}"
            )));
        }
        Ok(Self { mode, kappa })
    }

    /// vMF on the circle with modal angle `alpha`.
    pub fn on_circle(alpha: f64, kappa: f64) -> Result<Self> {
        Self::new(UnitVector::from_angle(alpha), kappa)
    }

    pub fn q(&self) -> usize {
        self.mode.dim()
    }

    pub fn mode(&self) -> &UnitVector {
        &self.mode
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// Finite mixture of vMF laws.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureModel {
    components: Vec<VmfModel>,
    weights: Vec<f64>,
}

impl MixtureModel {
    pub fn new(components: Vec<VmfModel>, weights: Vec<f64>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| DepthError::InvalidParameter("mixture needs a component".into()))?;
        if components.len() != weights.len() {
            return Err(DepthError::LengthMismatch {
                left: components.len(),
                right: weights.len(),
            });
        }
        for c in &components {
            check_dims(first.q(), c.q())?;
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(DepthError::InvalidParameter("mixture weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(DepthError::InvalidParameter(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { components, weights })
    }

    /// Equal-weight mixture.
    pub fn uniform_weights(components: Vec<VmfModel>) -> Result<Self> {
        let k = components.len().max(1);
        Self::new(components, vec![1.0 / k as f64; k])
    }

    pub fn q(&self) -> usize {
        self.components[0].q()
    }

    pub fn components(&self) -> &[VmfModel] {
        &self.components
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn pick(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (k, w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                return k;
            }
        }
        // u landed in the rounding gap below 1; take the last positive weight
        self.weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
    }
}

impl From<VmfModel> for MixtureModel {
    fn from(v: VmfModel) -> Self {
        Self {
            components: vec![v],
            weights: vec![1.0],
        }
    }
}

/// `(1 - eps) base + eps Delta_atom`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContaminatedModel {
    base: MixtureModel,
    eps: f64,
    atom: UnitVector,
}

impl ContaminatedModel {
    pub fn new(base: impl Into<MixtureModel>, eps: f64, atom: UnitVector) -> Result<Self> {
        let base = base.into();
        check_dims(base.q(), atom.dim())?;
        if !(0.0..=1.0).contains(&eps) {
            return Err(DepthError::InvalidParameter(format!(
                "contamination level must lie in [0, 1], got {eps}"
            )));
        }
        Ok(Self { base, eps, atom })
    }

    pub fn base(&self) -> &MixtureModel {
        &self.base
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn atom(&self) -> &UnitVector {
        &self.atom
    }

    pub fn q(&self) -> usize {
        self.base.q()
    }
}

/// Orthogonal map `x -> s (I - 2 v v'/v'v) x` with `s = +-1`, sending `e_q`
/// to `theta0`.
///
/// For `theta0_q <= 0` it is the reflection with `v = theta0 - e_q`; otherwise
/// `v = theta0 + e_q` (which sends `e_q` to `-theta0`) composed with `-I`. In
/// both cases `||v||^2 >= 2`.
#[derive(Debug, Clone)]
pub struct HouseholderFrame {
    v: Vec<f64>,
    vv: f64,
    sign: f64,
}

impl HouseholderFrame {
    pub fn new(theta0: &UnitVector) -> Self {
        let q = theta0.dim();
        let mut v = theta0.coords().to_vec();
        let sign = if v[q - 1] <= 0.0 {
            v[q - 1] -= 1.0;
            1.0
        } else {
            v[q - 1] += 1.0;
            -1.0
        };
        let vv = dot(&v, &v);
        Self { v, vv, sign }
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let c = 2.0 * dot(&self.v, x) / self.vv;
        for ((o, xi), vi) in out.iter_mut().zip(x).zip(&self.v) {
            *o = self.sign * (xi - c * vi);
        }
    }
}

/// Constants of Wood's rejection sampler for the vMF cosine.
#[derive(Debug, Clone, Copy)]
struct WoodEnvelope {
    kappa: f64,
    dim_minus_one: f64,
    b: f64,
    x0: f64,
    c: f64,
}

impl WoodEnvelope {
    fn new(q: usize, kappa: f64) -> Self {
        let m = (q - 1) as f64;
        // b = (-2k + sqrt(4k^2 + m^2)) / m, in cancellation-free form
        let b = m / (2.0 * kappa + libm::sqrt(4.0 * kappa * kappa + m * m));
        let x0 = (1.0 - b) / (1.0 + b);
        let c = kappa * x0 + m * libm::log(1.0 - x0 * x0);
        Self {
            kappa,
            dim_minus_one: m,
            b,
            x0,
            c,
        }
    }

    /// Returns the cosine and the number of proposals used.
    fn draw(&self, rng: &mut CounterRng) -> (f64, u32) {
        let half = 0.5 * self.dim_minus_one;
        let mut tries = 0;
        loop {
            tries += 1;
            let z = rng.beta(half, half);
            let w = (1.0 - (1.0 + self.b) * z) / (1.0 - (1.0 - self.b) * z);
            let u = rng.next_open01();
            if self.kappa * w + self.dim_minus_one * libm::log(1.0 - self.x0 * w) - self.c >= libm::log(u) {
                return (w.clamp(-1.0, 1.0), tries);
            }
        }
    }
}

/// Stateful vMF sampler over one stream.
struct VmfDraw {
    q: usize,
    envelope: WoodEnvelope,
    frame: HouseholderFrame,
    proposals: u64,
    accepted: u64,
}

impl VmfDraw {
    fn new(model: &VmfModel) -> Self {
        Self {
            q: model.q(),
            envelope: WoodEnvelope::new(model.q(), model.kappa),
            frame: HouseholderFrame::new(&model.mode),
            proposals: 0,
            accepted: 0,
        }
    }

    fn draw_into(&mut self, rng: &mut CounterRng, out: &mut [f64]) {
        let q = self.q;
        let (t, tries) = self.envelope.draw(rng);
        self.proposals += u64::from(tries);
        self.accepted += 1;
        let mut local = vec![0.0; q];
        let xi = uniform_direction(q - 1, rng);
        let r = libm::sqrt((1.0 - t * t).max(0.0));
        for (l, x) in local.iter_mut().zip(&xi) {
            *l = r * x;
        }
        local[q - 1] = t;
        self.frame.apply(&local, out);
        let n = norm(out);
        out.iter_mut().for_each(|x| *x /= n);
    }

    fn log_acceptance(&self) {
        if self.proposals > 0 {
            log::debug!(
                "vMF rejection sampler: q={} kappa={} acceptance ratio {:.4}",
                self.q,
                self.envelope.kappa,
                self.accepted as f64 / self.proposals as f64
            );
        }
    }
}

/// Uniform point on `S^{d-1}` as a normalized Gaussian vector; for `d = 1`
/// this is a fair sign.
fn uniform_direction(d: usize, rng: &mut CounterRng) -> Vec<f64> {
    loop {
        let xs: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
        let n = libm::sqrt(dot(&xs, &xs));
        if n > 1e-300 {
            return xs.into_iter().map(|x| x / n).collect();
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(DepthError::EmptySample);
    }
    Ok(())
}

/// `n` i.i.d. draws from vMF(theta0, kappa).
pub fn sample_vmf(model: &VmfModel, n: usize, seed: u64) -> Result<DirectionalSample> {
    check_n(n)?;
    let q = model.q();
    let mut rng = CounterRng::new(seed);
    let mut sampler = VmfDraw::new(model);
    let mut data = vec![0.0; n * q];
    for out in data.chunks_exact_mut(q) {
        sampler.draw_into(&mut rng, out);
    }
    sampler.log_acceptance();
    Ok(DirectionalSample::from_flat(q, data))
}

/// `n` i.i.d. uniform draws on `S^{q-1}`.
pub fn sample_uniform(q: usize, n: usize, seed: u64) -> Result<DirectionalSample> {
    if q < 2 {
        return Err(DepthError::DimensionTooSmall(q));
    }
    check_n(n)?;
    let mut rng = CounterRng::new(seed);
    let data = (0..n).flat_map(|_| uniform_direction(q, &mut rng)).collect();
    Ok(DirectionalSample::from_flat(q, data))
}

/// Draws from a mixture. Component labels come from sub-stream 0 of `seed`,
/// component `k` draws sequentially from sub-stream `k + 1`; a one-component
/// mixture therefore equals `sample_vmf(component, n, stream_seed(seed, 1))`.
pub fn sample_mixture(model: &MixtureModel, n: usize, seed: u64) -> Result<DirectionalSample> {
    Ok(sample_mixture_labeled(model, n, seed)?.0)
}

/// Like [`sample_mixture`], also returning the component index of each draw.
pub fn sample_mixture_labeled(
    model: &MixtureModel,
    n: usize,
    seed: u64,
) -> Result<(DirectionalSample, Vec<usize>)> {
    check_n(n)?;
    let q = model.q();
    let mut select = CounterRng::new(stream_seed(seed, 0));
    let mut streams: Vec<CounterRng> = (0..model.components.len())
        .map(|k| CounterRng::new(stream_seed(seed, k as u64 + 1)))
        .collect();
    let mut samplers: Vec<VmfDraw> = model.components.iter().map(VmfDraw::new).collect();
    let mut data = vec![0.0; n * q];
    let mut labels = Vec::with_capacity(n);
    for out in data.chunks_exact_mut(q) {
        let k = model.pick(select.next_f64());
        samplers[k].draw_into(&mut streams[k], out);
        labels.push(k);
    }
    samplers.iter().for_each(VmfDraw::log_acceptance);
    Ok((DirectionalSample::from_flat(q, data), labels))
}

/// Draws from `(1 - eps) base + eps Delta_atom`: each draw is the atom with
/// probability `eps` (decided on sub-stream 0), otherwise the next point of
/// `sample_mixture(base, ., stream_seed(seed, 1))`. With `eps = 0` the result
/// is exactly that base sample.
pub fn sample_contaminated(model: &ContaminatedModel, n: usize, seed: u64) -> Result<DirectionalSample> {
    check_n(n)?;
    let q = model.q();
    let mut select = CounterRng::new(stream_seed(seed, 0));
    let is_atom: Vec<bool> = (0..n).map(|_| select.next_f64() < model.eps).collect();
    let base_count = is_atom.iter().filter(|a| !**a).count();
    let base = if base_count > 0 {
        Some(sample_mixture(&model.base, base_count, stream_seed(seed, 1))?)
    } else {
        None
    };
    let mut data = Vec::with_capacity(n * q);
    let mut next_base = 0;
    for atom in is_atom {
        if atom {
            data.extend_from_slice(model.atom.coords());
        } else if let Some(b) = &base {
            data.extend_from_slice(b.row(next_base));
            next_base += 1;
        }
    }
    Ok(DirectionalSample::from_flat(q, data))
}

/// Labeled draws from `(1/2) H1 + (1/2) H2`: the population of each draw is a
/// fair coin on sub-stream 0; population `k` then takes the next point of
/// `sample_mixture(H_k, ., stream_seed(seed, k))`.
pub fn sample_two_populations(
    h1: &MixtureModel,
    h2: &MixtureModel,
    n: usize,
    seed: u64,
) -> Result<(DirectionalSample, Vec<Population>)> {
    check_n(n)?;
    check_dims(h1.q(), h2.q())?;
    let q = h1.q();
    let mut coin = CounterRng::new(stream_seed(seed, 0));
    let labels: Vec<Population> = (0..n)
        .map(|_| if coin.next_f64() < 0.5 { Population::One } else { Population::Two })
        .collect();
    let draw = |model: &MixtureModel, label: Population, stream: u64| -> Result<Option<DirectionalSample>> {
        let count = labels.iter().filter(|l| **l == label).count();
        if count == 0 {
            return Ok(None);
        }
        sample_mixture(model, count, stream_seed(seed, stream)).map(Some)
    };
    let first = draw(h1, Population::One, 1)?;
    let second = draw(h2, Population::Two, 2)?;
    let (mut i, mut j) = (0, 0);
    let mut data = Vec::with_capacity(n * q);
    for label in &labels {
        match (label, &first, &second) {
            (Population::One, Some(s), _) => {
                data.extend_from_slice(s.row(i));
                i += 1;
            }
            (Population::Two, _, Some(s)) => {
                data.extend_from_slice(s.row(j));
                j += 1;
            }
            _ => unreachable!("a drawn label always has its sample"),
        }
    }
    Ok((DirectionalSample::from_flat(q, data), labels))
}

/// Density of a vMF mixture with respect to surface measure.
pub fn mixture_density(model: &MixtureModel, x: &UnitVector, quad: &QuadratureSpec) -> Result<f64> {
    model
        .components
        .iter()
        .zip(&model.weights)
        .try_fold(0.0, |acc, (c, w)| Ok(acc + w * vmf_density(c, x, quad)?))
}

/// Surface area of `S^{d-1}`, `2 pi^(d/2) / Gamma(d/2)`; `|S^0| = 2`.
pub fn sphere_surface_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / libm::tgamma(h)
}

/// vMF density `c exp(kappa x'theta0)` with respect to surface measure.
///
/// The normalizer is `1 / (|S^{q-2}| int (1-v^2)^((q-3)/2) e^(kappa v) dv)`,
/// evaluated in scaled form.
pub fn vmf_density(model: &VmfModel, x: &UnitVector, quad: &QuadratureSpec) -> Result<f64> {
    check_dims(model.q(), x.dim())?;
    let q = model.q();
    let t = dot(model.mode.coords(), x.coords()).clamp(-1.0, 1.0);
    if model.kappa == 0.0 {
        return Ok(1.0 / sphere_surface_area(q));
    }
    let scaled_integral = vmf_cosine_normalizer(q, model.kappa, quad)?;
    let log_density = model.kappa * (t - 1.0) - (sphere_surface_area(q - 1) * scaled_integral).ln();
    Ok(log_density.exp())
}

/// Mean resultant length `A_q(kappa) = E[W'theta0]` of vMF(kappa) on `S^{q-1}`.
pub fn mean_resultant_length(q: usize, kappa: f64, quad: &QuadratureSpec) -> Result<f64> {
    if kappa == 0.0 {
        if q < 2 {
            return Err(DepthError::DimensionTooSmall(q));
        }
        return Ok(0.0);
    }
    rotsym_expectation(|v| v, q, kappa, quad)
}
