//! Gauss-Legendre quadrature with order doubling, and the weighted integrals
//! over rotationally symmetric laws on the sphere.
//!
//! For a law with density proportional to `h(x'theta0)` the cosine
//! `V = W'theta0` has density proportional to `(1 - v^2)^((q-3)/2) h(v)` on
//! `[-1, 1]`. All integrals here are taken in `u = arccos v`, where the weight
//! becomes `sin(u)^(q-2) h(cos u)` on `[0, pi]` and has no endpoint
//! singularity for `q = 2`. The vMF factor `exp(kappa v)` is scaled by
//! `exp(-kappa)` so that `kappa` up to about 700 does not overflow.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{DepthError, Result};

/// Tolerance and order cap for the doubling scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub max_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_order: 4096,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, max_order: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(DepthError::InvalidParameter(format!(
                "rel_tol must be positive, got {rel_tol}"
            )));
        }
        if max_order < START_ORDER {
            return Err(DepthError::InvalidParameter(format!(
                "max_order must be at least {START_ORDER}"
            )));
        }
        Ok(Self { rel_tol, max_order })
    }
}

/// First order tried by the doubling scheme.
pub const START_ORDER: usize = 64;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on `P_n` from Tricomi's initial
    /// guesses.
    pub fn compute(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let k = (i + 1) as f64;
            let theta = PI * (k - 0.25) / (nf + 0.5);
            let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// `int_a^b f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

type RuleCache = RwLock<HashMap<usize, Arc<GaussLegendre>>>;

/// Shared, lazily filled cache of rules by order.
pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.read().expect("rule cache poisoned").get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(GaussLegendre::compute(n));
    cache
        .write()
        .expect("rule cache poisoned")
        .entry(n)
        .or_insert(rule)
        .clone()
}

/// Runs `eval(rule)` at orders 64, 128, ... until two successive values
/// `(value, scale)` satisfy `|value - prev| <= rel_tol * scale`.
fn converge<F>(spec: &QuadratureSpec, mut eval: F) -> Result<f64>
where
    F: FnMut(&GaussLegendre) -> (f64, f64),
{
    let mut order = START_ORDER;
    let mut prev: Option<f64> = None;
    loop {
        let rule = gauss_legendre(order);
        let (value, scale) = eval(&rule);
        if !value.is_finite() {
            return Err(DepthError::QuadratureFailure { order });
        }
        if let Some(p) = prev {
            if (value - p).abs() <= spec.rel_tol * scale {
                return Ok(value);
            }
        }
        prev = Some(value);
        if order * 2 > spec.max_order {
            return Err(DepthError::QuadratureFailure { order });
        }
        order *= 2;
    }
}

/// `int_a^b f` with order doubling until the relative change is below
/// `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    converge(spec, |rule| {
        let v = rule.integrate(a, b, &f);
        let s = rule.integrate(a, b, |x| f(x).abs());
        (v, s)
    })
}

fn check_law(q: usize, kappa: f64) -> Result<()> {
    if q < 2 {
        return Err(DepthError::DimensionTooSmall(q));
    }
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(DepthError::InvalidParameter(format!(
            "concentration must be finite and nonnegative, got {kappa}"
        )));
    }
    Ok(())
}

/// `sin(u)^(q-2) exp(kappa (cos u - 1))`.
#[inline]
fn vmf_weight_in_angle(u: f64, q: usize, kappa: f64) -> f64 {
    let s = if q == 2 { 1.0 } else { u.sin().powi(q as i32 - 2) };
    s * (kappa * (u.cos() - 1.0)).exp()
}

/// `E[f(V)]` for the cosine `V` of a vMF(kappa) law on `S^{q-1}` with respect
/// to its mode, i.e.
/// `int f(v) (1-v^2)^((q-3)/2) e^(kappa v) dv / int (1-v^2)^((q-3)/2) e^(kappa v) dv`.
///
/// Convergence is declared when the ratio changes by at most
/// `rel_tol * E|f(V)|` between successive orders.
pub fn rotsym_expectation<F>(f: F, q: usize, kappa: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    check_law(q, kappa)?;
    converge(spec, |rule| {
        let mut num = 0.0;
        let mut abs = 0.0;
        let mut den = 0.0;
        let half = 0.5 * PI;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let u = half + half * x;
            let wt = w * vmf_weight_in_angle(u, q, kappa);
            let fv = f(u.cos());
            num += wt * fv;
            abs += wt * fv.abs();
            den += wt;
        }
        (num / den, abs / den)
    })
}

/// `int_{-1}^{1} (1-v^2)^((q-3)/2) e^(kappa (v - 1)) dv`, the scaled normalizer
/// of the cosine density.
pub fn vmf_cosine_normalizer(q: usize, kappa: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_law(q, kappa)?;
    converge(spec, |rule| {
        let v = rule.integrate(0.0, PI, |u| vmf_weight_in_angle(u, q, kappa));
        (v, v)
    })
}

/// `P(a <= V <= b)` for the cosine `V` of a vMF(kappa) law on `S^{q-1}`.
pub fn vmf_cosine_probability(q: usize, kappa: f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_law(q, kappa)?;
    let (a, b) = (a.clamp(-1.0, 1.0), b.clamp(-1.0, 1.0));
    if b <= a {
        return Ok(0.0);
    }
    let total = vmf_cosine_normalizer(q, kappa, spec)?;
    let part = integrate(|u| vmf_weight_in_angle(u, q, kappa), b.acos(), a.acos(), spec)?;
    Ok(part / total)
}
