//! Points on the unit hypersphere, samples of them, rotation-invariant
//! distance kernels and orthogonal transformations.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{DepthError, Result};
use crate::rng::CounterRng;

/// Admission tolerance on `| ||x|| - 1 |` for [`UnitVector::new`].
pub const UNIT_NORM_TOLERANCE: f64 = 1e-8;

const MIN_NORM: f64 = 1e-300;

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A point on the unit sphere `S^{q-1}`, `q >= 2`.
#[derive(Clone, PartialEq)]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    /// Admits `coords` if its norm is within [`UNIT_NORM_TOLERANCE`] of one,
    /// then renormalizes.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let n = checked_norm(&coords)?;
        if (n - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(DepthError::NotUnit(n));
        }
        Ok(Self::scaled(coords, n))
    }

    /// Projects any nonzero vector onto the sphere.
    pub fn from_components(xs: &[f64]) -> Result<Self> {
        let n = checked_norm(xs)?;
        Ok(Self::scaled(xs.to_vec(), n))
    }

    /// `(cos alpha, sin alpha)` on the circle.
    pub fn from_angle(alpha: f64) -> Self {
        Self {
            coords: vec![alpha.cos(), alpha.sin()],
        }
    }

    /// The canonical basis vector `e_j` (1-based `j`) of `R^q`.
    pub fn basis(q: usize, j: usize) -> Result<Self> {
        if q < 2 {
            return Err(DepthError::DimensionTooSmall(q));
        }
        if j == 0 || j > q {
            return Err(DepthError::InvalidParameter(format!(
                "basis index {j} outside 1..={q}"
            )));
        }
        let mut coords = vec![0.0; q];
        coords[j - 1] = 1.0;
        Ok(Self { coords })
    }

    fn scaled(mut coords: Vec<f64>, n: f64) -> Self {
        coords.iter_mut().for_each(|x| *x /= n);
        Self { coords }
    }

    pub(crate) fn from_raw_unchecked(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Polar angle in `[0, 2pi)`; only meaningful on the circle.
    pub fn angle(&self) -> Result<f64> {
        if self.dim() != 2 {
            return Err(DepthError::NotCircle(self.dim()));
        }
        Ok(wrap_angle(self.coords[1].atan2(self.coords[0])))
    }

    /// Clamped inner product with `other`.
    pub fn inner(&self, other: &UnitVector) -> Result<f64> {
        inner(self, other)
    }

    /// Geodesic (arc-length) angle to `other`.
    pub fn angle_to(&self, other: &UnitVector) -> Result<f64> {
        Ok(inner(self, other)?.acos())
    }
}

impl fmt::Debug for UnitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("UnitVector").field(&self.coords).finish()
    }
}

impl Neg for &UnitVector {
    type Output = UnitVector;

    fn neg(self) -> UnitVector {
        UnitVector {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }
}

impl Neg for UnitVector {
    type Output = UnitVector;

    fn neg(self) -> UnitVector {
        -&self
    }
}

fn checked_norm(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(DepthError::DimensionTooSmall(xs.len()));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(DepthError::NonFinite);
    }
    let n = norm(xs);
    if n < MIN_NORM {
        return Err(DepthError::ZeroNorm);
    }
    Ok(n)
}

/// Maps an angle to `[0, 2pi)`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// Normalizes `xs` to unit length; see [`UnitVector::from_components`].
pub fn unit_from_components(xs: &[f64]) -> Result<UnitVector> {
    UnitVector::from_components(xs)
}

/// `u'v` clamped to `[-1, 1]`.
pub fn inner(u: &UnitVector, v: &UnitVector) -> Result<f64> {
    check_dims(u.dim(), v.dim())?;
    Ok(dot(&u.coords, &v.coords).clamp(-1.0, 1.0))
}

/// `||a - b||^2 = 2 (1 - a'b)`, the squared error of an estimate `a` of `b`.
pub fn squared_error(a: &UnitVector, b: &UnitVector) -> Result<f64> {
    Ok(2.0 * (1.0 - inner(a, b)?))
}

/// `delta(u'v)` for the kernel of `spec`.
pub fn distance(spec: &DeltaSpec, u: &UnitVector, v: &UnitVector) -> Result<f64> {
    Ok(spec.eval(inner(u, v)?))
}

#[inline]
pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(DepthError::DimMismatch { expected, found });
    }
    Ok(())
}

/// An ordered sample `W_1, ..., W_n` of unit vectors sharing one dimension,
/// stored row-major.
#[derive(Clone, PartialEq)]
pub struct DirectionalSample {
    dim: usize,
    data: Vec<f64>,
}

impl DirectionalSample {
    pub fn new(points: Vec<UnitVector>) -> Result<Self> {
        let first = points.first().ok_or(DepthError::EmptySample)?;
        let dim = first.dim();
        let mut data = Vec::with_capacity(dim * points.len());
        for p in &points {
            check_dims(dim, p.dim())?;
            data.extend_from_slice(p.coords());
        }
        Ok(Self { dim, data })
    }

    /// Builds a sample from unit rows stored contiguously.
    pub(crate) fn from_flat(dim: usize, data: Vec<f64>) -> Self {
        debug_assert!(dim >= 2 && !data.is_empty() && data.len() % dim == 0);
        Self { dim, data }
    }

    /// Sample of points on the circle at the given angles.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        Self::new(angles.iter().map(|&a| UnitVector::from_angle(a)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Coordinates of the `i`-th point.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn point(&self, i: usize) -> UnitVector {
        UnitVector::from_raw_unchecked(self.row(i).to_vec())
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = UnitVector> + '_ {
        self.rows().map(|r| UnitVector::from_raw_unchecked(r.to_vec()))
    }

    /// First `n` points.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(DepthError::EmptySample);
        }
        let n = n.min(self.len());
        Ok(Self {
            dim: self.dim,
            data: self.data[..n * self.dim].to_vec(),
        })
    }

    /// Coordinatewise mean `(1/n) sum W_i`.
    pub fn resultant(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for row in self.rows() {
            mean.iter_mut().zip(row).for_each(|(m, x)| *m += x);
        }
        let n = self.len() as f64;
        mean.iter_mut().for_each(|m| *m /= n);
        mean
    }

    /// Polar angles of a circular sample.
    pub fn angles(&self) -> Result<Vec<f64>> {
        if self.dim != 2 {
            return Err(DepthError::NotCircle(self.dim));
        }
        Ok(self.rows().map(|r| wrap_angle(r[1].atan2(r[0]))).collect())
    }

    /// Concatenation of two samples of equal dimension.
    pub fn concat(&self, other: &DirectionalSample) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            dim: self.dim,
            data,
        })
    }
}

impl fmt::Debug for DirectionalSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectionalSample")
            .field("dim", &self.dim)
            .field("n", &self.len())
            .finish()
    }
}

/// Tag of a distance kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelKind {
    Arc,
    Cos,
    Chord,
    Custom,
}

impl KernelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Arc => "arc",
            KernelKind::Cos => "cos",
            KernelKind::Chord => "chord",
            KernelKind::Custom => "custom",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

type KernelFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kernel {
    Arc,
    Cos,
    Chord,
    Custom { name: String, eval: KernelFn, d_sup: f64 },
}

/// A rotation-invariant distance `d(theta, psi) = delta(theta'psi)`.
#[derive(Clone)]
pub struct DeltaSpec {
    kernel: Kernel,
}

impl DeltaSpec {
    /// `delta(t) = arccos t`, `d_sup = pi`.
    pub fn arc() -> Self {
        Self { kernel: Kernel::Arc }
    }

    /// `delta(t) = 1 - t`, `d_sup = 2`.
    pub fn cos() -> Self {
        Self { kernel: Kernel::Cos }
    }

    /// `delta(t) = sqrt(2 (1 - t))`, `d_sup = 2`.
    pub fn chord() -> Self {
        Self {
            kernel: Kernel::Chord,
        }
    }

    pub fn builtin(kind: KernelKind) -> Result<Self> {
        match kind {
            KernelKind::Arc => Ok(Self::arc()),
            KernelKind::Cos => Ok(Self::cos()),
            KernelKind::Chord => Ok(Self::chord()),
            KernelKind::Custom => Err(DepthError::InvalidKernel(
                "custom kernels need an evaluation function".into(),
            )),
        }
    }

    /// A user-supplied kernel. It must vanish at `t = 1` (within 1e-12), be
    /// finite and nonnegative, and be non-increasing on a 1001-point grid of
    /// `[-1, 1]`.
    pub fn custom<F>(name: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let at_one = eval(1.0);
        if !at_one.is_finite() || at_one.abs() > 1e-12 {
            return Err(DepthError::InvalidKernel(format!(
                "delta(1) = {at_one}, expected 0"
            )));
        }
        let grid: Vec<f64> = (0..=1000).map(|k| -1.0 + 2.0 * k as f64 / 1000.0).collect();
        let values: Vec<f64> = grid.iter().map(|&t| eval(t)).collect();
        if let Some((t, v)) = grid
            .iter()
            .zip(&values)
            .find(|(_, v)| !v.is_finite() || **v < -1e-12)
        {
            return Err(DepthError::InvalidKernel(format!(
                "delta({t}) = {v} is negative or not finite"
            )));
        }
        if let Some(k) = values.windows(2).position(|w| w[1] > w[0]) {
            return Err(DepthError::InvalidKernel(format!(
                "delta increases between t = {} and t = {}",
                grid[k],
                grid[k + 1]
            )));
        }
        let d_sup = values[0];
        Ok(Self {
            kernel: Kernel::Custom {
                name: name.into(),
                eval: Arc::new(eval),
                d_sup,
            },
        })
    }

    pub fn kind(&self) -> KernelKind {
        match self.kernel {
            Kernel::Arc => KernelKind::Arc,
            Kernel::Cos => KernelKind::Cos,
            Kernel::Chord => KernelKind::Chord,
            Kernel::Custom { .. } => KernelKind::Custom,
        }
    }

    pub fn name(&self) -> &str {
        match &self.kernel {
            Kernel::Custom { name, .. } => name,
            _ => self.kind().as_str(),
        }
    }

    /// `d_sup = delta(-1)`.
    pub fn d_sup(&self) -> f64 {
        match &self.kernel {
            Kernel::Arc => PI,
            Kernel::Cos | Kernel::Chord => 2.0,
            Kernel::Custom { d_sup, .. } => *d_sup,
        }
    }

    /// `delta(t)` for `t` clamped to `[-1, 1]`.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(-1.0, 1.0);
        match &self.kernel {
            Kernel::Arc => t.acos(),
            Kernel::Cos => 1.0 - t,
            Kernel::Chord => (2.0 * (1.0 - t)).max(0.0).sqrt(),
            Kernel::Custom { eval, .. } => eval(t),
        }
    }

    /// `delta'(t)`, with `t` clamped to `[-1 + 1e-12, 1 - 1e-12]` so that the
    /// arc and chord derivatives stay finite.
    pub fn derivative(&self, t: f64) -> f64 {
        let t = t.clamp(-1.0 + 1e-12, 1.0 - 1e-12);
        match &self.kernel {
            Kernel::Arc => -1.0 / (1.0 - t * t).sqrt(),
            Kernel::Cos => -1.0,
            Kernel::Chord => -1.0 / (2.0 * (1.0 - t)).sqrt(),
            Kernel::Custom { eval, .. } => {
                let h = 1e-6;
                let lo = (t - h).max(-1.0);
                let hi = (t + h).min(1.0);
                (eval(hi) - eval(lo)) / (hi - lo)
            }
        }
    }

    /// Whether `delta(-t) + delta(t) = delta(-1)` holds on a 1001-point grid
    /// (within 1e-12).
    pub fn is_antisymmetric(&self) -> bool {
        let d = self.d_sup();
        (0..=1000)
            .map(|k| -1.0 + 2.0 * k as f64 / 1000.0)
            .all(|t| (self.eval(-t) + self.eval(t) - d).abs() <= 1e-12)
    }
}

impl fmt::Debug for DeltaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DeltaSpec({})", self.name())
    }
}

impl FromStr for KernelKind {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "arc" | "add" => Ok(KernelKind::Arc),
            "cos" | "cosine" | "cdd" => Ok(KernelKind::Cos),
            "chord" | "chdd" => Ok(KernelKind::Chord),
            other => Err(DepthError::InvalidKernel(format!("unknown kernel '{other}'"))),
        }
    }
}

impl FromStr for DeltaSpec {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self> {
        DeltaSpec::builtin(s.parse()?)
    }
}

/// A `q x q` orthogonal matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Rotation {
    dim: usize,
    matrix: Vec<f64>,
}

impl Rotation {
    /// Admits `matrix` (row-major) if `O'O = I` within 1e-10 entrywise.
    pub fn from_matrix(dim: usize, matrix: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(DepthError::DimensionTooSmall(dim));
        }
        if matrix.len() != dim * dim {
            return Err(DepthError::LengthMismatch {
                left: matrix.len(),
                right: dim * dim,
            });
        }
        let rot = Self { dim, matrix };
        let dev = rot.orthogonality_defect();
        if dev > 1e-10 {
            return Err(DepthError::NotOrthogonal(dev));
        }
        Ok(rot)
    }

    pub fn identity(dim: usize) -> Self {
        let mut matrix = vec![0.0; dim * dim];
        (0..dim).for_each(|i| matrix[i * dim + i] = 1.0);
        Self { dim, matrix }
    }

    /// Rotation of the plane by `alpha`.
    pub fn planar(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self {
            dim: 2,
            matrix: vec![c, -s, s, c],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.dim + j]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// `max_{ij} |(O'O - I)_{ij}|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let q = self.dim;
        let mut worst = 0.0f64;
        for i in 0..q {
            for j in 0..q {
                let s: f64 = (0..q).map(|k| self.entry(k, i) * self.entry(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    pub(crate) fn apply_slice(&self, x: &[f64], out: &mut [f64]) {
        let q = self.dim;
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(&self.matrix[i * q..(i + 1) * q], x);
        }
    }

    /// `O x`, renormalized to absorb rounding.
    pub fn apply(&self, x: &UnitVector) -> Result<UnitVector> {
        check_dims(self.dim, x.dim())?;
        let mut out = vec![0.0; self.dim];
        self.apply_slice(x.coords(), &mut out);
        UnitVector::from_components(&out)
    }

    /// The image sample `O W_1, ..., O W_n`.
    pub fn apply_sample(&self, sample: &DirectionalSample) -> Result<DirectionalSample> {
        check_dims(self.dim, sample.dim())?;
        let q = self.dim;
        let mut data = vec![0.0; sample.len() * q];
        for (row, out) in sample.rows().zip(data.chunks_exact_mut(q)) {
            self.apply_slice(row, out);
            let n = norm(out);
            out.iter_mut().for_each(|x| *x /= n);
        }
        Ok(DirectionalSample::from_flat(q, data))
    }

    pub fn transpose(&self) -> Self {
        let q = self.dim;
        let mut matrix = vec![0.0; q * q];
        for i in 0..q {
            for j in 0..q {
                matrix[j * q + i] = self.matrix[i * q + j];
            }
        }
        Self { dim: q, matrix }
    }
}

impl fmt::Debug for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rotation")
            .field("dim", &self.dim)
            .field("matrix", &self.matrix)
            .finish()
    }
}

/// Haar-distributed orthogonal matrix: QR of a standard Gaussian `q x q`
/// matrix with the diagonal of `R` made positive.
///
/// The factorization is Gram-Schmidt on the columns with one
/// re-orthogonalization pass; Gram-Schmidt yields `R_jj = ||v_j|| > 0`
/// directly, which is the required sign convention.
pub fn random_rotation(q: usize, seed: u64) -> Result<Rotation> {
    if q < 2 {
        return Err(DepthError::DimensionTooSmall(q));
    }
    let mut rng = CounterRng::new(seed);
    // columns[j] is the j-th column of the Gaussian draw, filled row by row
    let mut columns = vec![vec![0.0; q]; q];
    for i in 0..q {
        for col in columns.iter_mut() {
            col[i] = rng.standard_normal();
        }
    }
    for j in 0..q {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = columns.split_at_mut(j);
                let proj = dot(&done[k], &rest[0]);
                rest[0]
                    .iter_mut()
                    .zip(&done[k])
                    .for_each(|(x, e)| *x -= proj * e);
            }
        }
        let n = norm(&columns[j]);
        columns[j].iter_mut().for_each(|x| *x /= n);
    }
    let mut matrix = vec![0.0; q * q];
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            matrix[i * q + j] = *v;
        }
    }
    Ok(Rotation { dim: q, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_unit(q: usize, rng: &mut CounterRng) -> UnitVector {
        let xs: Vec<f64> = (0..q).map(|_| rng.standard_normal()).collect();
        UnitVector::from_components(&xs).unwrap()
    }

    #[test]
    fn unit_from_components_examples() {
        let u = unit_from_components(&[2.0, 0.0, 0.0]).unwrap();
        assert_eq!(u.coords(), &[1.0, 0.0, 0.0]);
        let v = unit_from_components(&[1.0, 1.0]).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((v.coords()[0] - h).abs() < 1e-15 && (v.coords()[1] - h).abs() < 1e-15);
        assert_eq!(unit_from_components(&[0.0, 0.0]), Err(DepthError::ZeroNorm));
        assert_eq!(
            unit_from_components(&[1.0]),
            Err(DepthError::DimensionTooSmall(1))
        );
    }

    #[test]
    fn admission_tolerance() {
        assert!(UnitVector::new(vec![1.0 + 5e-9, 0.0]).is_ok());
        assert!(matches!(
            UnitVector::new(vec![1.0 + 1e-6, 0.0]),
            Err(DepthError::NotUnit(_))
        ));
        let u = UnitVector::new(vec![0.6, 0.8 + 1e-9]).unwrap();
        assert!((norm(u.coords()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inner_examples() {
        let u = UnitVector::from_angle(0.3);
        assert_eq!(inner(&u, &u).unwrap(), 1.0);
        assert_eq!(inner(&u, &-&u).unwrap(), -1.0);
        let e1 = UnitVector::basis(2, 1).unwrap();
        let e2 = UnitVector::basis(2, 2).unwrap();
        assert_eq!(inner(&e1, &e2).unwrap(), 0.0);
        let e3 = UnitVector::basis(3, 1).unwrap();
        assert_eq!(
            inner(&e1, &e3),
            Err(DepthError::DimMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn distance_examples() {
        let e1 = UnitVector::basis(2, 1).unwrap();
        let e2 = UnitVector::basis(2, 2).unwrap();
        assert!((distance(&DeltaSpec::arc(), &e1, &e2).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(distance(&DeltaSpec::chord(), &e1, &-&e1).unwrap(), 2.0);
        assert_eq!(distance(&DeltaSpec::cos(), &e2, &e2).unwrap(), 0.0);
    }

    #[test]
    fn squared_error_examples() {
        let e1 = UnitVector::basis(2, 1).unwrap();
        let e2 = UnitVector::basis(2, 2).unwrap();
        assert_eq!(squared_error(&e1, &e1).unwrap(), 0.0);
        assert_eq!(squared_error(&e1, &-&e1).unwrap(), 4.0);
        assert!((squared_error(&e1, &e2).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn random_rotation_examples() {
        for seed in 0..20 {
            assert!(random_rotation(2, seed).unwrap().orthogonality_defect() <= 1e-10);
        }
        assert_eq!(random_rotation(5, 7).unwrap(), random_rotation(5, 7).unwrap());
        let o = random_rotation(3, 1).unwrap();
        let e1 = UnitVector::basis(3, 1).unwrap();
        let mut out = vec![0.0; 3];
        o.apply_slice(e1.coords(), &mut out);
        assert!((norm(&out) - 1.0).abs() <= 1e-12);
        assert!(Rotation::from_matrix(3, o.matrix().to_vec()).is_ok());
        assert!(Rotation::from_matrix(2, vec![1.0, 0.1, 0.0, 1.0]).is_err());
    }

    #[test]
    fn rotation_diagonal_of_r_positive() {
        // O = QR with R_jj > 0 means Q' G has positive diagonal; recompute G
        let q = 4;
        let o = random_rotation(q, 99).unwrap();
        let mut rng = CounterRng::new(99);
        let mut g = vec![vec![0.0; q]; q];
        for row in g.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.standard_normal();
            }
        }
        for j in 0..q {
            let r_jj: f64 = (0..q).map(|i| o.entry(i, j) * g[i][j]).sum();
            assert!(r_jj > 0.0);
        }
    }

    #[test]
    fn builtin_kernels_and_sup() {
        for (spec, sup) in [
            (DeltaSpec::arc(), PI),
            (DeltaSpec::cos(), 2.0),
            (DeltaSpec::chord(), 2.0),
        ] {
            assert_eq!(spec.d_sup(), sup);
            assert!((spec.eval(-1.0) - sup).abs() < 1e-15);
            assert_eq!(spec.eval(1.0), 0.0);
        }
    }

    #[test]
    fn kernel_antisymmetry() {
        assert!(DeltaSpec::arc().is_antisymmetric());
        assert!(DeltaSpec::cos().is_antisymmetric());
        let chord = DeltaSpec::chord();
        assert!(!chord.is_antisymmetric());
        assert!((chord.eval(0.0) * 2.0 - 2.0).abs() > 0.8);
    }

    #[test]
    fn custom_kernel_validation() {
        let sq = DeltaSpec::custom("half-cos-squared", |t| (1.0 - t) * (1.0 - t)).unwrap();
        assert_eq!(sq.d_sup(), 4.0);
        assert_eq!(sq.kind(), KernelKind::Custom);
        assert!(DeltaSpec::custom("offset", |t| 2.0 - t).is_err());
        assert!(DeltaSpec::custom("increasing", |t| (t - 1.0).abs() * t.max(0.0)).is_err());
        assert!(DeltaSpec::custom("negative", |t| t - 1.0).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for spec in [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()] {
            for &t in &[-0.9, -0.3, 0.0, 0.4, 0.95] {
                let h = 1e-6;
                let fd = (spec.eval(t + h) - spec.eval(t - h)) / (2.0 * h);
                assert!((spec.derivative(t) - fd).abs() < 1e-6, "{spec:?} at {t}");
            }
        }
    }

    #[test]
    fn kernel_parsing() {
        assert_eq!("ARC".parse::<KernelKind>().unwrap(), KernelKind::Arc);
        assert_eq!("chord".parse::<DeltaSpec>().unwrap().kind(), KernelKind::Chord);
        assert!("tukey".parse::<KernelKind>().is_err());
    }

    proptest! {
        #[test]
        fn distance_depends_only_on_inner_product(seed in any::<u64>(), q in 2usize..8) {
            let mut rng = CounterRng::new(seed);
            let u = random_unit(q, &mut rng);
            let v = random_unit(q, &mut rng);
            let o = random_rotation(q, seed ^ 0xA5A5).unwrap();
            let (ou, ov) = (o.apply(&u).unwrap(), o.apply(&v).unwrap());
            for spec in [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()] {
                let before = distance(&spec, &u, &v).unwrap();
                let after = distance(&spec, &ou, &ov).unwrap();
                prop_assert!((before - after).abs() <= 1e-10);
            }
        }

        #[test]
        fn metric_axioms(seed in any::<u64>(), q in 2usize..6) {
            let mut rng = CounterRng::new(seed);
            let u = random_unit(q, &mut rng);
            let v = random_unit(q, &mut rng);
            let w = random_unit(q, &mut rng);
            for spec in [DeltaSpec::arc(), DeltaSpec::cos(), DeltaSpec::chord()] {
                let uv = distance(&spec, &u, &v).unwrap();
                prop_assert_eq!(uv, distance(&spec, &v, &u).unwrap());
                prop_assert!(uv >= 0.0 && uv <= spec.d_sup());
                if spec.kind() != KernelKind::Cos {
                    // 1 - t is not a metric on the sphere (it is half the squared chord)
                    let uw = distance(&spec, &u, &w).unwrap();
                    let wv = distance(&spec, &w, &v).unwrap();
                    prop_assert!(uv <= uw + wv + 1e-12);
                }
            }
        }
    }
}
