//! Euclidean vector bundles with metric connections over a coordinate chart,
//! and the two-parameter family `h_{p,q}` of metrics on their total spaces.
//!
//! A bundle is described in a local fiber frame `{e_j}` by its Gram matrix
//! `G(x)` and connection coefficients `∇_{∂_i} e_j = Σ_l Γ^l_{ij} e_l`. A
//! total-space point is `(x, μ)` with fiber point `a = Σ μ_j e_j`.

mod atiyah;
mod tangent;

pub use atiyah::{join_fiber, principal_curvature_atiyah, split_fiber, AtiyahBundle, AtiyahParams};
pub use tangent::{TangentBundle, TrivialBundle};

use rand::Rng;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::jet::{Jet2, Real, MAX_VARS};
use crate::linalg::{dot, Mat};
use crate::oracle::{Convention, MetricField};
use crate::space_forms::sample_ball;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CgParams {
    pub p: f64,
    pub q: f64,
}

impl CgParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !p.is_finite() || !q.is_finite() {
            return Err(GeomError::InvalidParameter(format!(
                "non-finite parameters p={p}, q={q}"
            )));
        }
        if q < 0.0 {
            return Err(GeomError::InvalidParameter(format!("q = {q} must be non-negative")));
        }
        Ok(CgParams { p, q })
    }

    pub const SASAKI: CgParams = CgParams { p: 0.0, q: 0.0 };
    pub const CHEEGER_GROMOLL: CgParams = CgParams { p: 1.0, q: 1.0 };
    pub const STEREOGRAPHIC: CgParams = CgParams { p: 2.0, q: 0.0 };
}

/// Connection coefficients `Γ^l_{ij}`, `i < n` a base direction and `j, l < r` fiber indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionCoefficients<T> {
    n: usize,
    r: usize,
    data: Vec<T>,
}

impl<T: Real> ConnectionCoefficients<T> {
    pub fn zeros(n: usize, r: usize) -> Self {
        ConnectionCoefficients {
            n,
            r,
            data: vec![T::zero(); n * r * r],
        }
    }

    pub fn from_fn(n: usize, r: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut out = Self::zeros(n, r);
        for i in 0..n {
            for j in 0..r {
                for l in 0..r {
                    out.data[(i * r + j) * r + l] = f(i, j, l);
                }
            }
        }
        out
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// `Γ^l_{ij}`
    #[inline]
    pub fn get(&self, i: usize, j: usize, l: usize) -> T {
        self.data[(i * self.r + j) * self.r + l]
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, l: usize, v: T) {
        self.data[(i * self.r + j) * self.r + l] += v;
    }

    pub fn values(&self) -> ConnectionCoefficients<f64> {
        ConnectionCoefficients {
            n: self.n,
            r: self.r,
            data: self.data.iter().map(|v| v.value()).collect(),
        }
    }

    /// The `r × n` matrix `C_{li} = Σ_j μ_j Γ^l_{ij}`.
    pub fn contract_fiber(&self, mu: &[T]) -> Mat<T> {
        let mut c = Mat::zeros(self.r, self.n);
        for i in 0..self.n {
            for (j, &m) in mu.iter().enumerate() {
                for l in 0..self.r {
                    c[(l, i)] += m * self.get(i, j, l);
                }
            }
        }
        c
    }
}

impl ConnectionCoefficients<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    /// Largest `|Γ^l_{ij} + Γ^j_{il}|`, zero for a metric connection in an orthonormal frame.
    pub fn skewness_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.r {
                for l in 0..self.r {
                    worst = worst.max((self.get(i, j, l) + self.get(i, l, j)).abs());
                }
            }
        }
        worst
    }
}

/// `K(b, Z)_l = Z_l + Σ_{i,j} b_i μ_j Γ^l_{ij}`.
pub fn connection_map(conn: &ConnectionCoefficients<f64>, mu: &[f64], b: &[f64], z: &[f64]) -> Vec<f64> {
    let c = conn.contract_fiber(mu);
    z.iter().zip(c.matvec(b)).map(|(zl, cb)| zl + cb).collect()
}

/// Horizontal lift `(u, −Σ u_i μ_j Γ^k_{ij})`.
pub fn horizontal_lift(conn: &ConnectionCoefficients<f64>, mu: &[f64], u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let c = conn.contract_fiber(mu);
    (u.to_vec(), c.matvec(u).into_iter().map(|v| -v).collect())
}

/// A rank-`r` Euclidean bundle with a connection, given in a local frame over
/// a base chart of dimension `n`.
pub trait EuclideanBundle: Sync {
    fn base_dim(&self) -> usize;
    fn rank(&self) -> usize;
    fn base_metric<T: Real>(&self, x: &[T]) -> Result<Mat<T>>;
    fn gram<T: Real>(&self, x: &[T]) -> Result<Mat<T>>;
    fn connection<T: Real>(&self, x: &[T]) -> Result<ConnectionCoefficients<T>>;

    fn total_dim(&self) -> usize {
        self.base_dim() + self.rank()
    }

    /// Scalar curvature of the base at `x`; defaults to the coordinate oracle.
    fn base_scalar(&self, x: &[f64]) -> Result<f64> {
        crate::oracle::scalar_curvature(&BaseField(self), x)
    }
}

struct BaseField<'a, B: ?Sized>(&'a B);

impl<B: EuclideanBundle + ?Sized> MetricField for BaseField<'_, B> {
    fn dim(&self) -> usize {
        self.0.base_dim()
    }
    fn eval<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        self.0.base_metric(x)
    }
}

impl<B: EuclideanBundle> EuclideanBundle for &B {
    fn base_dim(&self) -> usize {
        (**self).base_dim()
    }
    fn rank(&self) -> usize {
        (**self).rank()
    }
    fn base_metric<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        (**self).base_metric(x)
    }
    fn gram<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        (**self).gram(x)
    }
    fn connection<T: Real>(&self, x: &[T]) -> Result<ConnectionCoefficients<T>> {
        (**self).connection(x)
    }
    fn base_scalar(&self, x: &[f64]) -> Result<f64> {
        (**self).base_scalar(x)
    }
}

/// A point `(x, μ)` of a total space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TotalSpacePoint {
    pub x: Vec<f64>,
    pub mu: Vec<f64>,
}

impl TotalSpacePoint {
    pub fn new(x: Vec<f64>, mu: Vec<f64>) -> Self {
        TotalSpacePoint { x, mu }
    }

    /// Splits a total-space coordinate vector after the first `n` entries.
    pub fn from_coords(coords: &[f64], n: usize) -> Self {
        TotalSpacePoint {
            x: coords[..n].to_vec(),
            mu: coords[n..].to_vec(),
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.mu);
        v
    }

    /// `t = μᵀ G(x) μ`
    pub fn t<B: EuclideanBundle>(&self, bundle: &B) -> Result<f64> {
        let g = bundle.gram(&self.x)?;
        Ok(dot(&self.mu, &g.matvec(&self.mu)))
    }

    pub fn alpha<B: EuclideanBundle>(&self, bundle: &B) -> Result<f64> {
        Ok(1.0 + self.t(bundle)?)
    }

    fn check<B: EuclideanBundle>(&self, bundle: &B) -> Result<()> {
        if self.x.len() != bundle.base_dim() || self.mu.len() != bundle.rank() {
            return Err(GeomError::InvalidParameter(format!(
                "point has {}+{} coordinates, bundle needs {}+{}",
                self.x.len(),
                self.mu.len(),
                bundle.base_dim(),
                bundle.rank()
            )));
        }
        Ok(())
    }
}

/// Random total-space point: base point from `base_sampler`, fiber point
/// uniform in the ball of radius `fiber_radius`.
pub fn sample_total_point<R: Rng + ?Sized>(
    rng: &mut R,
    base_point: impl FnOnce(&mut R) -> Vec<f64>,
    rank: usize,
    fiber_radius: f64,
) -> TotalSpacePoint {
    let x = base_point(rng);
    let mu = sample_ball(rng, rank, fiber_radius);
    TotalSpacePoint { x, mu }
}

/// Coordinate Gram matrix of `h_{p,q}`:
/// `[[g + CᵀWC, CᵀW], [WC, W]]` with `W = (1+t)^{-p}(G + q Gμ μᵀG)`.
pub fn cg_metric<T: Real, B: EuclideanBundle>(bundle: &B, params: CgParams, x: &[T], mu: &[T]) -> Result<Mat<T>> {
    let (n, r) = (bundle.base_dim(), bundle.rank());
    let g = bundle.base_metric(x)?;
    let gram = bundle.gram(x)?;
    let conn = bundle.connection(x)?;
    let w = fiber_weight_matrix(&gram, params, mu);
    let c = conn.contract_fiber(mu);
    let wc = w.matmul(&c);
    let ctwc = c.transpose().matmul(&wc);
    Ok(Mat::from_fn(n + r, n + r, |a, b| match (a < n, b < n) {
        (true, true) => g[(a, b)] + ctwc[(a, b)],
        (true, false) => wc[(b - n, a)],
        (false, true) => wc[(a - n, b)],
        (false, false) => w[(a - n, b - n)],
    }))
}

fn fiber_weight_matrix<T: Real>(gram: &Mat<T>, params: CgParams, mu: &[T]) -> Mat<T> {
    let gmu = gram.matvec(mu);
    let t = dot(mu, &gmu);
    let s = (t + 1.0).powf(-params.p);
    let r = mu.len();
    Mat::from_fn(r, r, |a, b| (gram[(a, b)] + gmu[a] * gmu[b] * params.q) * s)
}

/// `h_{p,q}` on the total space as a metric field in the coordinates `(x, μ)`.
#[derive(Clone, Debug)]
pub struct CgMetric<B> {
    pub bundle: B,
    pub params: CgParams,
}

impl<B: EuclideanBundle> CgMetric<B> {
    pub fn new(bundle: B, params: CgParams) -> Self {
        CgMetric { bundle, params }
    }

    pub fn at(&self, pt: &TotalSpacePoint) -> Result<Mat<f64>> {
        pt.check(&self.bundle)?;
        cg_metric(&self.bundle, self.params, &pt.x, &pt.mu)
    }
}

impl<B: EuclideanBundle> MetricField for CgMetric<B> {
    fn dim(&self) -> usize {
        self.bundle.total_dim()
    }
    fn eval<T: Real>(&self, coords: &[T]) -> Result<Mat<T>> {
        let n = self.bundle.base_dim();
        if coords.len() != self.dim() {
            return Err(GeomError::InvalidParameter(format!(
                "expected {} total-space coordinates, got {}",
                self.dim(),
                coords.len()
            )));
        }
        cg_metric(&self.bundle, self.params, &coords[..n], &coords[n..])
    }
}

/// Restriction of `h_{p,q}` to a single fiber, in the fiber coordinates `μ`.
#[derive(Clone, Debug)]
pub struct FiberMetric {
    gram: Mat<f64>,
    params: CgParams,
}

impl FiberMetric {
    pub fn new(gram: Mat<f64>, params: CgParams) -> Self {
        FiberMetric { gram, params }
    }

    pub fn at<B: EuclideanBundle>(bundle: &B, x: &[f64], params: CgParams) -> Result<Self> {
        Ok(FiberMetric::new(bundle.gram(x)?, params))
    }
}

impl MetricField for FiberMetric {
    fn dim(&self) -> usize {
        self.gram.rows()
    }
    fn eval<T: Real>(&self, mu: &[T]) -> Result<Mat<T>> {
        let r = self.dim();
        let gram = Mat::from_fn(r, r, |a, b| T::cst(self.gram[(a, b)]));
        Ok(fiber_weight_matrix(&gram, self.params, mu))
    }
}

/// Largest `|∂_i G_{jl} − Σ_m (Γ^m_{ij} G_{ml} + Γ^m_{il} G_{jm})|` at `x`.
pub fn compatibility_residual<B: EuclideanBundle>(bundle: &B, x: &[f64]) -> Result<f64> {
    let n = bundle.base_dim();
    if n > MAX_VARS {
        return Err(GeomError::TooManyVariables(n));
    }
    let xs = Jet2::seed(x);
    let gram = bundle.gram(&xs)?;
    let conn = bundle.connection(x)?;
    let r = bundle.rank();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..r {
            for l in 0..r {
                let mut rhs = 0.0;
                for m in 0..r {
                    rhs += conn.get(i, j, m) * gram[(m, l)].value() + conn.get(i, l, m) * gram[(j, m)].value();
                }
                worst = worst.max((gram[(j, l)].grad(i) - rhs).abs());
            }
        }
    }
    Ok(worst)
}

/// Curvature of the bundle connection at a base point, in coordinate base
/// directions: `R(∂_i, ∂_j) e_J = Σ_L R^L_{J}(i, j) e_L`.
#[derive(Clone, Debug)]
pub struct BundleCurvature {
    n: usize,
    r: usize,
    pub convention: Convention,
    data: Vec<f64>,
}

impl BundleCurvature {
    #[inline]
    pub fn get(&self, i: usize, j: usize, l: usize, jj: usize) -> f64 {
        self.data[((i * self.n + j) * self.r + l) * self.r + jj]
    }

    /// Matrix of `R(∂_i, ∂_j)` acting on fiber components.
    pub fn endomorphism(&self, i: usize, j: usize) -> Mat<f64> {
        Mat::from_fn(self.r, self.r, |l, jj| self.get(i, j, l, jj))
    }

    /// `R(u, v) a` for coordinate base vectors `u, v`.
    pub fn apply(&self, u: &[f64], v: &[f64], a: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.r];
        for i in 0..self.n {
            for j in 0..self.n {
                let w = u[i] * v[j];
                if w == 0.0 {
                    continue;
                }
                for (l, o) in out.iter_mut().enumerate() {
                    for (jj, aj) in a.iter().enumerate() {
                        *o += w * self.get(i, j, l, jj) * aj;
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, x| a.max(x.abs()))
    }
}

/// Curvature of the bundle connection computed from the coefficients and
/// their exact first derivatives.
pub fn bundle_curvature<B: EuclideanBundle>(bundle: &B, x: &[f64], convention: Convention) -> Result<BundleCurvature> {
    let (n, r) = (bundle.base_dim(), bundle.rank());
    if n > MAX_VARS {
        return Err(GeomError::TooManyVariables(n));
    }
    let conn = bundle.connection(&Jet2::seed(x))?;
    let sign = match convention {
        Convention::Textbook => 1.0,
        Convention::Paper => -1.0,
    };
    let mut data = vec![0.0; n * n * r * r];
    for i in 0..n {
        for j in 0..n {
            for l in 0..r {
                for jj in 0..r {
                    let mut v = conn.get(j, jj, l).grad(i) - conn.get(i, jj, l).grad(j);
                    for m in 0..r {
                        v += conn.get(i, m, l).value() * conn.get(j, jj, m).value()
                            - conn.get(j, m, l).value() * conn.get(i, jj, m).value();
                    }
                    data[((i * n + j) * r + l) * r + jj] = sign * v;
                }
            }
        }
    }
    Ok(BundleCurvature { n, r, convention, data })
}

/// Gram–Schmidt orthonormalization of the coordinate basis against the base metric.
pub fn base_orthonormal_frame<B: EuclideanBundle>(bundle: &B, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let g = bundle.base_metric(x)?;
    let n = bundle.base_dim();
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for e in &frame {
            let proj = dot(e, &g.matvec(&v));
            for (vk, ek) in v.iter_mut().zip(e) {
                *vk -= proj * ek;
            }
        }
        let norm = dot(&v, &g.matvec(&v)).sqrt();
        if !(norm > 1e-14) {
            return Err(GeomError::Degenerate {
                condition: f64::INFINITY,
            });
        }
        frame.push(v.into_iter().map(|c| c / norm).collect());
    }
    Ok(frame)
}

/// O'Neill tensor `B(u^h, v^h) = ½ (R(u, v) a)^v` with `Convention::Paper` signs,
/// returned as fiber components.
pub fn oneill_b<B: EuclideanBundle>(bundle: &B, pt: &TotalSpacePoint, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    pt.check(bundle)?;
    let curv = bundle_curvature(bundle, &pt.x, Convention::Paper)?;
    Ok(curv.apply(u, v, &pt.mu).into_iter().map(|c| 0.5 * c).collect())
}

/// `ξ(a, b) = Σ_{i≠j} ⟨R(X_i, X_j) a, R(X_i, X_j) b⟩_E` over an orthonormal base frame.
pub fn xi_form<B: EuclideanBundle>(bundle: &B, x: &[f64], a: &[f64], b: &[f64]) -> Result<f64> {
    let curv = bundle_curvature(bundle, x, Convention::Paper)?;
    let frame = base_orthonormal_frame(bundle, x)?;
    let gram = bundle.gram(x)?;
    let mut s = 0.0;
    for (i, xi) in frame.iter().enumerate() {
        for (j, xj) in frame.iter().enumerate() {
            if i == j {
                continue;
            }
            let ra = curv.apply(xi, xj, a);
            let rb = curv.apply(xi, xj, b);
            s += dot(&ra, &gram.matvec(&rb));
        }
    }
    Ok(s)
}

/// `|B|² = Σ_{i≠j} h_{p,q}(B(X_i^h, X_j^h), B(X_i^h, X_j^h))` from the connection.
pub fn b_norm_squared_from_connection<B: EuclideanBundle>(
    bundle: &B,
    params: CgParams,
    pt: &TotalSpacePoint,
) -> Result<f64> {
    pt.check(bundle)?;
    let curv = bundle_curvature(bundle, &pt.x, Convention::Paper)?;
    let frame = base_orthonormal_frame(bundle, &pt.x)?;
    let gram = bundle.gram(&pt.x)?;
    let w = fiber_weight_matrix(&gram, params, &pt.mu);
    let mut s = 0.0;
    for (i, xi) in frame.iter().enumerate() {
        for (j, xj) in frame.iter().enumerate() {
            if i == j {
                continue;
            }
            let b: Vec<f64> = curv.apply(xi, xj, &pt.mu).into_iter().map(|c| 0.5 * c).collect();
            s += dot(&b, &w.matvec(&b));
        }
    }
    Ok(s)
}
