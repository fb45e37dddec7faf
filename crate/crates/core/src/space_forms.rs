//! Constant-curvature base manifolds in a single conformal chart.
//!
//! The chart is `g_ij(x) = λ(x)² δ_ij` with `λ(x) = (1 + c|x|²/4)^{-1}`,
//! which has constant sectional curvature `c`. For `c < 0` the chart is the
//! ball `|x|² < −4/c`; otherwise it is all of ℝⁿ (for `c > 0` it misses one
//! point of the sphere). Frame-expressed objects use the orthonormal frame
//! `e_i = λ^{-1} ∂_i`.

use rand::Rng;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::jet::Real;
use crate::linalg::Mat;
use crate::oracle::MetricField;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpaceForm {
    n: usize,
    c: f64,
}

impl SpaceForm {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(GeomError::InvalidParameter(format!("space form dimension {n} < 2")));
        }
        if !c.is_finite() {
            return Err(GeomError::InvalidParameter(format!("curvature {c} is not finite")));
        }
        Ok(SpaceForm { n, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `n(n−1)c`
    pub fn scalar_curvature(&self) -> f64 {
        (self.n * (self.n - 1)) as f64 * self.c
    }

    pub fn is_admissible(&self, x: &[f64]) -> bool {
        x.len() == self.n && x.iter().all(|v| v.is_finite()) && 1.0 + self.c * norm_sq(x) / 4.0 > 0.0
    }

    fn check<T: Real>(&self, x: &[T]) -> Result<()> {
        if x.len() != self.n {
            return Err(GeomError::InvalidParameter(format!(
                "base point has {} coordinates, expected {}",
                x.len(),
                self.n
            )));
        }
        let xs: Vec<f64> = x.iter().map(|v| v.value()).collect();
        if !self.is_admissible(&xs) {
            return Err(GeomError::Domain(format!(
                "|x|² = {} outside the chart ball |x|² < {} for c = {}",
                norm_sq(&xs),
                -4.0 / self.c,
                self.c
            )));
        }
        Ok(())
    }

    /// Conformal factor `λ(x)`.
    pub fn lambda<T: Real>(&self, x: &[T]) -> Result<T> {
        self.check(x)?;
        let mut r2 = T::zero();
        for v in x {
            r2 += *v * *v;
        }
        Ok((r2 * (self.c / 4.0) + 1.0).recip())
    }

    /// `∂_i ln λ = −(c/2) λ x_i`.
    pub fn log_lambda_gradient<T: Real>(&self, x: &[T]) -> Result<Vec<T>> {
        let lam = self.lambda(x)?;
        Ok(x.iter().map(|xi| lam * *xi * (-self.c / 2.0)).collect())
    }

    pub fn conformal_metric<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        let lam = self.lambda(x)?;
        let l2 = lam * lam;
        Ok(Mat::from_fn(self.n, self.n, |i, j| if i == j { l2 } else { T::zero() }))
    }

    /// Orthonormal frame `e_i = λ^{-1} ∂_i`, as coordinate vectors.
    pub fn orthonormal_frame(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let inv = 1.0 / self.lambda(x)?;
        Ok((0..self.n)
            .map(|i| {
                let mut e = vec![0.0; self.n];
                e[i] = inv;
                e
            })
            .collect())
    }

    /// Coordinate components of a frame-expressed vector at `x`.
    pub fn frame_to_coords(&self, x: &[f64], u: &[f64]) -> Result<Vec<f64>> {
        let inv = 1.0 / self.lambda(x)?;
        Ok(u.iter().map(|v| v * inv).collect())
    }

    /// `R^M(u, v)` for frame-expressed `u, v`, with the sign under which
    /// `⟨R(u,v)u, v⟩` is the sectional curvature: `R^M(u, v) = −c u∧v`.
    pub fn curvature_endomorphism(&self, u: &[f64], v: &[f64]) -> SkewEndomorphism {
        wedge(u, v).scaled(-self.c)
    }

    /// Uniform sample from the ball `|x| ≤ ρ`, with `ρ = 1` unless the chart is
    /// smaller, in which case `ρ` is 90% of the chart radius.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let radius = if self.c < 0.0 {
            (0.9 * (-4.0 / self.c).sqrt()).min(1.0)
        } else {
            1.0
        };
        sample_ball(rng, self.n, radius)
    }
}

impl MetricField for SpaceForm {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        self.conformal_metric(x)
    }
}

pub(crate) fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Uniform point in the closed ball of the given radius (rejection sampling).
pub fn sample_ball<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if norm_sq(&p) <= 1.0 {
            return p.into_iter().map(|v| v * radius).collect();
        }
    }
}

/// A skew-symmetric endomorphism, stored as its matrix in an orthonormal frame.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewEndomorphism {
    m: Mat<f64>,
}

impl SkewEndomorphism {
    pub fn zeros(n: usize) -> Self {
        SkewEndomorphism { m: Mat::zeros(n, n) }
    }

    /// Accepts a matrix only if it is exactly antisymmetric.
    pub fn from_matrix(m: Mat<f64>) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(GeomError::InvalidParameter("non-square endomorphism".into()));
        }
        for i in 0..m.rows() {
            for j in 0..=i {
                if m[(i, j)] != -m[(j, i)] {
                    return Err(GeomError::InvalidParameter(format!(
                        "matrix not antisymmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(SkewEndomorphism { m })
    }

    /// Projection `(M − Mᵀ)/2`.
    pub fn skew_part(m: &Mat<f64>) -> Self {
        let n = m.rows();
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (m[(i, j)] - m[(j, i)]);
                out[(i, j)] = v;
                out[(j, i)] = -v;
            }
        }
        SkewEndomorphism { m: out }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn apply(&self, w: &[f64]) -> Vec<f64> {
        self.m.matvec(w)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let n = self.dim();
        SkewEndomorphism {
            m: Mat::from_fn(n, n, |i, j| self.m[(i, j)] * s),
        }
    }

    pub fn add(&self, other: &SkewEndomorphism) -> Self {
        let n = self.dim();
        SkewEndomorphism {
            m: Mat::from_fn(n, n, |i, j| self.m[(i, j)] + other.m[(i, j)]),
        }
    }

    /// `[F, G] = F∘G − G∘F`
    pub fn commutator(&self, other: &SkewEndomorphism) -> Self {
        let a = self.m.matmul(&other.m);
        let b = other.m.matmul(&self.m);
        let n = self.dim();
        SkewEndomorphism {
            m: Mat::from_fn(n, n, |i, j| a[(i, j)] - b[(i, j)]),
        }
    }

    /// `tr(F∘G)`
    pub fn trace_product(&self, other: &SkewEndomorphism) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.m[(i, j)] * other.m[(j, i)];
            }
        }
        s
    }

    /// `|F|² = −k tr(F²)`
    pub fn norm_sq(&self, k: f64) -> f64 {
        -k * self.trace_product(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.m.max_abs()
    }
}

/// `(u∧v)(w) = ⟨v,w⟩u − ⟨u,w⟩v`, i.e. the matrix `u vᵀ − v uᵀ`.
pub fn wedge(u: &[f64], v: &[f64]) -> SkewEndomorphism {
    assert_eq!(u.len(), v.len(), "wedge of vectors of different lengths");
    let n = u.len();
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let x = u[i] * v[j] - v[i] * u[j];
            m[(i, j)] = x;
            m[(j, i)] = -x;
        }
    }
    SkewEndomorphism { m }
}
