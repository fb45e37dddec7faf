//! Coordinate curvature engine.
//!
//! Given any metric field `x -> g_ij(x)` that can be evaluated on jets, this
//! module computes the exact value, gradient and Hessian of every metric
//! component and from them Christoffel symbols, the Riemann and Ricci
//! tensors, and scalar curvature. Nothing here knows about bundles or
//! closed-form curvature formulas; it is the independent reference that the
//! rest of the crate is checked against.
//!
//! Index conventions (all arrays dense, row-major):
//! - `christoffel(k, i, j)` is `Γ^k_ij`.
//! - `riemann(l, k, i, j)` is `R^l_kij`, where `R(∂_i, ∂_j) ∂_k = R^l_kij ∂_l`.
//! - Textbook sign: `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`.
//! - `Convention::Paper` sign: the negative, `R(X,Y) = ∇_[X,Y] − (∇_X∇_Y − ∇_Y∇_X)`.
//!
//! Ricci and scalar curvature are reported with the usual normalization
//! (positive on round spheres) under either sign convention.

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::jet::{Jet2, Real, MAX_VARS};
use crate::linalg::{dot, Mat};

/// A Riemannian metric in local coordinates, evaluable on any [`Real`].
pub trait MetricField: Sync {
    fn dim(&self) -> usize;

    /// Metric components at `x`. Implementations must return a symmetric
    /// positive-definite matrix or a domain error.
    fn eval<T: Real>(&self, x: &[T]) -> Result<Mat<T>>;
}

impl<M: MetricField> MetricField for &M {
    fn dim(&self) -> usize {
        (*self).dim()
    }
    fn eval<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        (*self).eval(x)
    }
}

/// Value, first and second coordinate derivatives of a metric at a point.
#[derive(Clone, Debug)]
pub struct SecondJet {
    dim: usize,
    pub g: Mat<f64>,
    dg: Vec<f64>,
    d2g: Vec<f64>,
}

impl SecondJet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∂_k g_ij`
    pub fn dg(&self, k: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.dg[(k * n + i) * n + j]
    }

    /// `∂_k ∂_l g_ij`
    pub fn d2g(&self, k: usize, l: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.d2g[((k * n + l) * n + i) * n + j]
    }

    fn empty(dim: usize, g: Mat<f64>) -> Self {
        SecondJet {
            dim,
            g,
            dg: vec![0.0; dim.pow(3)],
            d2g: vec![0.0; dim.pow(4)],
        }
    }

    fn set_dg(&mut self, k: usize, i: usize, j: usize, v: f64) {
        let n = self.dim;
        self.dg[(k * n + i) * n + j] = v;
    }

    fn set_d2g(&mut self, k: usize, l: usize, i: usize, j: usize, v: f64) {
        let n = self.dim;
        self.d2g[((k * n + l) * n + i) * n + j] = v;
    }

    /// Largest relative discrepancy against another jet, component by component.
    pub fn max_relative_difference(&self, other: &SecondJet) -> f64 {
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
        let mut worst: f64 = 0.0;
        for (a, b) in self.g.as_slice().iter().zip(other.g.as_slice()) {
            worst = worst.max(rel(*a, *b));
        }
        for (a, b) in self.dg.iter().zip(&other.dg) {
            worst = worst.max(rel(*a, *b));
        }
        for (a, b) in self.d2g.iter().zip(&other.d2g) {
            worst = worst.max(rel(*a, *b));
        }
        worst
    }
}

/// Exact second jet of `field` at `x` by forward-mode differentiation.
pub fn second_jet<M: MetricField>(field: &M, x: &[f64]) -> Result<SecondJet> {
    let n = field.dim();
    if x.len() != n {
        return Err(GeomError::InvalidParameter(format!(
            "point has {} coordinates, field dimension is {n}",
            x.len()
        )));
    }
    if n > MAX_VARS {
        return Err(GeomError::TooManyVariables(n));
    }
    let seeded = Jet2::seed(x);
    let gj = field.eval(&seeded)?;
    let mut jet = SecondJet::empty(n, gj.map_values());
    for i in 0..n {
        for j in 0..n {
            let e = gj[(i, j)];
            for k in 0..n {
                jet.set_dg(k, i, j, e.grad(k));
                for l in 0..n {
                    jet.set_d2g(k, l, i, j, e.hess(k, l));
                }
            }
        }
    }
    Ok(jet)
}

/// Second jet by central finite differences with step `h`; a cross-check only.
pub fn finite_difference_jet<M: MetricField>(field: &M, x: &[f64], h: f64) -> Result<SecondJet> {
    let n = field.dim();
    let eval = |dx: &[(usize, f64)]| -> Result<Mat<f64>> {
        let mut y = x.to_vec();
        for &(k, d) in dx {
            y[k] += d;
        }
        field.eval(&y)
    };
    let g0 = eval(&[])?;
    let mut jet = SecondJet::empty(n, g0.clone());
    for k in 0..n {
        let gp = eval(&[(k, h)])?;
        let gm = eval(&[(k, -h)])?;
        for i in 0..n {
            for j in 0..n {
                jet.set_dg(k, i, j, (gp[(i, j)] - gm[(i, j)]) / (2.0 * h));
                jet.set_d2g(k, k, i, j, (gp[(i, j)] - 2.0 * g0[(i, j)] + gm[(i, j)]) / (h * h));
            }
        }
        for l in 0..k {
            let gpp = eval(&[(k, h), (l, h)])?;
            let gpm = eval(&[(k, h), (l, -h)])?;
            let gmp = eval(&[(k, -h), (l, h)])?;
            let gmm = eval(&[(k, -h), (l, -h)])?;
            for i in 0..n {
                for j in 0..n {
                    let v = (gpp[(i, j)] - gpm[(i, j)] - gmp[(i, j)] + gmm[(i, j)]) / (4.0 * h * h);
                    jet.set_d2g(k, l, i, j, v);
                    jet.set_d2g(l, k, i, j, v);
                }
            }
        }
    }
    Ok(jet)
}

/// Christoffel symbols of the second kind.
#[derive(Clone, Debug)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^k_ij`
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.data[(k * n + i) * n + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, x| a.max(x.abs()))
    }
}

fn christoffel_with_inverse(jet: &SecondJet, ginv: &Mat<f64>) -> Christoffel {
    let n = jet.dim;
    // first kind: Γ_lij = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
    let mut lower = vec![0.0; n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                lower[(l * n + i) * n + j] = 0.5 * (jet.dg(i, j, l) + jet.dg(j, i, l) - jet.dg(l, i, j));
            }
        }
    }
    let mut data = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += ginv[(k, l)] * lower[(l * n + i) * n + j];
                }
                data[(k * n + i) * n + j] = s;
            }
        }
    }
    Christoffel { dim: n, data }
}

/// Christoffel symbols from a second jet.
pub fn christoffel(jet: &SecondJet) -> Result<Christoffel> {
    let ginv = jet.g.inverse()?;
    Ok(christoffel_with_inverse(jet, &ginv))
}

/// Largest violation of `∂_k g_ij = Γ^m_ki g_mj + Γ^m_kj g_im`, relative to
/// the largest metric derivative (or absolute when the metric is constant).
pub fn compatibility_residual(jet: &SecondJet, gamma: &Christoffel) -> f64 {
    let n = jet.dim;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut rhs = 0.0;
                for m in 0..n {
                    rhs += gamma.get(m, k, i) * jet.g[(m, j)] + gamma.get(m, k, j) * jet.g[(i, m)];
                }
                worst = worst.max((jet.dg(k, i, j) - rhs).abs());
                scale = scale.max(jet.dg(k, i, j).abs());
            }
        }
    }
    worst / scale.max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Textbook,
    Paper,
}

#[derive(Clone, Debug)]
pub struct CurvatureReport {
    dim: usize,
    pub convention: Convention,
    pub metric: Mat<f64>,
    pub inverse_metric: Mat<f64>,
    pub christoffel: Christoffel,
    riemann: Vec<f64>,
    pub ricci: Mat<f64>,
    pub scalar: f64,
}

impl CurvatureReport {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `R^l_kij` in this report's convention.
    pub fn riemann(&self, l: usize, k: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.riemann[((l * n + k) * n + i) * n + j]
    }

    /// Fully lowered `R_abij = g_al R^l_bij`.
    pub fn riemann_lowered(&self, a: usize, b: usize, i: usize, j: usize) -> f64 {
        (0..self.dim)
            .map(|l| self.metric[(a, l)] * self.riemann(l, b, i, j))
            .sum()
    }

    pub fn riemann_max_abs(&self) -> f64 {
        self.riemann.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    /// `R(∂_i, ∂_j)` applied to the coordinate vector `w`.
    pub fn apply(&self, i: usize, j: usize, w: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|l| (0..self.dim).map(|k| self.riemann(l, k, i, j) * w[k]).sum())
            .collect()
    }

    /// `R(u, v) w` for coordinate vectors.
    pub fn apply_bivector(&self, u: &[f64], v: &[f64], w: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let c = u[i] * v[j];
                if c == 0.0 {
                    continue;
                }
                for l in 0..n {
                    for k in 0..n {
                        out[l] += c * self.riemann(l, k, i, j) * w[k];
                    }
                }
            }
        }
        out
    }

    /// Largest first-Bianchi violation relative to the largest component.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let s = self.riemann(l, k, i, j) + self.riemann(l, i, j, k) + self.riemann(l, j, k, i);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst / self.riemann_max_abs().max(1.0)
    }

    /// Sectional curvature of the plane spanned by coordinate vectors `u, v`.
    pub fn sectional_curvature(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        sectional_curvature(self, &self.metric, u, v)
    }
}

/// Full curvature at a point from its second jet.
pub fn curvature_from_jet(jet: &SecondJet, convention: Convention) -> Result<CurvatureReport> {
    let n = jet.dim;
    let ginv = jet.g.inverse()?;
    let gamma = christoffel_with_inverse(jet, &ginv);

    // ∂_m Γ^k_ij = −g^ka ∂_m g_ab Γ^b_ij + g^kl ∂_m Γ_lij
    let mut dgamma = vec![0.0; n.pow(4)];
    let di = |m: usize, k: usize, i: usize, j: usize| ((m * n + k) * n + i) * n + j;
    for m in 0..n {
        // ∂_m Γ_lij
        let mut dlower = vec![0.0; n * n * n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    dlower[(l * n + i) * n + j] =
                        0.5 * (jet.d2g(m, i, j, l) + jet.d2g(m, j, i, l) - jet.d2g(m, l, i, j));
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += ginv[(k, l)] * dlower[(l * n + i) * n + j];
                    }
                    for a in 0..n {
                        let gka = ginv[(k, a)];
                        if gka == 0.0 {
                            continue;
                        }
                        for b in 0..n {
                            s -= gka * jet.dg(m, a, b) * gamma.get(b, i, j);
                        }
                    }
                    dgamma[di(m, k, i, j)] = s;
                }
            }
        }
    }

    // textbook R^l_kij = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik
    let mut riemann = vec![0.0; n.pow(4)];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = dgamma[di(i, l, j, k)] - dgamma[di(j, l, i, k)];
                    for m in 0..n {
                        s += gamma.get(l, i, m) * gamma.get(m, j, k) - gamma.get(l, j, m) * gamma.get(m, i, k);
                    }
                    riemann[((l * n + k) * n + i) * n + j] = s;
                }
            }
        }
    }

    // Ric_kj = R^i_kij (textbook)
    let ricci = Mat::from_fn(n, n, |k, j| {
        (0..n).map(|i| riemann[((i * n + k) * n + i) * n + j]).sum()
    });
    let mut scalar = 0.0;
    for k in 0..n {
        for j in 0..n {
            scalar += ginv[(k, j)] * ricci[(k, j)];
        }
    }

    if convention == Convention::Paper {
        for r in riemann.iter_mut() {
            *r = -*r;
        }
    }

    Ok(CurvatureReport {
        dim: n,
        convention,
        metric: jet.g.clone(),
        inverse_metric: ginv,
        christoffel: gamma,
        riemann,
        ricci,
        scalar,
    })
}

/// Full curvature of `field` at `x`.
pub fn curvature_report<M: MetricField>(field: &M, x: &[f64], convention: Convention) -> Result<CurvatureReport> {
    let jet = second_jet(field, x)?;
    curvature_from_jet(&jet, convention)
}

/// Scalar curvature only.
pub fn scalar_curvature<M: MetricField>(field: &M, x: &[f64]) -> Result<f64> {
    Ok(curvature_report(field, x, Convention::Textbook)?.scalar)
}

/// Sectional curvature of span{u, v} with respect to `g`.
///
/// With `Convention::Paper` this is `⟨R(u,v)u, v⟩ / (|u|²|v|² − ⟨u,v⟩²)`; with the
/// textbook sign `⟨R(u,v)v, u⟩` over the same denominator. Both are the
/// same number.
pub fn sectional_curvature(report: &CurvatureReport, g: &Mat<f64>, u: &[f64], v: &[f64]) -> Result<f64> {
    let gu = g.matvec(u);
    let gv = g.matvec(v);
    let uu = dot(u, &gu);
    let vv = dot(v, &gv);
    let uv = dot(u, &gv);
    let area = uu * vv - uv * uv;
    if !(area > 1e-14 * uu * vv) || !(uu > 0.0) || !(vv > 0.0) {
        return Err(GeomError::DegeneratePlane);
    }
    let num = match report.convention {
        Convention::Paper => dot(&report.apply_bivector(u, v, u), &gv),
        Convention::Textbook => dot(&report.apply_bivector(u, v, v), &gu),
    };
    Ok(num / area)
}
