//! Closed-form curvature quantities of `h_{p,q}`: fiber curvatures, the
//! scalar-curvature decomposition, the Atiyah-algebroid scalar curvature and
//! the constants bounding its positivity region.

use serde::Serialize;

use crate::bundle::{xi_form, CgParams, EuclideanBundle, TotalSpacePoint};
use crate::error::{GeomError, Result};
use crate::linalg::dot;
use crate::space_forms::SkewEndomorphism;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiberWeights {
    pub omega: f64,
    pub omega_q: f64,
    pub f: f64,
    pub g: f64,
}

/// `ω = 1/(1+t)`, `ω_q = 1/(1+qt)`, `F = pωω_q((p+2q−2)ω − q)`,
/// `G = (p²ω² − p(p−2)ω + q)ω_q`.
pub fn fiber_weights(params: CgParams, t: f64) -> Result<FiberWeights> {
    if !(t >= 0.0) {
        return Err(GeomError::InvalidParameter(format!(
            "squared norm t = {t} must be non-negative"
        )));
    }
    let CgParams { p, q } = params;
    let omega = 1.0 / (1.0 + t);
    let omega_q = 1.0 / (1.0 + q * t);
    let f = p * omega * omega_q * ((p + 2.0 * q - 2.0) * omega - q);
    let g = (p * p * omega * omega - p * (p - 2.0) * omega + q) * omega_q;
    Ok(FiberWeights { omega, omega_q, f, g })
}

const ORTHONORMAL_TOL: f64 = 1e-10;

/// Sectional curvature of the fiber plane spanned by the vertical lifts of an
/// orthonormal pair `α, β`, at the fiber point `a`.
pub fn fiber_sectional(params: CgParams, a: &[f64], alpha: &[f64], beta: &[f64]) -> Result<f64> {
    let aa = dot(alpha, alpha);
    let bb = dot(beta, beta);
    let ab = dot(alpha, beta);
    if (aa - 1.0).abs() > ORTHONORMAL_TOL || (bb - 1.0).abs() > ORTHONORMAL_TOL || ab.abs() > ORTHONORMAL_TOL {
        return Err(GeomError::InvalidParameter("fiber pair is not orthonormal".into()));
    }
    let w = fiber_weights(params, dot(a, a))?;
    let s = dot(alpha, a).powi(2) + dot(beta, a).powi(2);
    Ok(w.omega.powf(-params.p) * (w.f * s + w.g) / (1.0 + params.q * s))
}

/// Fiber Ricci curvature `ric^v(α^v, β^v)` at the fiber point `a`; the rank is `a.len()`.
pub fn fiber_ricci(params: CgParams, a: &[f64], alpha: &[f64], beta: &[f64]) -> Result<f64> {
    let t = dot(a, a);
    let r = a.len() as f64;
    let w = fiber_weights(params, t)?;
    let first = t * w.omega_q * w.f + (r - 2.0 + w.omega_q) * w.g;
    let second = (r - 1.0 - w.omega_q) * w.f + params.q * w.omega_q * w.g;
    Ok(first * dot(alpha, beta) + second * dot(alpha, a) * dot(beta, a))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalarPolynomialCoeffs {
    pub e: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub d1: f64,
    pub e1: f64,
}

pub fn scalar_coefficients(params: CgParams, r: usize) -> ScalarPolynomialCoeffs {
    let CgParams { p, q } = params;
    let r = r as f64;
    let (p2, p3, q2, q3) = (p * p, p * p * p, q * q, q * q * q);
    let e = q2 * (r - 2.0);
    let b = q * ((2.0 - r) * p2 + 2.0 * (r - 3.0) * p + 2.0 * (r - 2.0) * q + r);
    let c = (2.0 - r) * p2 + 2.0 * (r - 1.0) * p * q + (r - 2.0) * q2 + 2.0 * (r - 2.0) * p + 2.0 * r * q;
    let d = r * (2.0 * p + q);
    let a1 = (r - 2.0) * (p - 1.0) * q3;
    let b1 =
        -(r * p3 - 4.0 * r * p2 - 2.0 * p3 - 2.0 * r * p * q + 2.0 * r * p + 10.0 * p2 + 3.0 * r * q + 4.0 * p * q + r
            - 10.0 * p
            - 6.0 * q
            + 2.0)
            * q2;
    let c1 = -2.0 * r * p3 * q + 2.0 * r * p2 * q2 + r * p * q3 + 7.0 * r * p2 * q + 4.0 * p3 * q
        - 2.0 * r * p * q2
        - 2.0 * p2 * q2
        - 3.0 * r * q3
        - 2.0 * p * q3
        - 5.0 * r * p * q
        - 16.0 * p2 * q
        - 3.0 * r * q2
        + 2.0 * p * q2
        + 6.0 * q3
        + 12.0 * p * q
        - 6.0 * q2;
    let d1 = -r * p3 + 3.0 * r * p2 * q - r * q3 + 3.0 * r * p2 + 2.0 * p3 - 6.0 * r * p * q - 3.0 * r * q2 + 2.0 * q3
        - 2.0 * r * p
        - 6.0 * p2
        - 6.0 * p * q
        - 6.0 * q2
        + 4.0 * p;
    let e1 = (p2 - p * q - q2 - 2.0 * p) * (r + 2.0);
    ScalarPolynomialCoeffs {
        e,
        b,
        c,
        d,
        a1,
        b1,
        c1,
        d1,
        e1,
    }
}

fn check_rank_t(r: usize, t: f64) -> Result<()> {
    if r < 1 {
        return Err(GeomError::InvalidParameter("rank must be at least 1".into()));
    }
    if !(t >= 0.0) {
        return Err(GeomError::InvalidParameter(format!(
            "squared norm t = {t} must be non-negative"
        )));
    }
    Ok(())
}

/// Fiber scalar curvature `f(t)`, `t = |a|²`.
pub fn fiber_scalar(params: CgParams, r: usize, t: f64) -> Result<f64> {
    check_rank_t(r, t)?;
    let k = scalar_coefficients(params, r);
    let poly = ((k.e * t + k.b) * t + k.c) * t + k.d;
    let pre = (r as f64 - 1.0) * (1.0 + t).powf(params.p) / ((1.0 + params.q * t).powi(2) * (1.0 + t).powi(2));
    Ok(pre * poly)
}

/// `f′(t)`.
pub fn fiber_scalar_derivative(params: CgParams, r: usize, t: f64) -> Result<f64> {
    check_rank_t(r, t)?;
    let k = scalar_coefficients(params, r);
    let poly = (((k.a1 * t + k.b1) * t + k.c1) * t + k.d1) * t + k.e1;
    let pre = (r as f64 - 1.0) * (1.0 + t).powf(params.p) / ((1.0 + params.q * t).powi(3) * (1.0 + t).powi(3));
    Ok(pre * poly)
}

/// `s^E(x, a) = s^M(x) + f(|a|²) − ξ(a,a) / (4(1+|a|²)^p)`.
pub fn total_scalar_e<B: EuclideanBundle>(params: CgParams, bundle: &B, pt: &TotalSpacePoint) -> Result<f64> {
    let t = pt.t(bundle)?;
    let sm = bundle.base_scalar(&pt.x)?;
    let f = fiber_scalar(params, bundle.rank(), t)?;
    let xi = xi_form(bundle, &pt.x, &pt.mu, &pt.mu)?;
    Ok(sm + f - xi / (4.0 * (1.0 + t).powf(params.p)))
}

/// `ϖ = ¼c(2 − ck)`
pub fn varpi(c: f64, k: f64) -> f64 {
    0.25 * c * (2.0 - c * k)
}

/// `|B|² = 2ϖ²ω^p((n−1)|Z|² + 2(n−2)|F|²)` at the fiber point `Z + F`.
pub fn b_norm_squared(n: usize, c: f64, k: f64, p: f64, z: &[f64], f: &SkewEndomorphism) -> f64 {
    let (zz, ff) = (dot(z, z), f.norm_sq(k));
    let w = varpi(c, k);
    let omega_p = (1.0 + zz + ff).powf(-p);
    let nf = n as f64;
    2.0 * w * w * omega_p * ((nf - 1.0) * zz + 2.0 * (nf - 2.0) * ff)
}

/// Scalar curvature of `h_{1,1}` on `AO(M, k)` over a space form of curvature `c`:
/// `n(n−1)c + (r−1)/α²·(6 + (r−2)(α²+α+1)) − (2ϖ²/α)((n−1)|Z|² + 2(n−2)|F|²)`.
pub fn atiyah_scalar(n: usize, c: f64, k: f64, z: &[f64], f: &SkewEndomorphism) -> Result<f64> {
    if !(k > 0.0) {
        return Err(GeomError::InvalidParameter(format!("k = {k} must be positive")));
    }
    if n < 2 || z.len() != n || f.dim() != n {
        return Err(GeomError::InvalidParameter(format!("inconsistent dimension n = {n}")));
    }
    Ok(atiyah_scalar_norms(n, c, k, dot(z, z), f.norm_sq(k)))
}

/// [`atiyah_scalar`] in terms of `|Z|²` and `|F|²` only.
pub fn atiyah_scalar_norms(n: usize, c: f64, k: f64, zz: f64, ff: f64) -> f64 {
    let nf = n as f64;
    let r = (n * (n + 1) / 2) as f64;
    let alpha = 1.0 + zz + ff;
    let w = varpi(c, k);
    nf * (nf - 1.0) * c + (r - 1.0) / (alpha * alpha) * (6.0 + (r - 2.0) * (alpha * alpha + alpha + 1.0))
        - 2.0 * w * w / alpha * ((nf - 1.0) * zz + 2.0 * (nf - 2.0) * ff)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositivityConstants {
    pub n: usize,
    pub r: usize,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    /// `C_n`, or `2(1−√2)` when `n = 2`.
    pub c_threshold: f64,
}

impl PositivityConstants {
    /// `K(n, c)`, defined for `c > C_n`, `c ≠ 0`.
    pub fn k_bound(&self, c: f64) -> Option<f64> {
        if c == 0.0 || !(c > self.c_threshold) {
            return None;
        }
        if self.n == 2 {
            return Some(2.0 * (c + 2.0 * (1.0 + c).sqrt()) / (c * c));
        }
        let (a, b, d) = (self.a, self.b, self.d);
        Some(2.0 * (c * d + 2.0 * d.sqrt() * (b + a * c).sqrt()) / (d * c * c))
    }
}

pub fn positivity_constants(n: usize) -> Result<PositivityConstants> {
    if n < 2 {
        return Err(GeomError::InvalidParameter(format!("dimension {n} < 2")));
    }
    let nf = n as f64;
    let r = n * (n + 1) / 2;
    let rf = r as f64;
    let a = nf * (nf - 1.0);
    let b = (rf - 1.0) * (rf - 2.0);
    let d = 4.0 * (nf - 2.0);
    let c_threshold = if n == 2 {
        2.0 * (1.0 - 2f64.sqrt())
    } else {
        2.0 * (a - (a * a + b * d).sqrt()) / d
    };
    Ok(PositivityConstants {
        n,
        r,
        a,
        b,
        d,
        c_threshold,
    })
}

fn check_region_args(n: usize, k: f64) -> Result<PositivityConstants> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(GeomError::InvalidParameter(format!("k = {k} must be positive")));
    }
    positivity_constants(n)
}

/// The stated positivity region: `c = 0`, or `c > C_n` and `0 < k ≤ K(n, c)`.
pub fn positivity_predicate(n: usize, c: f64, k: f64) -> Result<bool> {
    let pc = check_region_args(n, k)?;
    if c == 0.0 {
        return Ok(true);
    }
    Ok(pc.k_bound(c).is_some_and(|kb| k <= kb))
}

/// Exact positivity region of [`atiyah_scalar`] over the whole fiber: the leading
/// coefficient of `α² s^A` as a polynomial in `α` must be non-negative,
/// i.e. `ϖ² ≤ c + 1` for `n = 2` and `ϖ² ≤ (ac + b)/d` for `n ≥ 3`.
///
/// Differs from [`positivity_predicate`] only for large positive `c`
/// (`c > 2(a + √(a² + bd))/d`, or `c > 2(1+√2)` when `n = 2`), where small `k`
/// also fails.
pub fn positivity_exact(n: usize, c: f64, k: f64) -> Result<bool> {
    let pc = check_region_args(n, k)?;
    let w2 = varpi(c, k).powi(2);
    Ok(if n == 2 {
        w2 <= c + 1.0
    } else {
        pc.d * w2 <= pc.a * c + pc.b
    })
}
