//! The algebroid `AO(M, k) = TM ⊕ so(TM)` over a space form, with fiber
//! product `⟨X+F, Y+G⟩_k = ⟨X,Y⟩ − k tr(F∘G)` and connection
//!
//! ```text
//! ∇_X Y = ∇^M_X Y + ½c X∧Y,    ∇_X F = ∇^M_X F + ck F(X).
//! ```
//!
//! The fiber frame is `{e_i}` followed by `ε_ab = (2k)^{-1/2} e_a∧e_b`,
//! `a < b` in lexicographic order, which is orthonormal for `⟨,⟩_k`.

use serde::Serialize;

use crate::closed_forms::varpi;
use crate::error::{GeomError, Result};
use crate::jet::Real;
use crate::linalg::Mat;
use crate::space_forms::{wedge, SkewEndomorphism, SpaceForm};

use super::tangent::levi_civita_frame;
use super::{ConnectionCoefficients, EuclideanBundle};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AtiyahParams {
    pub k: f64,
}

impl AtiyahParams {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(GeomError::InvalidParameter(format!("k = {k} must be positive")));
        }
        Ok(AtiyahParams { k })
    }

    /// `n(n+1)/2`
    pub fn rank(n: usize) -> usize {
        n * (n + 1) / 2
    }
}

#[derive(Clone, Debug)]
pub struct AtiyahBundle {
    pub base: SpaceForm,
    pub params: AtiyahParams,
    pair_index: Vec<usize>,
}

impl AtiyahBundle {
    pub fn new(base: SpaceForm, params: AtiyahParams) -> Self {
        let n = base.n();
        let mut pair_index = vec![usize::MAX; n * n];
        let mut next = n;
        for a in 0..n {
            for b in a + 1..n {
                pair_index[a * n + b] = next;
                next += 1;
            }
        }
        AtiyahBundle {
            base,
            params,
            pair_index,
        }
    }

    pub fn k(&self) -> f64 {
        self.params.k
    }

    /// Fiber index of `±ε_{min(a,b) max(a,b)}` together with the sign, so that
    /// `e_a∧e_b = sign·(2k)^{1/2} ε`.
    fn pair(&self, a: usize, b: usize) -> (usize, f64) {
        let n = self.base.n();
        if a < b {
            (self.pair_index[a * n + b], 1.0)
        } else {
            (self.pair_index[b * n + a], -1.0)
        }
    }
}

impl EuclideanBundle for AtiyahBundle {
    fn base_scalar(&self, x: &[f64]) -> Result<f64> {
        self.base.lambda(x)?;
        Ok(self.base.scalar_curvature())
    }
    fn base_dim(&self) -> usize {
        self.base.n()
    }
    fn rank(&self) -> usize {
        AtiyahParams::rank(self.base.n())
    }
    fn base_metric<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        self.base.conformal_metric(x)
    }
    fn gram<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        self.base.lambda(x)?;
        Ok(Mat::identity(self.rank()))
    }

    fn connection<T: Real>(&self, x: &[T]) -> Result<ConnectionCoefficients<T>> {
        let n = self.base.n();
        let c = self.base.c();
        let k = self.k();
        let s2k = (2.0 * k).sqrt();
        let lam = self.base.lambda(x)?;
        let dphi = self.base.log_lambda_gradient(x)?;
        let mut conn = ConnectionCoefficients::zeros(n, self.rank());
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    conn.add(i, j, l, levi_civita_frame(&dphi, i, j, l));
                }
                // ½c ∂_i∧e_j = ½cλ e_i∧e_j
                if i != j {
                    let (p, s) = self.pair(i, j);
                    conn.add(i, j, p, lam * (0.5 * c * s2k * s));
                }
            }
            for a in 0..n {
                for b in a + 1..n {
                    let (jj, _) = self.pair(a, b);
                    // ck ε_ab(∂_i) = ckλ(2k)^{-1/2}(δ_bi e_a − δ_ai e_b)
                    if b == i {
                        conn.add(i, jj, a, lam * (c * k / s2k));
                    }
                    if a == i {
                        conn.add(i, jj, b, lam * (-c * k / s2k));
                    }
                    // ∇^M ε_ab = (2k)^{-1/2}(∇e_a ∧ e_b + e_a ∧ ∇e_b)
                    for m in 0..n {
                        if m != b {
                            let (p, s) = self.pair(m, b);
                            conn.add(i, jj, p, levi_civita_frame(&dphi, i, a, m) * s);
                        }
                        if m != a {
                            let (p, s) = self.pair(a, m);
                            conn.add(i, jj, p, levi_civita_frame(&dphi, i, b, m) * s);
                        }
                    }
                }
            }
        }
        Ok(conn)
    }
}

/// Splits frame components of a fiber vector of `AO(M, k)` into `(Z, F)`.
pub fn split_fiber(n: usize, k: f64, a: &[f64]) -> (Vec<f64>, SkewEndomorphism) {
    assert_eq!(a.len(), AtiyahParams::rank(n));
    let s2k = (2.0 * k).sqrt();
    let mut m = Mat::zeros(n, n);
    let mut idx = n;
    for p in 0..n {
        for q in p + 1..n {
            m[(p, q)] = a[idx] / s2k;
            m[(q, p)] = -a[idx] / s2k;
            idx += 1;
        }
    }
    let f = SkewEndomorphism::from_matrix(m).expect("constructed antisymmetric");
    (a[..n].to_vec(), f)
}

/// Inverse of [`split_fiber`].
pub fn join_fiber(k: f64, z: &[f64], f: &SkewEndomorphism) -> Vec<f64> {
    let n = z.len();
    let s2k = (2.0 * k).sqrt();
    let mut a = z.to_vec();
    for p in 0..n {
        for q in p + 1..n {
            a.push(s2k * f.get(p, q));
        }
    }
    a
}

/// `R(u,v)Z = −2ϖ (u∧v)(Z)` and `R(u,v)F = −2ϖ [u∧v, F]` for frame-expressed inputs.
pub fn principal_curvature_atiyah(
    sf: &SpaceForm,
    params: AtiyahParams,
    u: &[f64],
    v: &[f64],
    z: &[f64],
    f: &SkewEndomorphism,
) -> (Vec<f64>, SkewEndomorphism) {
    let w = varpi(sf.c(), params.k);
    let uv = wedge(u, v);
    let rz = uv.apply(z).into_iter().map(|c| -2.0 * w * c).collect();
    (rz, uv.commutator(f).scaled(-2.0 * w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{
        b_norm_squared_from_connection, bundle_curvature, compatibility_residual, xi_form, CgParams, TotalSpacePoint,
    };
    use crate::linalg::dot;
    use crate::oracle::Convention;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, n: usize, s: f64) -> Vec<f64> {
        (0..n).map(|_| rng.random_range(-s..s)).collect()
    }

    #[test]
    fn rank_and_dimensions() {
        let b = AtiyahBundle::new(SpaceForm::new(2, 0.3).unwrap(), AtiyahParams::new(1.0).unwrap());
        assert_eq!(b.rank(), 3);
        assert_eq!(b.total_dim(), 5);
        let b = AtiyahBundle::new(SpaceForm::new(3, 1.0).unwrap(), AtiyahParams::new(1.0).unwrap());
        assert_eq!(b.total_dim(), 9);
        assert!(AtiyahParams::new(0.0).is_err());
        assert!(AtiyahParams::new(-1.0).is_err());
    }

    #[test]
    fn flat_base_gives_zero_connection() {
        let b = AtiyahBundle::new(SpaceForm::new(3, 0.0).unwrap(), AtiyahParams::new(0.7).unwrap());
        assert_eq!(b.connection(&[0.4, 1.0, -2.0]).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn frame_element_has_unit_norm() {
        let k = 0.35;
        let eps = wedge(&[1.0, 0.0], &[0.0, 1.0]).scaled((2.0 * k).powf(-0.5));
        assert!((eps.norm_sq(k) - 1.0).abs() < 1e-15);
        let a = join_fiber(k, &[0.0, 0.0], &eps);
        assert_eq!(&a[..2], &[0.0, 0.0]);
        assert!((a[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn split_join_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2, 3, 4] {
            let a = random_vec(&mut rng, AtiyahParams::rank(n), 2.0);
            let (z, f) = split_fiber(n, 0.6, &a);
            let back = join_fiber(0.6, &z, &f);
            for (x, y) in a.iter().zip(&back) {
                assert!((x - y).abs() < 1e-14);
            }
            let t = dot(&a, &a);
            assert!((dot(&z, &z) + f.norm_sq(0.6) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn connection_is_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, c, k) in [(2, 1.0, 1.0), (2, -1.0, 0.4), (3, 0.5, 2.0), (3, -0.5, 1.0)] {
            let sf = SpaceForm::new(n, c).unwrap();
            let b = AtiyahBundle::new(sf, AtiyahParams::new(k).unwrap());
            for _ in 0..10 {
                let x = sf.sample_point(&mut rng);
                assert!(b.connection(&x).unwrap().skewness_defect() < 1e-14);
                assert!(compatibility_residual(&b, &x).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn principal_curvature_matches_connection() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (n, c, k) in [(2, 1.0, 1.0), (2, -0.5, 1.0), (3, 1.0, 0.7), (3, -1.0, 1.3)] {
            let sf = SpaceForm::new(n, c).unwrap();
            let params = AtiyahParams::new(k).unwrap();
            let b = AtiyahBundle::new(sf, params);
            let x = sf.sample_point(&mut rng);
            let lam = sf.lambda(&x).unwrap();
            let curv = bundle_curvature(&b, &x, Convention::Paper).unwrap();
            let u = random_vec(&mut rng, n, 1.0);
            let v = random_vec(&mut rng, n, 1.0);
            let a = random_vec(&mut rng, b.rank(), 1.0);
            let uc: Vec<f64> = u.iter().map(|s| s / lam).collect();
            let vc: Vec<f64> = v.iter().map(|s| s / lam).collect();
            let got = curv.apply(&uc, &vc, &a);
            let (z, f) = split_fiber(n, k, &a);
            let (rz, rf) = principal_curvature_atiyah(&sf, params, &u, &v, &z, &f);
            let expected = join_fiber(k, &rz, &rf);
            for (g, e) in got.iter().zip(&expected) {
                assert!((g - e).abs() < 1e-8, "n={n} c={c} k={k}: {g} vs {e}");
            }
        }
    }

    #[test]
    fn principal_curvature_examples() {
        let sf = SpaceForm::new(3, 1.0).unwrap();
        let (u, v) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let f = wedge(&u, &v);
        let rigid = AtiyahParams::new(2.0).unwrap();
        let (rz, rf) = principal_curvature_atiyah(&sf, rigid, &u, &v, &[0.3, 1.0, 2.0], &wedge(&u, &[0.0, 0.0, 1.0]));
        assert!(rz.iter().all(|c| *c == 0.0) && rf.max_abs() == 0.0);
        let params = AtiyahParams::new(1.0).unwrap();
        let w = varpi(1.0, 1.0);
        let (rz, rf) = principal_curvature_atiyah(&sf, params, &u, &v, &u, &f);
        assert_eq!(rz, vec![0.0, 2.0 * w, 0.0]);
        assert_eq!(rf.max_abs(), 0.0);
    }

    #[test]
    fn xi_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (n, c, k) in [(2, 1.0, 1.0), (2, -0.5, 0.8), (3, 1.0, 1.0), (3, 0.5, 3.0)] {
            let sf = SpaceForm::new(n, c).unwrap();
            let b = AtiyahBundle::new(sf, AtiyahParams::new(k).unwrap());
            let x = sf.sample_point(&mut rng);
            let a = random_vec(&mut rng, b.rank(), 1.5);
            let (z, f) = split_fiber(n, k, &a);
            let w = varpi(c, k);
            let nf = (n - 1) as f64;
            let expected = 8.0 * w * w * (nf * dot(&z, &z) + 2.0 * (nf - 1.0) * f.norm_sq(k));
            let got = xi_form(&b, &x, &a, &a).unwrap();
            assert!(
                (got - expected).abs() < 1e-8 * (1.0 + expected.abs()),
                "{got} vs {expected}"
            );

            let params = CgParams::new(1.5, 0.5).unwrap();
            let pt = TotalSpacePoint::new(x, a);
            let t = pt.t(&b).unwrap();
            let bb = b_norm_squared_from_connection(&b, params, &pt).unwrap();
            assert!((bb - 0.25 * (1.0 + t).powf(-params.p) * got).abs() < 1e-10);
        }
    }

    #[test]
    fn rigid_parameter_is_flat() {
        for (n, c) in [(2, 1.0), (3, 0.5), (3, 2.0)] {
            let sf = SpaceForm::new(n, c).unwrap();
            let b = AtiyahBundle::new(sf, AtiyahParams::new(2.0 / c).unwrap());
            let curv = bundle_curvature(
                &b,
                &sf.sample_point(&mut ChaCha8Rng::seed_from_u64(2)),
                Convention::Paper,
            )
            .unwrap();
            assert!(curv.max_abs() < 1e-10);
        }
    }
}
