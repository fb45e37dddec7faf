use crate::error::{GeomError, Result};
use crate::jet::Real;
use crate::linalg::Mat;
use crate::space_forms::SpaceForm;

use super::{ConnectionCoefficients, EuclideanBundle};

/// Product bundle `M × ℝ^r` with the flat connection.
#[derive(Clone, Copy, Debug)]
pub struct TrivialBundle {
    pub base: SpaceForm,
    rank: usize,
}

impl TrivialBundle {
    pub fn new(base: SpaceForm, rank: usize) -> Self {
        TrivialBundle { base, rank }
    }
}

impl EuclideanBundle for TrivialBundle {
    fn base_scalar(&self, x: &[f64]) -> Result<f64> {
        self.base.lambda(x)?;
        Ok(self.base.scalar_curvature())
    }
    fn base_dim(&self) -> usize {
        self.base.n()
    }
    fn rank(&self) -> usize {
        self.rank
    }
    fn base_metric<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        self.base.conformal_metric(x)
    }
    fn gram<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        self.base.lambda(x)?;
        Ok(Mat::identity(self.rank))
    }
    fn connection<T: Real>(&self, x: &[T]) -> Result<ConnectionCoefficients<T>> {
        self.base.lambda(x)?;
        Ok(ConnectionCoefficients::zeros(self.base.n(), self.rank))
    }
}

/// `TM` of a space form with the Levi-Civita connection, in the orthonormal
/// frame `e_j = λ^{-1} ∂_j`: `Γ^l_{ij} = δ_{li} ∂_jφ − δ_{ij} ∂_lφ`, `φ = ln λ`.
#[derive(Clone, Copy, Debug)]
pub struct TangentBundle {
    pub base: SpaceForm,
}

impl TangentBundle {
    pub fn new(base: SpaceForm) -> Self {
        TangentBundle { base }
    }
}

pub(super) fn levi_civita_frame<T: Real>(dphi: &[T], i: usize, j: usize, l: usize) -> T {
    let mut v = T::zero();
    if l == i {
        v += dphi[j];
    }
    if i == j {
        v -= dphi[l];
    }
    v
}

impl EuclideanBundle for TangentBundle {
    fn base_scalar(&self, x: &[f64]) -> Result<f64> {
        self.base.lambda(x)?;
        Ok(self.base.scalar_curvature())
    }
    fn base_dim(&self) -> usize {
        self.base.n()
    }
    fn rank(&self) -> usize {
        self.base.n()
    }
    fn base_metric<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        self.base.conformal_metric(x)
    }
    fn gram<T: Real>(&self, x: &[T]) -> Result<Mat<T>> {
        self.base.lambda(x)?;
        Ok(Mat::identity(self.base.n()))
    }
    fn connection<T: Real>(&self, x: &[T]) -> Result<ConnectionCoefficients<T>> {
        let dphi = self.base.log_lambda_gradient(x)?;
        let n = self.base.n();
        if dphi.len() != n {
            return Err(GeomError::InvalidParameter("base point dimension".into()));
        }
        Ok(ConnectionCoefficients::from_fn(n, n, |i, j, l| {
            levi_civita_frame(&dphi, i, j, l)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{bundle_curvature, compatibility_residual, oneill_b, CgMetric, CgParams, TotalSpacePoint};
    use crate::oracle::{christoffel, curvature_report, second_jet, Convention};
    use crate::space_forms::wedge;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flat_tangent_bundle_is_trivial() {
        let tm = TangentBundle::new(SpaceForm::new(2, 0.0).unwrap());
        let x = [1.2, -3.0];
        assert_eq!(tm.connection(&x).unwrap().max_abs(), 0.0);
        assert_eq!(tm.gram(&x).unwrap(), Mat::identity(2));
    }

    #[test]
    fn sphere_connection_is_skew_and_compatible() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (n, c) in [(2, 1.0), (3, -0.5)] {
            let sf = SpaceForm::new(n, c).unwrap();
            let tm = TangentBundle::new(sf);
            for _ in 0..10 {
                let x = sf.sample_point(&mut rng);
                assert!(tm.connection(&x).unwrap().skewness_defect() < 1e-15);
                assert!(compatibility_residual(&tm, &x).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn frame_connection_matches_levi_civita() {
        // ∇_{∂i} e_j computed from coordinate Christoffels: e_j = λ^{-1}∂_j.
        let sf = SpaceForm::new(3, 1.5).unwrap();
        let x = [0.3, -0.6, 0.9];
        let jet = second_jet(&sf, &x).unwrap();
        let gamma = christoffel(&jet).unwrap();
        let lam = sf.lambda(&x).unwrap();
        let dlam: Vec<f64> = sf.log_lambda_gradient(&x).unwrap().iter().map(|d| d * lam).collect();
        let conn = TangentBundle::new(sf).connection(&x).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    // ∂_i(λ^{-1}) ∂_j + λ^{-1} Γ^l_ij ∂_l, expressed in e_l = λ^{-1}∂_l
                    let mut coord = lam.recip() * gamma.get(l, i, j);
                    if l == j {
                        coord -= dlam[i] / (lam * lam);
                    }
                    assert!((conn.get(i, j, l) - coord * lam).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn tangent_curvature_matches_base_curvature() {
        let sf = SpaceForm::new(2, 1.0).unwrap();
        let tm = TangentBundle::new(sf);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let x = sf.sample_point(&mut rng);
            let lam = sf.lambda(&x).unwrap();
            let u: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let uc: Vec<f64> = u.iter().map(|s| s / lam).collect();
            let vc: Vec<f64> = v.iter().map(|s| s / lam).collect();
            let curv = bundle_curvature(&tm, &x, Convention::Paper).unwrap();
            let got = curv.apply(&uc, &vc, &a);
            let expected = wedge(&u, &v).apply(&a);
            for (g, e) in got.iter().zip(&expected) {
                assert!((g + e).abs() < 1e-12);
            }
            let b = oneill_b(&tm, &TotalSpacePoint::new(x.clone(), a.clone()), &uc, &vc).unwrap();
            for (g, e) in b.iter().zip(&expected) {
                assert!((g + 0.5 * e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sasaki_on_flat_plane_is_flat() {
        let tm = TangentBundle::new(SpaceForm::new(2, 0.0).unwrap());
        let h = CgMetric::new(tm, CgParams::SASAKI);
        let rep = curvature_report(&h, &[0.4, 1.0, -2.0, 0.5], Convention::Paper).unwrap();
        assert!(rep.riemann_max_abs() < 1e-12);
    }
}
