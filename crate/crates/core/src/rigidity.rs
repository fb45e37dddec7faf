//! Rigidity classifications for `h_{p,q}` as exact predicates, and numerical
//! checks of the rigid cases on the algebroid `AO(M, 2/c)`.

use serde::Serialize;

use crate::bundle::{
    bundle_curvature, AtiyahBundle, AtiyahParams, CgMetric, CgParams, EuclideanBundle, TotalSpacePoint,
};
use crate::closed_forms::fiber_scalar;
use crate::error::{GeomError, Result};
use crate::oracle::{curvature_report, scalar_curvature, Convention};
use crate::sampling::{ordered_map, seeded};
use crate::space_forms::{sample_ball, SpaceForm};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberCase {
    SasakiFlatPair,
    StereographicPair,
    Nonconstant,
}

pub fn fiber_case(params: CgParams) -> FiberCase {
    match (params.p, params.q) {
        (p, q) if p == 0.0 && q == 0.0 => FiberCase::SasakiFlatPair,
        (p, q) if p == 2.0 && q == 0.0 => FiberCase::StereographicPair,
        _ => FiberCase::Nonconstant,
    }
}

/// Two squared norms at which the fiber scalar curvature differs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub t1: f64,
    pub f1: f64,
    pub t2: f64,
    pub f2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RigidityVerdict {
    pub case: FiberCase,
    pub fiber_scalar_value: Option<f64>,
    pub scalar_offset: Option<f64>,
    pub witness: Option<Witness>,
}

fn rigid_value(case: FiberCase, r: usize) -> Option<f64> {
    let rf = r as f64;
    match case {
        FiberCase::SasakiFlatPair => Some(0.0),
        FiberCase::StereographicPair => Some(4.0 * rf * (rf - 1.0)),
        FiberCase::Nonconstant => None,
    }
}

/// Whether the fiber scalar curvature is constant, with a witness when it is not.
pub fn classify_fiber_constancy(params: CgParams, r: usize) -> Result<RigidityVerdict> {
    if r < 2 {
        return Err(GeomError::InvalidParameter(format!("rank {r} < 2")));
    }
    let case = fiber_case(params);
    let value = rigid_value(case, r);
    let witness = if case == FiberCase::Nonconstant {
        let f1 = fiber_scalar(params, r, 0.0)?;
        let mut found = None;
        for t2 in [1.0, 2.0, 0.5, 5.0, 10.0, 0.25, 20.0, 3.0] {
            let f2 = fiber_scalar(params, r, t2)?;
            if (f1 - f2).abs() > 1e-9 {
                found = Some(Witness { t1: 0.0, f1, t2, f2 });
                break;
            }
        }
        found
    } else {
        None
    };
    Ok(RigidityVerdict {
        case,
        fiber_scalar_value: value,
        scalar_offset: value,
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalarRigidity {
    pub constant: bool,
    /// `s^E − s^M∘π` when constant.
    pub offset: Option<f64>,
}

/// The total scalar curvature is constant iff the connection is flat, the base
/// scalar curvature is constant and `(p,q)` is one of the two rigid pairs.
pub fn scalar_rigidity(
    params: CgParams,
    r: usize,
    flat_connection: bool,
    constant_base_scalar: bool,
) -> ScalarRigidity {
    let value = rigid_value(fiber_case(params), r);
    let constant = flat_connection && constant_base_scalar && value.is_some();
    ScalarRigidity {
        constant,
        offset: if constant { value } else { None },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "lambda")]
pub enum BaseProperty {
    RicciFlat,
    Einstein(f64),
    LocallySymmetric,
    Flat,
    None,
}

impl BaseProperty {
    fn einstein_constant(self) -> Option<f64> {
        match self {
            BaseProperty::Flat | BaseProperty::RicciFlat => Some(0.0),
            BaseProperty::Einstein(l) => Some(l),
            _ => None,
        }
    }

    fn locally_symmetric(self) -> bool {
        matches!(self, BaseProperty::Flat | BaseProperty::LocallySymmetric)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpecialStructures {
    pub einstein: Option<f64>,
    pub locally_symmetric: bool,
    pub constant_sectional: bool,
    pub flat: bool,
}

/// Einstein, locally symmetric and constant-sectional-curvature verdicts for `(E, h_{p,q})`.
pub fn classify_special_structures(
    params: CgParams,
    r: usize,
    flat_connection: bool,
    base: BaseProperty,
) -> SpecialStructures {
    let case = fiber_case(params);
    let rf = r as f64;
    let einstein = match (case, flat_connection, base.einstein_constant()) {
        (FiberCase::SasakiFlatPair, true, Some(l)) if l == 0.0 => Some(0.0),
        (FiberCase::StereographicPair, true, Some(l)) if l == 4.0 * (rf - 1.0) => Some(l),
        _ => None,
    };
    let locally_symmetric = flat_connection && case != FiberCase::Nonconstant && base.locally_symmetric();
    let flat = flat_connection && case == FiberCase::SasakiFlatPair && base == BaseProperty::Flat;
    SpecialStructures {
        einstein,
        locally_symmetric,
        constant_sectional: flat,
        flat,
    }
}

/// [`classify_special_structures`] for `TM` with its Levi-Civita connection,
/// whose curvature vanishes exactly when the base is flat.
pub fn classify_tangent_bundle(params: CgParams, n: usize, base_flat: bool) -> SpecialStructures {
    let base = if base_flat {
        BaseProperty::Flat
    } else {
        BaseProperty::None
    };
    classify_special_structures(params, n, base_flat, base)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingPrincipalReport {
    pub n: usize,
    pub c: f64,
    pub k: f64,
    pub points: usize,
    pub max_principal_curvature: f64,
    /// Worst `|Σ_i |H_{e_j} e_i|² − ric^M(e_j, e_j)|` over `j` and points.
    pub max_ricci_residual: f64,
    /// Worst `|Σ_{i,j} |H_{e_j} e_i|² − s^M|`.
    pub max_scalar_residual: f64,
    /// `|H|²` at the last point.
    pub h_norm_squared: f64,
    pub expected_scalar: f64,
}

/// On `AO(M, 2/c)` with `c > 0`, the principal curvature vanishes and the
/// second fundamental form `H` recovers the Ricci and scalar curvature of the base.
pub fn vanishing_principal_checks(sf: &SpaceForm, points: usize, seed: u64) -> Result<VanishingPrincipalReport> {
    if !(sf.c() > 0.0) {
        return Err(GeomError::InvalidParameter(format!("c = {} must be positive", sf.c())));
    }
    let n = sf.n();
    let k = 2.0 / sf.c();
    let bundle = AtiyahBundle::new(*sf, AtiyahParams::new(k)?);
    let mut rng = seeded(seed);
    let mut max_curv: f64 = 0.0;
    let mut max_ric: f64 = 0.0;
    let mut max_s: f64 = 0.0;
    let mut h_total = 0.0;
    for _ in 0..points {
        let x = sf.sample_point(&mut rng);
        max_curv = max_curv.max(bundle_curvature(&bundle, &x, Convention::Paper)?.max_abs());
        let lam = sf.lambda(&x)?;
        let conn = bundle.connection(&x)?;
        let rep = curvature_report(sf, &x, Convention::Paper)?;
        h_total = 0.0;
        for j in 0..n {
            let mut hj = 0.0;
            for i in 0..n {
                for l in n..bundle.rank() {
                    hj += (conn.get(j, i, l) / lam).powi(2);
                }
            }
            let ric = rep.ricci[(j, j)] / (lam * lam);
            max_ric = max_ric.max((hj - ric).abs());
            h_total += hj;
        }
        max_s = max_s.max((h_total - rep.scalar).abs());
    }
    Ok(VanishingPrincipalReport {
        n,
        c: sf.c(),
        k,
        points,
        max_principal_curvature: max_curv,
        max_ricci_residual: max_ric,
        max_scalar_residual: max_s,
        h_norm_squared: h_total,
        expected_scalar: sf.scalar_curvature(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricSpaceReport {
    pub n: usize,
    pub r: usize,
    pub c: f64,
    pub params: CgParams,
    pub predicted_scalar: f64,
    pub oracle_scalars: Vec<f64>,
    pub spread: f64,
    pub max_abs_err: f64,
    /// The curvature `4(r−1)/(n−1)` for which `h_{2,0}` is Einstein.
    pub einstein_parameter: f64,
    pub einstein: bool,
}

/// Predicted constant scalar curvature of `AO(M, 2/c)` for the two rigid
/// pairs, cross-checked with the oracle at random total-space points.
pub fn symmetric_space_report(
    sf: &SpaceForm,
    params: CgParams,
    points: usize,
    seed: u64,
) -> Result<SymmetricSpaceReport> {
    let case = fiber_case(params);
    if case == FiberCase::Nonconstant {
        return Err(GeomError::InvalidParameter(format!(
            "(p, q) = ({}, {}) is not one of (0, 0), (2, 0)",
            params.p, params.q
        )));
    }
    if !(sf.c() > 0.0) {
        return Err(GeomError::InvalidParameter(format!("c = {} must be positive", sf.c())));
    }
    let n = sf.n();
    let bundle = AtiyahBundle::new(*sf, AtiyahParams::new(2.0 / sf.c())?);
    let r = bundle.rank();
    let predicted = sf.scalar_curvature() + rigid_value(case, r).unwrap_or(0.0);
    let pts = random_points(sf, r, points, 1.0, seed);
    let field = CgMetric::new(&bundle, params);
    let oracle = ordered_map(&pts, |pt| scalar_curvature(&field, &pt.coords()))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let (lo, hi) = min_max(&oracle);
    let max_abs_err = oracle.iter().map(|s| (s - predicted).abs()).fold(0.0, f64::max);
    let einstein_parameter = 4.0 * (r as f64 - 1.0) / (n as f64 - 1.0);
    Ok(SymmetricSpaceReport {
        n,
        r,
        c: sf.c(),
        params,
        predicted_scalar: predicted,
        oracle_scalars: oracle,
        spread: hi - lo,
        max_abs_err,
        einstein_parameter,
        einstein: case == FiberCase::StereographicPair && sf.c() == einstein_parameter,
    })
}

/// Smallest sampled sectional curvature of `(AO(M, 2/c), h_{p,q})` over random
/// planes at random points: a soft check of non-negativity.
pub fn min_sampled_sectional(sf: &SpaceForm, params: CgParams, planes: usize, seed: u64) -> Result<f64> {
    if !(sf.c() > 0.0) {
        return Err(GeomError::InvalidParameter(format!("c = {} must be positive", sf.c())));
    }
    let bundle = AtiyahBundle::new(*sf, AtiyahParams::new(2.0 / sf.c())?);
    let field = CgMetric::new(&bundle, params);
    let dim = bundle.total_dim();
    let mut rng = seeded(seed);
    let mut worst = f64::INFINITY;
    let per_point = 20;
    let mut done = 0;
    while done < planes {
        let pt = TotalSpacePoint::new(sf.sample_point(&mut rng), sample_ball(&mut rng, bundle.rank(), 1.5));
        let rep = curvature_report(&field, &pt.coords(), Convention::Paper)?;
        for _ in 0..per_point.min(planes - done) {
            let u: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            match rep.sectional_curvature(&u, &v) {
                Ok(s) => worst = worst.min(s),
                Err(GeomError::DegeneratePlane) => continue,
                Err(e) => return Err(e),
            }
            done += 1;
        }
    }
    Ok(worst)
}

/// Seeded total-space points: base points from the space form and fiber
/// points uniform in the ball of radius `fiber_radius`.
pub fn random_points(sf: &SpaceForm, rank: usize, count: usize, fiber_radius: f64, seed: u64) -> Vec<TotalSpacePoint> {
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| {
            let x = sf.sample_point(&mut rng);
            TotalSpacePoint::new(x, sample_ball(&mut rng, rank, fiber_radius))
        })
        .collect()
}

/// Oracle scalar curvature of `h_{p,q}` at each point, and the spread (max − min).
pub fn sampled_scalar_spread<B: EuclideanBundle>(
    bundle: &B,
    params: CgParams,
    points: &[TotalSpacePoint],
) -> Result<(Vec<f64>, f64)> {
    let field = CgMetric::new(bundle, params);
    let values = ordered_map(points, |pt| scalar_curvature(&field, &pt.coords()))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let (lo, hi) = min_max(&values);
    Ok((values, hi - lo))
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{TangentBundle, TrivialBundle};

    fn cg(p: f64, q: f64) -> CgParams {
        CgParams::new(p, q).unwrap()
    }

    #[test]
    fn fiber_constancy_examples() {
        let v = classify_fiber_constancy(cg(0.0, 0.0), 3).unwrap();
        assert_eq!(v.case, FiberCase::SasakiFlatPair);
        assert_eq!(v.fiber_scalar_value, Some(0.0));
        let v = classify_fiber_constancy(cg(2.0, 0.0), 3).unwrap();
        assert_eq!(v.case, FiberCase::StereographicPair);
        assert_eq!(v.fiber_scalar_value, Some(24.0));
        let v = classify_fiber_constancy(cg(1.0, 1.0), 3).unwrap();
        assert_eq!(v.case, FiberCase::Nonconstant);
        let w = v.witness.unwrap();
        assert_eq!((w.t1, w.f1, w.t2), (0.0, 18.0, 1.0));
        assert!(w.f2 != 18.0);
        assert!(classify_fiber_constancy(cg(1.0, 1.0), 1).is_err());
    }

    #[test]
    fn witnesses_are_genuine() {
        for (p, q) in [
            (1.0, 1.0),
            (0.5, 0.0),
            (3.0, 0.0),
            (-1.0, 2.0),
            (2.0, 0.1),
            (0.0, 0.5),
            (1.0, 0.0),
        ] {
            for r in [2usize, 3, 6] {
                let v = classify_fiber_constancy(cg(p, q), r).unwrap();
                assert_eq!(v.case, FiberCase::Nonconstant);
                let w = v.witness.unwrap_or_else(|| panic!("no witness for ({p},{q}) r={r}"));
                assert!((w.f1 - w.f2).abs() > 1e-9);
                assert_eq!(w.f2, fiber_scalar(cg(p, q), r, w.t2).unwrap());
            }
        }
    }

    #[test]
    fn scalar_rigidity_examples() {
        assert_eq!(
            scalar_rigidity(cg(0.0, 0.0), 3, true, true),
            ScalarRigidity {
                constant: true,
                offset: Some(0.0)
            }
        );
        assert_eq!(
            scalar_rigidity(cg(2.0, 0.0), 3, true, true),
            ScalarRigidity {
                constant: true,
                offset: Some(24.0)
            }
        );
        assert!(!scalar_rigidity(cg(1.0, 1.0), 3, true, true).constant);
        assert!(!scalar_rigidity(cg(0.0, 0.0), 3, false, true).constant);
        assert!(!scalar_rigidity(cg(2.0, 0.0), 3, true, false).constant);
    }

    #[test]
    fn special_structure_examples() {
        let s = classify_special_structures(cg(0.0, 0.0), 3, true, BaseProperty::RicciFlat);
        assert_eq!(s.einstein, Some(0.0));
        let s = classify_special_structures(cg(2.0, 0.0), 3, true, BaseProperty::Einstein(8.0));
        assert_eq!(s.einstein, Some(8.0));
        assert!(!s.locally_symmetric);
        let s = classify_special_structures(cg(2.0, 0.0), 3, true, BaseProperty::Einstein(7.0));
        assert_eq!(s.einstein, None);
        let s = classify_special_structures(cg(0.0, 0.0), 3, true, BaseProperty::Flat);
        assert!(s.flat && s.constant_sectional && s.locally_symmetric);
        assert_eq!(s.einstein, Some(0.0));
        let s = classify_special_structures(cg(2.0, 0.0), 2, true, BaseProperty::LocallySymmetric);
        assert!(s.locally_symmetric && !s.flat);
        let s = classify_special_structures(cg(1.0, 1.0), 2, true, BaseProperty::Flat);
        assert_eq!(
            s,
            SpecialStructures {
                einstein: None,
                locally_symmetric: false,
                constant_sectional: false,
                flat: false
            }
        );
        let s = classify_special_structures(cg(0.0, 0.0), 2, false, BaseProperty::Flat);
        assert!(!s.flat && !s.locally_symmetric && s.einstein.is_none());
    }

    #[test]
    fn tangent_bundle_specializations() {
        // TM is Einstein iff (0,0) over a flat base, and then flat
        for n in [2usize, 3, 5] {
            let s = classify_tangent_bundle(cg(0.0, 0.0), n, true);
            assert!(s.flat && s.einstein == Some(0.0));
            let s = classify_tangent_bundle(cg(2.0, 0.0), n, true);
            assert!(s.locally_symmetric && s.einstein.is_none() && !s.flat);
            assert!(classify_tangent_bundle(cg(0.0, 0.0), n, false) == classify_tangent_bundle(cg(1.0, 1.0), n, true));
        }
        assert!(scalar_rigidity(cg(2.0, 0.0), 3, true, true).offset == Some(24.0));
    }

    #[test]
    fn vanishing_principal_examples() {
        let r = vanishing_principal_checks(&SpaceForm::new(2, 1.0).unwrap(), 3, 1).unwrap();
        assert!(r.max_principal_curvature < 1e-8);
        assert!((r.h_norm_squared - 2.0).abs() < 1e-8);
        let r = vanishing_principal_checks(&SpaceForm::new(3, 1.0).unwrap(), 3, 1).unwrap();
        assert!((r.h_norm_squared - 6.0).abs() < 1e-8);
        assert!(vanishing_principal_checks(&SpaceForm::new(2, 0.0).unwrap(), 3, 1).is_err());
        for n in [2, 3] {
            for c in [0.5, 1.0, 2.0] {
                let r = vanishing_principal_checks(&SpaceForm::new(n, c).unwrap(), 4, 7).unwrap();
                assert!(r.max_principal_curvature < 1e-8);
                assert!(r.max_ricci_residual < 1e-8, "{r:?}");
                assert!(r.max_scalar_residual < 1e-8);
            }
        }
    }

    #[test]
    fn symmetric_space_examples() {
        let s2 = SpaceForm::new(2, 1.0).unwrap();
        let rep = symmetric_space_report(&s2, cg(0.0, 0.0), 3, 5).unwrap();
        assert_eq!(rep.predicted_scalar, 2.0);
        assert!(rep.max_abs_err < 1e-6 && rep.spread < 1e-6);
        let rep = symmetric_space_report(&s2, cg(2.0, 0.0), 3, 5).unwrap();
        assert_eq!(rep.predicted_scalar, 26.0);
        assert!(rep.max_abs_err < 1e-6);
        assert_eq!(rep.einstein_parameter, 8.0);
        assert!(!rep.einstein);
        let rep = symmetric_space_report(&SpaceForm::new(2, 8.0).unwrap(), cg(2.0, 0.0), 1, 5).unwrap();
        assert!(rep.einstein);
        assert!(symmetric_space_report(&s2, cg(1.0, 1.0), 3, 5).is_err());
    }

    #[test]
    fn sampled_constancy_restates_rigidity() {
        let flat = SpaceForm::new(2, 0.0).unwrap();
        let triv = TrivialBundle::new(flat, 2);
        let pts = random_points(&flat, 2, 10, 2.0, 3);
        for p in [cg(0.0, 0.0), cg(2.0, 0.0)] {
            let (_, spread) = sampled_scalar_spread(&triv, p, &pts).unwrap();
            assert!(spread < 1e-8);
        }
        let (_, spread) = sampled_scalar_spread(&triv, cg(1.0, 1.0), &pts).unwrap();
        assert!(spread > 1e-3);
        let tm = TangentBundle::new(SpaceForm::new(2, 1.0).unwrap());
        let (_, spread) = sampled_scalar_spread(&tm, cg(0.0, 0.0), &pts).unwrap();
        assert!(spread > 1e-3);
    }

    #[test]
    fn rigid_algebroid_has_nonnegative_sampled_sectional_curvature() {
        let s2 = SpaceForm::new(2, 1.0).unwrap();
        for p in [cg(0.0, 0.0), cg(2.0, 0.0)] {
            assert!(min_sampled_sectional(&s2, p, 200, 11).unwrap() >= -1e-8);
        }
    }
}
