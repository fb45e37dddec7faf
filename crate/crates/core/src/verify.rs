//! Seeded closed-form versus oracle comparisons.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bundle::{
    b_norm_squared_from_connection, bundle_curvature, join_fiber, principal_curvature_atiyah, split_fiber,
    AtiyahBundle, AtiyahParams, CgMetric, CgParams, EuclideanBundle, FiberMetric, TangentBundle,
};
use crate::closed_forms::{atiyah_scalar, b_norm_squared, fiber_scalar, fiber_scalar_derivative, total_scalar_e};
use crate::error::{GeomError, Result};
use crate::linalg::Mat;
use crate::oracle::{curvature_report, scalar_curvature, Convention};
use crate::rigidity::random_points;
use crate::sampling::{ordered_map, seeded};
use crate::space_forms::{sample_ball, SpaceForm};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyCase {
    Fiber,
    SasakiFlat,
    TmSphere,
    Atiyah,
    Principal,
    Derivative,
}

impl VerifyCase {
    pub const ALL: [VerifyCase; 6] = [
        VerifyCase::Fiber,
        VerifyCase::SasakiFlat,
        VerifyCase::TmSphere,
        VerifyCase::Atiyah,
        VerifyCase::Principal,
        VerifyCase::Derivative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerifyCase::Fiber => "fiber",
            VerifyCase::SasakiFlat => "sasaki-flat",
            VerifyCase::TmSphere => "tm-sphere",
            VerifyCase::Atiyah => "atiyah",
            VerifyCase::Principal => "principal",
            VerifyCase::Derivative => "derivative",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            VerifyCase::Fiber | VerifyCase::TmSphere => 1e-6,
            VerifyCase::SasakiFlat | VerifyCase::Principal => 1e-8,
            VerifyCase::Atiyah => 1e-5,
            VerifyCase::Derivative => 1e-7,
        }
    }
}

impl fmt::Display for VerifyCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VerifyCase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        VerifyCase::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown case `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub n: usize,
    /// Fiber rank for the `fiber` and `derivative` cases.
    pub r: usize,
    pub c: f64,
    pub k: f64,
    pub params: CgParams,
    pub samples: usize,
    pub seed: u64,
    pub tol: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n: 2,
            r: 2,
            c: 1.0,
            k: 1.0,
            params: CgParams::CHEEGER_GROMOLL,
            samples: 5,
            seed: 0,
            tol: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub case_name: String,
    pub samples: usize,
    pub max_abs_err: f64,
    /// Worst `|closed − reference| / max(1, |reference|)`.
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

struct Errors {
    samples: usize,
    abs: f64,
    rel: f64,
}

impl Errors {
    fn new() -> Self {
        Errors {
            samples: 0,
            abs: 0.0,
            rel: 0.0,
        }
    }

    fn push(&mut self, closed: f64, reference: f64) {
        let e = (closed - reference).abs();
        self.abs = self.abs.max(e);
        self.rel = self.rel.max(e / reference.abs().max(1.0));
        if e.is_nan() {
            self.abs = f64::NAN;
            self.rel = f64::NAN;
        }
    }

    fn sample(&mut self, pairs: impl IntoIterator<Item = (f64, f64)>) {
        for (a, b) in pairs {
            self.push(a, b);
        }
        self.samples += 1;
    }
}

pub fn run_verification(case: VerifyCase, opts: &VerifyOptions) -> Result<VerificationReport> {
    if opts.samples == 0 {
        return Err(GeomError::InvalidParameter("samples must be positive".into()));
    }
    let tolerance = opts.tol.unwrap_or(case.default_tolerance());
    let errs = match case {
        VerifyCase::Fiber => verify_fiber(opts)?,
        VerifyCase::SasakiFlat => verify_sasaki_flat(opts)?,
        VerifyCase::TmSphere => verify_tm_sphere(opts)?,
        VerifyCase::Atiyah => verify_atiyah(opts)?,
        VerifyCase::Principal => verify_principal(opts)?,
        VerifyCase::Derivative => verify_derivative(opts)?,
    };
    Ok(VerificationReport {
        case_name: case.name().to_string(),
        samples: errs.samples,
        max_abs_err: errs.abs,
        max_rel_err: errs.rel,
        tolerance,
        pass: errs.rel <= tolerance,
    })
}

fn collect(results: Vec<Result<Vec<(f64, f64)>>>) -> Result<Errors> {
    let mut errs = Errors::new();
    for r in results {
        errs.sample(r?);
    }
    Ok(errs)
}

fn verify_fiber(opts: &VerifyOptions) -> Result<Errors> {
    let r = opts.r;
    let mut rng = seeded(opts.seed);
    let pts: Vec<Vec<f64>> = (0..opts.samples).map(|_| sample_ball(&mut rng, r, 2.0)).collect();
    let field = FiberMetric::new(Mat::identity(r), opts.params);
    collect(ordered_map(&pts, |mu| {
        let t = mu.iter().map(|m| m * m).sum();
        Ok(vec![(fiber_scalar(opts.params, r, t)?, scalar_curvature(&field, mu)?)])
    }))
}

fn verify_sasaki_flat(opts: &VerifyOptions) -> Result<Errors> {
    let flat = SpaceForm::new(opts.n, 0.0)?;
    let tm = TangentBundle::new(flat);
    let field = CgMetric::new(&tm, CgParams::SASAKI);
    let mut rng = seeded(opts.seed);
    let pts: Vec<Vec<f64>> = (0..opts.samples)
        .map(|_| (0..2 * opts.n).map(|_| rng.random_range(-3.0..3.0)).collect())
        .collect();
    collect(ordered_map(&pts, |x| {
        let rep = curvature_report(&field, x, Convention::Paper)?;
        Ok(vec![(rep.riemann_max_abs(), 0.0)])
    }))
}

fn verify_tm_sphere(opts: &VerifyOptions) -> Result<Errors> {
    let sf = SpaceForm::new(opts.n, opts.c)?;
    let tm = TangentBundle::new(sf);
    let field = CgMetric::new(&tm, opts.params);
    let pts = random_points(&sf, opts.n, opts.samples, 1.5, opts.seed);
    collect(ordered_map(&pts, |pt| {
        Ok(vec![(
            total_scalar_e(opts.params, &tm, pt)?,
            scalar_curvature(&field, &pt.coords())?,
        )])
    }))
}

fn atiyah(opts: &VerifyOptions) -> Result<(SpaceForm, AtiyahParams, AtiyahBundle)> {
    let sf = SpaceForm::new(opts.n, opts.c)?;
    let ap = AtiyahParams::new(opts.k)?;
    let bundle = AtiyahBundle::new(sf, ap);
    if bundle.total_dim() > crate::jet::MAX_VARS {
        return Err(GeomError::TooManyVariables(bundle.total_dim()));
    }
    Ok((sf, ap, bundle))
}

fn verify_atiyah(opts: &VerifyOptions) -> Result<Errors> {
    let (sf, _, bundle) = atiyah(opts)?;
    let field = CgMetric::new(&bundle, CgParams::CHEEGER_GROMOLL);
    let pts = random_points(&sf, bundle.rank(), opts.samples, 1.5, opts.seed);
    collect(ordered_map(&pts, |pt| {
        let (z, f) = split_fiber(opts.n, opts.k, &pt.mu);
        Ok(vec![(
            atiyah_scalar(opts.n, opts.c, opts.k, &z, &f)?,
            scalar_curvature(&field, &pt.coords())?,
        )])
    }))
}

fn verify_principal(opts: &VerifyOptions) -> Result<Errors> {
    let (sf, ap, bundle) = atiyah(opts)?;
    let n = opts.n;
    let mut rng = seeded(opts.seed);
    let inputs: Vec<_> = random_points(&sf, bundle.rank(), opts.samples, 1.5, opts.seed)
        .into_iter()
        .map(|pt| {
            let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            (pt, u, v)
        })
        .collect();
    collect(ordered_map(&inputs, |(pt, u, v)| {
        let lam = sf.lambda(&pt.x)?;
        let curv = bundle_curvature(&bundle, &pt.x, Convention::Paper)?;
        let uc: Vec<f64> = u.iter().map(|s| s / lam).collect();
        let vc: Vec<f64> = v.iter().map(|s| s / lam).collect();
        let from_conn = curv.apply(&uc, &vc, &pt.mu);
        let (z, f) = split_fiber(n, opts.k, &pt.mu);
        let (rz, rf) = principal_curvature_atiyah(&sf, ap, u, v, &z, &f);
        let closed = join_fiber(opts.k, &rz, &rf);
        let mut pairs: Vec<(f64, f64)> = closed.into_iter().zip(from_conn).collect();
        let b2 = b_norm_squared(n, opts.c, opts.k, opts.params.p, &z, &f);
        pairs.push((b2, b_norm_squared_from_connection(&bundle, opts.params, pt)?));
        Ok(pairs)
    }))
}

fn verify_derivative(opts: &VerifyOptions) -> Result<Errors> {
    let grid: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
    let f = |t: f64| fiber_scalar(opts.params, opts.r, t);
    collect(ordered_map(&grid, |&t| {
        let closed = fiber_scalar_derivative(opts.params, opts.r, t)?;
        let h = 1e-5;
        let numeric = if t < h {
            (-3.0 * f(t)? + 4.0 * f(t + h)? - f(t + 2.0 * h)?) / (2.0 * h)
        } else {
            (f(t + h)? - f(t - h)?) / (2.0 * h)
        };
        Ok(vec![(closed, numeric)])
    }))
}
