use std::process::ExitCode;
use std::time::{Duration, Instant};

use cg_lab::bundle::{
    b_norm_squared_from_connection, bundle_curvature, split_fiber, AtiyahBundle, AtiyahParams, CgMetric, CgParams,
    EuclideanBundle, FiberMetric, TangentBundle,
};
use cg_lab::closed_forms::{
    atiyah_scalar, atiyah_scalar_norms, b_norm_squared, fiber_ricci, fiber_scalar, fiber_sectional,
    positivity_constants, positivity_predicate, total_scalar_e,
};
use cg_lab::linalg::{dot, Mat};
use cg_lab::oracle::{scalar_curvature, Convention};
use cg_lab::region::{scan_region, RegionScanConfig, ScanMode};
use cg_lab::rigidity::{random_points, symmetric_space_report, vanishing_principal_checks};
use cg_lab::sampling::seeded;
use cg_lab::space_forms::SpaceForm;
use cg_lab::verify::{run_verification, VerifyCase, VerifyOptions};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn cg(p: f64, q: f64) -> CgParams {
    CgParams::new(p, q).unwrap()
}

fn constants() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, printed) in [(3, -2.3), (4, -3.7), (5, -5.1), (6, -6.6), (20, -39.7)] {
        worst = worst.max((positivity_constants(n).unwrap().c_threshold - printed).abs());
    }
    let two = (positivity_constants(2).unwrap().c_threshold - 2.0 * (1.0 - 2f64.sqrt())).abs();
    check(
        worst < 0.1 && two < 1e-12,
        format!("max |C_n − printed| = {worst:.3}, n=2 threshold error {two:.1e}"),
    )
}

fn sasaki_flat() -> Outcome {
    let rep = run_verification(
        VerifyCase::SasakiFlat,
        &VerifyOptions {
            samples: 10,
            seed: 2,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    check(
        rep.max_abs_err < 1e-8 && rep.samples == 10,
        format!("max |R| = {:.2e}", rep.max_abs_err),
    )
}

fn fiber_rigidity() -> Outcome {
    let mut worst_stereo: f64 = 0.0;
    let mut worst_flat: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    for r in [2usize, 3] {
        let oracle_at = |params: CgParams, norm: f64| {
            let mut mu = vec![0.0; r];
            mu[0] = norm * 0.6;
            mu[1] = norm * 0.8;
            scalar_curvature(&FiberMetric::new(Mat::identity(r), params), &mu).unwrap()
        };
        let target = 4.0 * r as f64 * (r as f64 - 1.0);
        for norm in [0.0, 1.0, 2.0] {
            worst_stereo = worst_stereo.max((oracle_at(cg(2.0, 0.0), norm) - target).abs());
            worst_flat = worst_flat.max(oracle_at(cg(0.0, 0.0), norm).abs());
        }
        min_gap = min_gap.min((oracle_at(cg(1.0, 1.0), 0.0) - oracle_at(cg(1.0, 1.0), 1.0)).abs());
    }
    check(
        worst_stereo < 1e-6 && worst_flat < 1e-8 && min_gap > 1e-3,
        format!("(2,0) err {worst_stereo:.1e}, (0,0) err {worst_flat:.1e}, (1,1) gap {min_gap:.3}"),
    )
}

/// Orthonormal basis of `ℝ^r` whose first vector is parallel to `a`.
fn adapted_frame(a: &[f64]) -> Vec<Vec<f64>> {
    let r = a.len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    let candidates = std::iter::once(a.to_vec()).chain((0..r).map(|i| {
        let mut e = vec![0.0; r];
        e[i] = 1.0;
        e
    }));
    for mut v in candidates {
        for e in &out {
            let p = dot(e, &v);
            v.iter_mut().zip(e).for_each(|(vk, ek)| *vk -= p * ek);
        }
        let nv = dot(&v, &v).sqrt();
        if nv > 1e-8 && out.len() < r {
            out.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    out
}

fn fiber_formulas() -> Outcome {
    let mut rng = seeded(4);
    let mut worst_sum: f64 = 0.0;
    for (p, q) in [(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (-1.0, 2.0)] {
        for r in [2usize, 3] {
            for t in [0.0f64, 0.5, 1.0, 2.0, 5.0] {
                let dir: Vec<f64> = (0..r).map(|_| rng.random_range(-1.0..1.0)).collect();
                let nd = dot(&dir, &dir).sqrt();
                let a: Vec<f64> = dir.iter().map(|x| x * t.sqrt() / nd).collect();
                let frame = adapted_frame(&dir);
                let f = fiber_scalar(cg(p, q), r, t).unwrap();
                let mut sect = 0.0;
                let mut ric = 0.0;
                for (i, ei) in frame.iter().enumerate() {
                    for (j, ej) in frame.iter().enumerate() {
                        if i != j {
                            sect += fiber_sectional(cg(p, q), &a, ei, ej).unwrap();
                        }
                    }
                    let hii = (1.0 + t).powf(-p) * (1.0 + q * dot(ei, &a).powi(2));
                    ric += fiber_ricci(cg(p, q), &a, ei, ei).unwrap() / hii;
                }
                worst_sum = worst_sum.max(rel(sect, f)).max(rel(ric, f));
            }
        }
    }
    let mut worst_deriv: f64 = 0.0;
    for (p, q) in [(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (-1.0, 2.0)] {
        for r in [2usize, 3, 6] {
            let opts = VerifyOptions {
                params: cg(p, q),
                r,
                ..Default::default()
            };
            let rep = run_verification(VerifyCase::Derivative, &opts).map_err(|e| e.to_string())?;
            worst_deriv = worst_deriv.max(rep.max_rel_err);
        }
    }
    check(
        worst_sum < 1e-9 && worst_deriv < 1e-7,
        format!("pair sums {worst_sum:.1e}, f′ {worst_deriv:.1e}"),
    )
}

fn decomposition() -> Outcome {
    let sf = SpaceForm::new(2, 1.0).unwrap();
    let tm = TangentBundle::new(sf);
    let pts = random_points(&sf, 2, 5, 1.5, 5);
    let mut worst: f64 = 0.0;
    for params in [cg(0.0, 0.0), cg(1.0, 1.0), cg(2.0, 0.0)] {
        let field = CgMetric::new(&tm, params);
        for pt in &pts {
            let closed = total_scalar_e(params, &tm, pt).unwrap();
            let oracle = scalar_curvature(&field, &pt.coords()).unwrap();
            worst = worst.max(rel(closed, oracle));
        }
    }
    check(worst < 1e-6, format!("max rel err {worst:.1e}"))
}

fn atiyah_agreement(n: usize, c: f64, k: f64, points: usize, seed: u64) -> f64 {
    let sf = SpaceForm::new(n, c).unwrap();
    let bundle = AtiyahBundle::new(sf, AtiyahParams::new(k).unwrap());
    let field = CgMetric::new(&bundle, CgParams::CHEEGER_GROMOLL);
    random_points(&sf, bundle.rank(), points, 1.5, seed)
        .iter()
        .map(|pt| {
            let (z, f) = split_fiber(n, k, &pt.mu);
            let closed = atiyah_scalar(n, c, k, &z, &f).unwrap();
            rel(closed, scalar_curvature(&field, &pt.coords()).unwrap())
        })
        .fold(0.0, f64::max)
}

fn atiyah() -> Outcome {
    let small = [(1.0, 1.0), (1.0, 2.0), (-0.5, 1.0)]
        .iter()
        .map(|&(c, k)| atiyah_agreement(2, c, k, 5, 6))
        .fold(0.0, f64::max);
    let big = atiyah_agreement(3, 1.0, 1.0, 2, 6);
    check(
        small < 1e-5 && big < 1e-4,
        format!("AO(S²) {small:.1e}, AO(S³) {big:.1e}"),
    )
}

fn principal() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, c, k) in [(2, 1.0, 1.0), (2, -0.5, 1.5), (3, 1.0, 0.7), (3, -1.0, 1.3)] {
        for p in [0.0, 1.0, 2.0] {
            let opts = VerifyOptions {
                n,
                c,
                k,
                params: cg(p, 0.5),
                samples: 3,
                seed: 7,
                ..Default::default()
            };
            worst = worst.max(
                run_verification(VerifyCase::Principal, &opts)
                    .map_err(|e| e.to_string())?
                    .max_abs_err,
            );
        }
    }
    let mut vanish: f64 = 0.0;
    for (n, c) in [(2, 1.0), (2, 0.5), (3, 2.0)] {
        let sf = SpaceForm::new(n, c).unwrap();
        let k = 2.0 / c;
        let bundle = AtiyahBundle::new(sf, AtiyahParams::new(k).unwrap());
        for pt in random_points(&sf, bundle.rank(), 3, 1.5, 8) {
            vanish = vanish.max(bundle_curvature(&bundle, &pt.x, Convention::Paper).unwrap().max_abs());
            vanish = vanish.max(b_norm_squared_from_connection(&bundle, cg(1.0, 1.0), &pt).unwrap());
            let (z, f) = split_fiber(n, k, &pt.mu);
            vanish = vanish.max(b_norm_squared(n, c, k, 1.0, &z, &f));
        }
    }
    check(
        worst < 1e-8 && vanish < 1e-8,
        format!("closed vs connection {worst:.1e}, at k=2/c {vanish:.1e}"),
    )
}

fn vanishing() -> Outcome {
    let mut h_err: f64 = 0.0;
    let mut spread: f64 = 0.0;
    let mut value_err: f64 = 0.0;
    for n in [2, 3] {
        let sf = SpaceForm::new(n, 1.0).unwrap();
        let rep = vanishing_principal_checks(&sf, 5, 9).map_err(|e| e.to_string())?;
        h_err = h_err
            .max(rep.max_scalar_residual)
            .max((rep.h_norm_squared - (n * (n - 1)) as f64).abs())
            .max(rep.max_principal_curvature);
        for params in [cg(0.0, 0.0), cg(2.0, 0.0)] {
            let rep = symmetric_space_report(&sf, params, 5, 10).map_err(|e| e.to_string())?;
            spread = spread.max(rep.spread);
            value_err = value_err.max(rep.max_abs_err / rep.predicted_scalar.abs().max(1.0));
        }
    }
    check(
        h_err < 1e-8 && spread < 1e-6 && value_err < 1e-6,
        format!("|H|² residual {h_err:.1e}, spread {spread:.1e}, value err {value_err:.1e}"),
    )
}

fn region() -> Outcome {
    let pc = positivity_constants(2).unwrap();
    let kb = pc.k_bound(1.0).unwrap();
    let box_cfg = RegionScanConfig {
        c_min: 1.0,
        c_max: 1.0 + 1e-9,
        c_steps: 2,
        k_min: kb,
        k_max: kb * 1.05,
        k_steps: 2,
        ..Default::default()
    };
    let cells = scan_region(&box_cfg, ScanMode::Empirical).map_err(|e| e.to_string())?;
    let at_bound = cells[0].empirical_min.unwrap();
    let beyond = atiyah_scalar_norms(2, 1.0, 1.05 * kb, 900.0, 0.0);
    let mut mismatches = 0;
    for i in 0..20 {
        for j in 0..20 {
            let c = (i as f64 - 9.0) * 0.2;
            let k = 0.1 + 0.5 * j as f64;
            let expected =
                c == 0.0 || (c > 2.0 * (1.0 - 2f64.sqrt()) && k <= 2.0 * (c + 2.0 * (1.0 + c).sqrt()) / (c * c));
            if positivity_predicate(2, c, k).unwrap() != expected {
                mismatches += 1;
            }
        }
    }
    check(
        at_bound > 0.0 && beyond < 0.0 && mismatches == 0,
        format!("min at K {at_bound:.3}, s at 1.05K, |Z|=30 {beyond:.3}, predicate mismatches {mismatches}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 9] = [
        ("constants reproduction", constants, Some(Duration::from_secs(1))),
        ("sasaki flatness", sasaki_flat, Some(Duration::from_secs(5))),
        ("fiber rigidity", fiber_rigidity, None),
        ("fiber formula suite", fiber_formulas, None),
        (
            "scalar decomposition on TM",
            decomposition,
            Some(Duration::from_secs(10)),
        ),
        ("atiyah scalar", atiyah, Some(Duration::from_secs(60))),
        ("principal curvature", principal, None),
        ("vanishing-curvature identities", vanishing, None),
        ("positivity region", region, None),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = budget.is_some_and(|b| elapsed > b);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over time budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {} {status} {name}: {detail} ({:.2?})", i + 1, elapsed);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
