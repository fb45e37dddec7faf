use std::process::ExitCode;

use cg_lab::bundle::{
    split_fiber, AtiyahBundle, AtiyahParams, CgMetric, CgParams, EuclideanBundle, TangentBundle, TotalSpacePoint,
};
use cg_lab::closed_forms::{atiyah_scalar, positivity_constants, total_scalar_e};
use cg_lab::error::GeomError;
use cg_lab::jet::MAX_VARS;
use cg_lab::oracle::scalar_curvature;
use cg_lab::region::{scan_region, RegionScanConfig, ScanMode};
use cg_lab::space_forms::SpaceForm;
use cg_lab::verify::{run_verification, VerifyCase, VerifyOptions};

use crate::output::{format_number, Cell, Format, Table};
use crate::{ConstantsArgs, Model, RegionArgs, ScalarArgs, VerifyArgs};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    pub fn report(&self) -> ExitCode {
        match self {
            Failure::Usage(m) => {
                eprintln!("error: {m}");
                ExitCode::from(2)
            }
            Failure::Domain(m) => {
                eprintln!("domain error: {m}");
                ExitCode::from(3)
            }
        }
    }
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::Domain(_) | GeomError::Degenerate { .. } | GeomError::DegeneratePlane => {
                Failure::Domain(e.to_string())
            }
            GeomError::InvalidParameter(_) | GeomError::TooManyVariables(_) => Failure::Usage(e.to_string()),
        }
    }
}

pub struct Output {
    pub table: Table,
    pub default_format: Format,
    pub passed: bool,
}

impl Output {
    fn ok(table: Table, default_format: Format) -> Self {
        Output {
            table,
            default_format,
            passed: true,
        }
    }
}

type CmdResult = Result<Output, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

pub fn configure_threads(var: Option<&str>) -> Result<(), Failure> {
    let Some(v) = var else { return Ok(()) };
    let threads: usize = match v.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => return usage(format!("CG_LAB_THREADS must be a positive integer, got `{v}`")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure worker pool: {e}")))
}

fn parse_f64(s: &str, what: &str) -> Result<f64, Failure> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => usage(format!("invalid {what} `{s}`")),
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|v| parse_f64(v, what)).collect()
}

fn parse_dims(s: &str) -> Result<(usize, usize), Failure> {
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("invalid dimension `{v}`")))
    };
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if lo < 2 || lo > hi {
        return usage(format!("dimension range `{s}` must satisfy 2 ≤ min ≤ max"));
    }
    Ok((lo, hi))
}

/// `a:b:steps`.
pub fn parse_range(s: &str, what: &str) -> Result<(f64, f64, usize), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return usage(format!("{what} `{s}` must be a:b:steps"));
    }
    let steps = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|_| Failure::Usage(format!("invalid step count in {what} `{s}`")))?;
    Ok((parse_f64(parts[0], what)?, parse_f64(parts[1], what)?, steps))
}

/// `x1,…/m1,…`; a missing fiber part means the zero section.
pub fn parse_point(s: &str) -> Result<(Vec<f64>, Option<Vec<f64>>), Failure> {
    match s.split_once('/') {
        Some((x, m)) => Ok((parse_list(x, "coordinate")?, Some(parse_list(m, "fiber component")?))),
        None => Ok((parse_list(s, "coordinate")?, None)),
    }
}

fn cg_params(p: f64, q: f64) -> Result<CgParams, Failure> {
    if !p.is_finite() {
        return usage(format!("p = {p} must be finite"));
    }
    Ok(CgParams::new(p, q)?)
}

pub fn constants(args: &ConstantsArgs) -> CmdResult {
    let (lo, hi) = parse_dims(&args.n)?;
    let cs = parse_list(&args.c, "curvature")?;
    let mut headers = vec![
        "n".to_string(),
        "r".into(),
        "a".into(),
        "b".into(),
        "d".into(),
        "c_n".into(),
    ];
    headers.extend(cs.iter().map(|c| format!("k_at_{}", format_number(*c))));
    let mut table = Table {
        headers,
        ..Table::default()
    };
    for n in lo..=hi {
        let pc = positivity_constants(n)?;
        let mut row: Vec<Cell> = vec![
            n.into(),
            pc.r.into(),
            pc.a.into(),
            pc.b.into(),
            pc.d.into(),
            pc.c_threshold.into(),
        ];
        row.extend(cs.iter().map(|&c| Cell::from(pc.k_bound(c))));
        table.push(row);
    }
    Ok(Output::ok(table, Format::Csv))
}

fn fiber_or_zero(m: Option<Vec<f64>>, rank: usize) -> Result<Vec<f64>, Failure> {
    match m {
        None => Ok(vec![0.0; rank]),
        Some(m) if m.len() == rank => Ok(m),
        Some(m) => usage(format!("fiber part has {} components, expected {rank}", m.len())),
    }
}

fn oracle_scalar<B: EuclideanBundle>(
    bundle: &B,
    params: CgParams,
    pt: &TotalSpacePoint,
) -> Result<Option<f64>, Failure> {
    if bundle.total_dim() > MAX_VARS {
        return Ok(None);
    }
    Ok(Some(scalar_curvature(&CgMetric::new(bundle, params), &pt.coords())?))
}

pub fn scalar(args: &ScalarArgs) -> CmdResult {
    let params = cg_params(args.p, args.q)?;
    let sf = SpaceForm::new(args.n, args.c)?;
    let (x, m) = match &args.point {
        Some(s) => parse_point(s)?,
        None => (vec![0.0; args.n], None),
    };
    if x.len() != args.n {
        return usage(format!("base part has {} coordinates, expected {}", x.len(), args.n));
    }
    sf.lambda(&x)?;
    let (closed, oracle) = match args.model {
        Model::Tm => {
            let tm = TangentBundle::new(sf);
            let pt = TotalSpacePoint::new(x, fiber_or_zero(m, args.n)?);
            (
                Some(total_scalar_e(params, &tm, &pt)?),
                oracle_scalar(&tm, params, &pt)?,
            )
        }
        Model::Atiyah => {
            let Some(k) = args.k else {
                return usage("--k is required for the atiyah model");
            };
            let bundle = AtiyahBundle::new(sf, AtiyahParams::new(k)?);
            let pt = TotalSpacePoint::new(x, fiber_or_zero(m, bundle.rank())?);
            let closed = if params == CgParams::CHEEGER_GROMOLL {
                let (z, f) = split_fiber(args.n, k, &pt.mu);
                Some(atiyah_scalar(args.n, args.c, k, &z, &f)?)
            } else {
                None
            };
            (closed, oracle_scalar(&bundle, params, &pt)?)
        }
    };
    let rel_diff = closed.zip(oracle).map(|(a, b)| (a - b).abs() / b.abs().max(1.0));
    let model = match args.model {
        Model::Tm => "tm",
        Model::Atiyah => "atiyah",
    };
    let table = Table::record(vec![
        ("model", model.into()),
        ("n", args.n.into()),
        ("c", args.c.into()),
        ("k", args.k.into()),
        ("p", args.p.into()),
        ("q", args.q.into()),
        ("closed", closed.into()),
        ("oracle", oracle.into()),
        ("rel_diff", rel_diff.into()),
    ]);
    Ok(Output::ok(table, Format::Json))
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    let case: VerifyCase = args.case.parse().map_err(Failure::Usage)?;
    if let Some(t) = args.tol {
        if !(t >= 0.0) || !t.is_finite() {
            return usage(format!("tolerance {t} must be a non-negative number"));
        }
    }
    let opts = VerifyOptions {
        n: args.n,
        r: args.r.unwrap_or(args.n),
        c: args.c,
        k: args.k,
        params: cg_params(args.p, args.q)?,
        samples: args.samples,
        seed: args.seed,
        tol: args.tol,
    };
    if opts.n < 2 || opts.r < 2 {
        return usage("dimensions and ranks must be at least 2");
    }
    if !opts.c.is_finite() {
        return usage(format!("c = {} must be finite", opts.c));
    }
    let rep = run_verification(case, &opts)?;
    let table = Table::record(vec![
        ("case_name", rep.case_name.as_str().into()),
        ("samples", rep.samples.into()),
        ("max_abs_err", rep.max_abs_err.into()),
        ("max_rel_err", rep.max_rel_err.into()),
        ("tolerance", rep.tolerance.into()),
        ("pass", rep.pass.into()),
    ]);
    Ok(Output {
        table,
        default_format: Format::Json,
        passed: rep.pass,
    })
}

pub fn region(args: &RegionArgs) -> CmdResult {
    let mode: ScanMode = args.mode.parse().map_err(Failure::Usage)?;
    let (c_min, c_max, c_steps) = parse_range(&args.c_range, "--c-range")?;
    let (k_min, k_max, k_steps) = parse_range(&args.k_range, "--k-range")?;
    let cfg = RegionScanConfig {
        n: args.n,
        c_min,
        c_max,
        c_steps,
        k_min,
        k_max,
        k_steps,
        sample_points: args.samples,
        seed: args.seed,
    };
    let cells = scan_region(&cfg, mode)?;
    let mut table = Table::new(&[
        "c",
        "k",
        "k_bound",
        "closed",
        "exact",
        "empirical_min",
        "disagree",
        "in_band",
    ]);
    for cell in cells {
        table.push(vec![
            cell.c.into(),
            cell.k.into(),
            cell.k_bound.into(),
            cell.closed.into(),
            cell.exact.into(),
            cell.empirical_min.into(),
            cell.disagree.into(),
            cell.in_band.into(),
        ]);
    }
    Ok(Output::ok(table, Format::Csv))
}
