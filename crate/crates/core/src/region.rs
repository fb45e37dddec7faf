//! Grid scans of the `(c, k)` positivity region of the `h_{1,1}` scalar
//! curvature on `AO(M, k)`.

use std::str::FromStr;

use serde::Serialize;

use crate::closed_forms::{atiyah_scalar_norms, positivity_constants, positivity_exact, positivity_predicate};
use crate::error::{GeomError, Result};
use crate::sampling::{halton_2d, ordered_map};

pub const MAX_CELLS: usize = 1_000_000;
/// Half-width of the sampled box in `|Z|` and `|F|`.
pub const BOX: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionScanConfig {
    pub n: usize,
    pub c_min: f64,
    pub c_max: f64,
    pub c_steps: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub k_steps: usize,
    pub sample_points: usize,
    pub seed: u64,
}

impl Default for RegionScanConfig {
    fn default() -> Self {
        RegionScanConfig {
            n: 2,
            c_min: -1.0,
            c_max: 2.0,
            c_steps: 31,
            k_min: 0.1,
            k_max: 10.0,
            k_steps: 50,
            sample_points: 400,
            seed: 0,
        }
    }
}

impl RegionScanConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(GeomError::InvalidParameter(m));
        if self.n < 2 {
            return bad(format!("dimension {} < 2", self.n));
        }
        if self.c_steps < 2 || self.k_steps < 2 {
            return bad("grid needs at least 2 steps per axis".into());
        }
        if ![self.c_min, self.c_max, self.k_min, self.k_max]
            .iter()
            .all(|v| v.is_finite())
        {
            return bad("ranges must be finite".into());
        }
        if !(self.k_min > 0.0) {
            return bad(format!("k_min = {} must be positive", self.k_min));
        }
        if self.c_min > self.c_max || self.k_min > self.k_max {
            return bad("range bounds are reversed".into());
        }
        match self.c_steps.checked_mul(self.k_steps) {
            Some(cells) if cells <= MAX_CELLS => {}
            _ => return bad(format!("grid exceeds {MAX_CELLS} cells")),
        }
        if self.sample_points == 0 {
            return bad("sample_points must be positive".into());
        }
        Ok(())
    }

    pub fn c_step(&self) -> f64 {
        (self.c_max - self.c_min) / (self.c_steps - 1) as f64
    }

    pub fn k_step(&self) -> f64 {
        (self.k_max - self.k_min) / (self.k_steps - 1) as f64
    }

    fn c_at(&self, i: usize) -> f64 {
        if i + 1 == self.c_steps {
            self.c_max
        } else {
            self.c_min + i as f64 * self.c_step()
        }
    }

    fn k_at(&self, j: usize) -> f64 {
        if j + 1 == self.k_steps {
            self.k_max
        } else {
            self.k_min + j as f64 * self.k_step()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    Closed,
    Empirical,
    Both,
}

impl FromStr for ScanMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "closed" => Ok(ScanMode::Closed),
            "empirical" => Ok(ScanMode::Empirical),
            "both" => Ok(ScanMode::Both),
            _ => Err(format!("unknown mode `{s}` (expected closed, empirical or both)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionCell {
    pub c: f64,
    pub k: f64,
    /// Stated region test.
    pub closed: bool,
    /// Non-negativity of the leading coefficient of `α² s^A`.
    pub exact: bool,
    pub k_bound: Option<f64>,
    pub empirical_min: Option<f64>,
    pub disagree: Option<bool>,
    /// Within one grid step of `k = K(n, c)` or of `c = C_n`.
    pub in_band: bool,
}

/// One row per grid cell, `c` outer and `k` inner.
pub fn scan_region(cfg: &RegionScanConfig, mode: ScanMode) -> Result<Vec<RegionCell>> {
    cfg.validate()?;
    let pc = positivity_constants(cfg.n)?;
    let samples: Vec<(f64, f64)> = halton_2d(cfg.sample_points, cfg.seed)
        .into_iter()
        .map(|[u, v]| ((BOX * u).powi(2), (BOX * v).powi(2)))
        .collect();
    let (dc, dk) = (cfg.c_step(), cfg.k_step());
    let grid: Vec<(f64, f64)> = (0..cfg.c_steps)
        .flat_map(|i| (0..cfg.k_steps).map(move |j| (i, j)))
        .map(|(i, j)| (cfg.c_at(i), cfg.k_at(j)))
        .collect();
    let empirical = mode != ScanMode::Closed;
    ordered_map(&grid, |&(c, k)| {
        let closed = positivity_predicate(cfg.n, c, k)?;
        let exact = positivity_exact(cfg.n, c, k)?;
        let k_bound = pc.k_bound(c);
        let empirical_min = empirical.then(|| {
            samples
                .iter()
                .map(|&(zz, ff)| atiyah_scalar_norms(cfg.n, c, k, zz, ff))
                .fold(f64::INFINITY, f64::min)
        });
        let disagree = match mode {
            ScanMode::Both => empirical_min.map(|m| (m > 0.0) != closed),
            _ => None,
        };
        let in_band = k_bound.is_some_and(|kb| (k - kb).abs() < dk) || (c - pc.c_threshold).abs() < dc;
        Ok(RegionCell {
            c,
            k,
            closed,
            exact,
            k_bound,
            empirical_min,
            disagree,
            in_band,
        })
    })
    .into_iter()
    .collect()
}
