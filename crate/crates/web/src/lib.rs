//! Browser bindings: positivity-region grids, scalar-curvature profiles along
//! the fiber, and the constants table.

use cg_lab::closed_forms::{atiyah_scalar_norms, positivity_constants};
use cg_lab::region::{scan_region, RegionScanConfig, ScanMode};
use wasm_bindgen::prelude::*;

pub const CLOSED: u8 = 1;
pub const EXACT: u8 = 2;
pub const EMPIRICAL: u8 = 4;
pub const BAND: u8 = 8;

fn js<T>(r: Result<T, String>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Row-major `c_steps × k_steps` grid of bit flags: 1 stated region,
/// 2 leading-coefficient region, 4 positive on the sampled box, 8 boundary band.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn region_grid(
    n: usize,
    c_min: f64,
    c_max: f64,
    c_steps: usize,
    k_min: f64,
    k_max: f64,
    k_steps: usize,
    samples: usize,
    seed: u32,
) -> Result<Vec<u8>, JsError> {
    let cfg = RegionScanConfig {
        n,
        c_min,
        c_max,
        c_steps,
        k_min,
        k_max,
        k_steps,
        sample_points: samples,
        seed: seed.into(),
    };
    js(region_flags(&cfg))
}

pub fn region_flags(cfg: &RegionScanConfig) -> Result<Vec<u8>, String> {
    let cells = scan_region(cfg, ScanMode::Both).map_err(|e| e.to_string())?;
    Ok(cells
        .iter()
        .map(|cell| {
            let mut f = 0;
            if cell.closed {
                f |= CLOSED;
            }
            if cell.exact {
                f |= EXACT;
            }
            if cell.empirical_min.is_some_and(|m| m > 0.0) {
                f |= EMPIRICAL;
            }
            if cell.in_band {
                f |= BAND;
            }
            f
        })
        .collect())
}

/// `s^A` along `F = 0` at `|Z| = i·z_max/(steps−1)`, or along `Z = 0` when `along_f`.
#[wasm_bindgen]
pub fn scalar_profile(n: usize, c: f64, k: f64, z_max: f64, steps: usize, along_f: bool) -> Result<Vec<f64>, JsError> {
    js(profile(n, c, k, z_max, steps, along_f))
}

pub fn profile(n: usize, c: f64, k: f64, z_max: f64, steps: usize, along_f: bool) -> Result<Vec<f64>, String> {
    if n < 2 || !(k > 0.0) || steps < 2 || !(z_max > 0.0) || !c.is_finite() {
        return Err("need n ≥ 2, k > 0, z_max > 0, steps ≥ 2 and finite c".into());
    }
    Ok((0..steps)
        .map(|i| {
            let s = (i as f64 * z_max / (steps - 1) as f64).powi(2);
            if along_f {
                atiyah_scalar_norms(n, c, k, 0.0, s)
            } else {
                atiyah_scalar_norms(n, c, k, s, 0.0)
            }
        })
        .collect())
}

/// `K(n, c)`, or NaN outside the region where it is defined.
#[wasm_bindgen]
pub fn k_bound(n: usize, c: f64) -> Result<f64, JsError> {
    js(positivity_constants(n)
        .map(|pc| pc.k_bound(c).unwrap_or(f64::NAN))
        .map_err(|e| e.to_string()))
}

/// Rows `[n, r, a, b, d, C_n, K(n, c)]` flattened, for `n_min ≤ n ≤ n_max`.
#[wasm_bindgen]
pub fn constants_table(n_min: usize, n_max: usize, c: f64) -> Result<Vec<f64>, JsError> {
    js(constants_rows(n_min, n_max, c))
}

pub fn constants_rows(n_min: usize, n_max: usize, c: f64) -> Result<Vec<f64>, String> {
    if n_min < 2 || n_min > n_max || n_max > 200 {
        return Err("need 2 ≤ n_min ≤ n_max ≤ 200".into());
    }
    let mut out = Vec::with_capacity(7 * (n_max - n_min + 1));
    for n in n_min..=n_max {
        let pc = positivity_constants(n).map_err(|e| e.to_string())?;
        out.extend([
            n as f64,
            pc.r as f64,
            pc.a,
            pc.b,
            pc.d,
            pc.c_threshold,
            pc.k_bound(c).unwrap_or(f64::NAN),
        ]);
    }
    Ok(out)
}
