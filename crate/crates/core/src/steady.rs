//! Fixed points of the polarization rate equation at a fixed drive
//! point, with stability classification.
//!
//! `dB_N/dt` is continuous on `[-B_sat, +B_sat]` and points inward at
//! both ends, so at least one root always exists; generic parameters
//! give one or three. Roots are located by a uniform sign scan followed
//! by bisection — the rate function is cheap, and bracketing cannot
//! silently lose a root between grid nodes at the documented minimum
//! grid density.

use serde::Serialize;

use crate::error::CoreError;
use crate::model::{DriveConditions, DriveContext, ModelParams};

/// Default number of scan intervals; the documented minimum for which
/// grid-density invariance has been verified is 10^4.
pub const DEFAULT_GRID_N: usize = 10_000;
/// Smallest accepted scan density.
pub const MIN_GRID_N: usize = 1_000;
/// Default bisection tolerance on the root position (T).
pub const DEFAULT_TOL_B: f64 = 1e-6;
/// Default finite-difference step for slope estimation (T).
pub const DEFAULT_STEP_H: f64 = 1e-5;

/// Relative slope threshold below which a fixed point is reported as
/// marginal (sitting on a bifurcation) instead of being labeled.
const MARGINAL_SLOPE_FRACTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
}

/// A root of `dB_N/dt` with its local stability.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FixedPoint {
    /// Root position (T).
    pub b_n: f64,
    pub stability: Stability,
    /// `d(dB_N/dt)/dB_N` at the root (1/s); negative for stable points.
    pub slope: f64,
}

/// Locates every fixed point on `[-B_sat, +B_sat]`, sorted ascending in
/// `B_N`. Scans `grid_n + 1` uniform nodes, brackets each sign change,
/// refines by bisection to better than `tol_b`, merges roots closer
/// than `2 tol_b`, and classifies each survivor.
pub fn find_fixed_points(
    params: &ModelParams,
    drive: &DriveConditions,
    grid_n: usize,
    tol_b: f64,
) -> Result<Vec<FixedPoint>, CoreError> {
    if grid_n < MIN_GRID_N {
        return Err(CoreError::InvalidArgument(format!(
            "grid_n must be >= {MIN_GRID_N}, got {grid_n}"
        )));
    }
    if !(tol_b > 0.0) {
        return Err(CoreError::InvalidArgument(format!(
            "tol_b must be > 0, got {tol_b}"
        )));
    }
    let ctx = DriveContext::new(params, drive)?;
    let roots = scan_roots(&ctx, grid_n, tol_b);
    roots
        .into_iter()
        .map(|r| classify(params, drive, r, DEFAULT_STEP_H))
        .collect()
}

/// Estimates the slope of `dB_N/dt` at `root` by central finite
/// difference with step `h` (one-sided at the domain boundary) and
/// labels the point stable or unstable by its sign.
pub fn classify(
    params: &ModelParams,
    drive: &DriveConditions,
    root: f64,
    h: f64,
) -> Result<FixedPoint, CoreError> {
    if !(h > 0.0) {
        return Err(CoreError::InvalidArgument(format!("h must be > 0, got {h}")));
    }
    let ctx = DriveContext::new(params, drive)?;
    let b_sat = ctx.b_sat;
    if root.abs() > b_sat {
        return Err(CoreError::PolarizationOutOfRange { b_n: root, b_sat });
    }
    let slope = if root + h <= b_sat && root - h >= -b_sat {
        (ctx.dbn_dt(root + h) - ctx.dbn_dt(root - h)) / (2.0 * h)
    } else if root + h > b_sat {
        (ctx.dbn_dt(root) - ctx.dbn_dt(root - h)) / h
    } else {
        (ctx.dbn_dt(root + h) - ctx.dbn_dt(root)) / h
    };
    let rate_scale = ctx.gamma_d + ctx.peak_flip_flop_rate();
    if slope.abs() < MARGINAL_SLOPE_FRACTION * rate_scale {
        return Err(CoreError::MarginalFixedPoint { b_n: root, slope });
    }
    let stability = if slope < 0.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    };
    Ok(FixedPoint {
        b_n: root,
        stability,
        slope,
    })
}

/// True when at least two stable fixed points coexist.
pub fn is_bistable(params: &ModelParams, drive: &DriveConditions) -> Result<bool, CoreError> {
    let points = find_fixed_points(params, drive, DEFAULT_GRID_N, DEFAULT_TOL_B)?;
    Ok(points
        .iter()
        .filter(|p| p.stability == Stability::Stable)
        .count()
        >= 2)
}

fn scan_roots(ctx: &DriveContext, grid_n: usize, tol_b: f64) -> Vec<f64> {
    let lo = -ctx.b_sat;
    let step = 2.0 * ctx.b_sat / grid_n as f64;
    let mut roots = Vec::new();

    let mut x_prev = lo;
    let mut f_prev = ctx.dbn_dt(x_prev);
    if f_prev == 0.0 {
        roots.push(x_prev);
    }
    for i in 1..=grid_n {
        let x = if i == grid_n { ctx.b_sat } else { lo + i as f64 * step };
        let f = ctx.dbn_dt(x);
        if f == 0.0 {
            roots.push(x);
        } else if f_prev != 0.0 && f.signum() != f_prev.signum() {
            roots.push(bisect(ctx, x_prev, x, f_prev, tol_b));
        }
        x_prev = x;
        f_prev = f;
    }

    merge_close(roots, 2.0 * tol_b)
}

fn bisect(ctx: &DriveContext, mut lo: f64, mut hi: f64, f_lo: f64, tol_b: f64) -> f64 {
    let mut sign_lo = f_lo.signum();
    while hi - lo > tol_b {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval exhausted at float resolution
        }
        let f_mid = ctx.dbn_dt(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == sign_lo {
            lo = mid;
            sign_lo = f_mid.signum();
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Collapses clusters of roots closer than `gap` into their midpoints.
fn merge_close(mut roots: Vec<f64>, gap: f64) -> Vec<f64> {
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut merged: Vec<f64> = Vec::with_capacity(roots.len());
    let mut cluster: Vec<f64> = Vec::new();
    for r in roots {
        match cluster.last() {
            Some(&last) if r - last < gap => cluster.push(r),
            _ => {
                if !cluster.is_empty() {
                    merged.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
                }
                cluster = vec![r];
            }
        }
    }
    if !cluster.is_empty() {
        merged.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
    }
    merged
}
