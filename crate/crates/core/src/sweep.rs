//! Quasi-static sweep protocols: hysteresis loops over power, bias or
//! field, switching-threshold detection and refinement, and the static
//! bistability atlas.
//!
//! A sweep visits its axis values in order and fully relaxes the
//! nuclear field at each point, seeding every relaxation with the
//! previous point's converged state. That path dependence is what makes
//! the up and down branches differ inside the bistable window; the
//! atlas complements it with a path-independent map of stable-root
//! counts.

use serde::Serialize;

use crate::dynamics::relax;
use crate::error::CoreError;
use crate::model::{
    electron_zeeman, DriveConditions, ModelParams, BOHR_MAGNETON_UEV_PER_T,
};
use crate::steady::{find_fixed_points, Stability, DEFAULT_GRID_N, DEFAULT_TOL_B};

/// Jump size (T) separating a genuine switch from smooth branch drift.
/// The observed switches exceed 1 T; half of that is a clean divider.
pub const DEFAULT_JUMP_TOL: f64 = 0.5;

/// Which drive knob a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    /// Excitation power (mW).
    Power,
    /// Applied bias (V).
    Bias,
    /// External magnetic field (T).
    Field,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Power => "power",
            SweepAxis::Bias => "bias",
            SweepAxis::Field => "field",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "power" => Some(SweepAxis::Power),
            "bias" => Some(SweepAxis::Bias),
            "field" => Some(SweepAxis::Field),
            _ => None,
        }
    }

    fn apply(self, base: &DriveConditions, value: f64) -> DriveConditions {
        let mut d = *base;
        match self {
            SweepAxis::Power => d.power = value,
            SweepAxis::Bias => d.v_app = value,
            SweepAxis::Field => d.b_z = value,
        }
        d
    }
}

/// One sweep protocol: an axis, its grid, and the frozen remainder of
/// the drive.
#[derive(Debug, Clone, Copy)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    /// Number of grid points, endpoints included; at least 2.
    pub steps: usize,
    /// The two non-swept drive values plus helicity. The swept component
    /// is overwritten point by point.
    pub fixed: DriveConditions,
    /// Nuclear field seeding the first point (T).
    pub b_n_init: f64,
    /// Switch detection threshold (T).
    pub jump_tol: f64,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, start: f64, stop: f64, steps: usize, fixed: DriveConditions) -> Self {
        SweepSpec {
            axis,
            start,
            stop,
            steps,
            fixed,
            b_n_init: 0.0,
            jump_tol: DEFAULT_JUMP_TOL,
        }
    }

    fn validate(&self, params: &ModelParams) -> Result<(), CoreError> {
        if self.steps < 2 {
            return Err(CoreError::InvalidArgument(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if self.start == self.stop {
            return Err(CoreError::InvalidArgument(
                "start and stop must differ".into(),
            ));
        }
        if !(self.b_n_init.abs() <= params.b_sat) {
            return Err(CoreError::PolarizationOutOfRange {
                b_n: self.b_n_init,
                b_sat: params.b_sat,
            });
        }
        if !(self.jump_tol > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "jump_tol must be > 0, got {}",
                self.jump_tol
            )));
        }
        self.grid()
            .map(|v| self.axis.apply(&self.fixed, v).validate())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(())
    }

    fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.steps;
        let (start, stop) = (self.start, self.stop);
        (0..n).map(move |i| {
            if i == n - 1 {
                stop
            } else {
                start + (stop - start) * i as f64 / (n - 1) as f64
            }
        })
    }

    fn reversed(&self) -> SweepSpec {
        SweepSpec {
            start: self.stop,
            stop: self.start,
            ..*self
        }
    }
}

/// A detected switching event.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Threshold {
    /// Axis value of the first point on the new branch.
    pub axis_value: f64,
    /// Signed change of `B_N` across the jump (T).
    pub delta_b_n: f64,
}

/// Ordered trace of one sweep direction.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub axis_values: Vec<f64>,
    /// Converged nuclear field at each point (T).
    pub b_n: Vec<f64>,
    /// Electron Zeeman splitting at each point (ueV).
    pub e_e: Vec<f64>,
    /// Exciton Zeeman-splitting observable at each point (ueV).
    pub e_x: Vec<f64>,
    pub thresholds: Vec<Threshold>,
}

impl SweepResult {
    pub fn final_b_n(&self) -> f64 {
        *self.b_n.last().expect("sweep has at least two points")
    }
}

/// An up sweep and its seeded reverse, with the enclosed loop area.
#[derive(Debug, Clone, Serialize)]
pub struct HysteresisResult {
    /// First pass, in the order the spec gives (`start` to `stop`).
    pub up: SweepResult,
    /// Second pass over the reversed grid, seeded with the final state
    /// of the first.
    pub down: SweepResult,
    /// Trapezoid integral of the absolute branch gap (T x axis units).
    pub loop_area: f64,
}

/// Runs one quasi-static sweep.
pub fn run_sweep(params: &ModelParams, spec: &SweepSpec) -> Result<SweepResult, CoreError> {
    params.validate()?;
    spec.validate(params)?;

    let n = spec.steps;
    let mut axis_values: Vec<f64> = Vec::with_capacity(n);
    let mut b_n: Vec<f64> = Vec::with_capacity(n);
    let mut e_e: Vec<f64> = Vec::with_capacity(n);
    let mut e_x: Vec<f64> = Vec::with_capacity(n);
    let mut thresholds = Vec::new();

    let mut seed = spec.b_n_init;
    for value in spec.grid() {
        let drive = spec.axis.apply(&spec.fixed, value);
        let settled = relax(params, &drive, seed)
            .map_err(|e| e.at_sweep_point(spec.axis.name(), value))?;
        if let Some(&prev) = b_n.last() {
            let jump = settled - prev;
            if jump.abs() > spec.jump_tol {
                thresholds.push(Threshold {
                    axis_value: value,
                    delta_b_n: jump,
                });
            }
        }
        axis_values.push(value);
        b_n.push(settled);
        e_e.push(electron_zeeman(params, drive.b_z, settled));
        e_x.push(emit_observable(params, drive.b_z, settled));
        seed = settled;
    }

    Ok(SweepResult {
        axis: spec.axis,
        axis_values,
        b_n,
        e_e,
        e_x,
        thresholds,
    })
}

/// Runs the sweep in both directions and measures the hysteresis loop.
pub fn run_hysteresis(params: &ModelParams, spec: &SweepSpec) -> Result<HysteresisResult, CoreError> {
    let up = run_sweep(params, spec)?;
    let mut down_spec = spec.reversed();
    down_spec.b_n_init = up.final_b_n();
    let down = run_sweep(params, &down_spec)?;

    // Both grids hold the same points in opposite order.
    let n = up.axis_values.len();
    let mut loop_area = 0.0;
    for i in 0..n - 1 {
        let gap_a = (up.b_n[i] - down.b_n[n - 1 - i]).abs();
        let gap_b = (up.b_n[i + 1] - down.b_n[n - 2 - i]).abs();
        let dx = (up.axis_values[i + 1] - up.axis_values[i]).abs();
        loop_area += 0.5 * (gap_a + gap_b) * dx;
    }

    Ok(HysteresisResult { up, down, loop_area })
}

/// Power of the first switch in an upward power sweep at the given
/// field and bias, refined by bisection to `resolution`; `None` when no
/// switch occurs below `p_max`.
///
/// The bisection re-relaxes from the last known pre-switch state, so the
/// refinement follows the same branch the sweep was on.
pub fn threshold_power(
    params: &ModelParams,
    b_z: f64,
    v_app: f64,
    helicity: crate::model::Helicity,
    p_max: f64,
    resolution: f64,
) -> Result<Option<f64>, CoreError> {
    if !(p_max > 0.0) {
        return Err(CoreError::InvalidArgument(format!(
            "p_max must be > 0, got {p_max}"
        )));
    }
    if !(resolution > 0.0) {
        return Err(CoreError::InvalidArgument(format!(
            "resolution must be > 0, got {resolution}"
        )));
    }

    let fixed = DriveConditions {
        b_z,
        power: 0.0,
        v_app,
        helicity,
    };
    let coarse_steps = 33;
    let spec = SweepSpec::new(SweepAxis::Power, 0.0, p_max, coarse_steps, fixed);
    let swept = run_sweep(params, &spec)?;

    let Some(first) = swept.thresholds.first() else {
        return Ok(None);
    };
    let idx = swept
        .axis_values
        .iter()
        .position(|&v| v == first.axis_value)
        .expect("threshold lies on the sweep grid");

    let mut lo = swept.axis_values[idx - 1];
    let mut hi = swept.axis_values[idx];
    let mut branch_state = swept.b_n[idx - 1];
    let jump_tol = spec.jump_tol;

    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        let drive = SweepAxis::Power.apply(&fixed, mid);
        let settled =
            relax(params, &drive, branch_state).map_err(|e| e.at_sweep_point("power", mid))?;
        if (settled - branch_state).abs() > jump_tol {
            hi = mid;
        } else {
            lo = mid;
            branch_state = settled;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// One axis of the bistability atlas.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AxisSpec {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    /// Number of grid points, endpoints included; at least 2.
    pub steps: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

/// Cell value recorded when the stability of a cell cannot be labeled
/// because the drive sits numerically on a bifurcation.
pub const ATLAS_MARGINAL_SENTINEL: i32 = -1;

/// Static map of stable-root counts over a 2-D drive grid.
#[derive(Debug, Clone, Serialize)]
pub struct AtlasResult {
    pub x: AxisSpec,
    pub y: AxisSpec,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// Row-major `[y][x]` stable-root counts; marginal cells hold
    /// [`ATLAS_MARGINAL_SENTINEL`].
    pub counts: Vec<i32>,
}

impl AtlasResult {
    pub fn count_at(&self, ix: usize, iy: usize) -> i32 {
        self.counts[iy * self.x_values.len() + ix]
    }

    /// Bounding box `[x_min, x_max, y_min, y_max]` of cells with two or
    /// more stable roots, if any.
    pub fn bistable_bounding_box(&self) -> Option<[f64; 4]> {
        let mut bbox: Option<[f64; 4]> = None;
        for (iy, &yv) in self.y_values.iter().enumerate() {
            for (ix, &xv) in self.x_values.iter().enumerate() {
                if self.count_at(ix, iy) >= 2 {
                    let b = bbox.get_or_insert([xv, xv, yv, yv]);
                    b[0] = b[0].min(xv);
                    b[1] = b[1].max(xv);
                    b[2] = b[2].min(yv);
                    b[3] = b[3].max(yv);
                }
            }
        }
        bbox
    }
}

/// Evaluates the stable-root count on every cell of the grid. Cells
/// where classification hits a marginal fixed point are flagged with the
/// sentinel, not dropped.
pub fn bistability_atlas(
    params: &ModelParams,
    fixed: &DriveConditions,
    x: AxisSpec,
    y: AxisSpec,
) -> Result<AtlasResult, CoreError> {
    params.validate()?;
    if x.steps < 2 || y.steps < 2 {
        return Err(CoreError::InvalidArgument(
            "atlas grid needs at least 2 points per axis".into(),
        ));
    }
    if x.axis == y.axis {
        return Err(CoreError::InvalidArgument(
            "atlas axes must differ".into(),
        ));
    }
    let x_values = x.values();
    let y_values = y.values();
    let mut counts = Vec::with_capacity(x_values.len() * y_values.len());
    for &yv in &y_values {
        for &xv in &x_values {
            let drive = x.axis.apply(&y.axis.apply(fixed, yv), xv);
            drive.validate()?;
            let count = match find_fixed_points(params, &drive, DEFAULT_GRID_N, DEFAULT_TOL_B) {
                Ok(points) => points
                    .iter()
                    .filter(|p| p.stability == Stability::Stable)
                    .count() as i32,
                Err(CoreError::MarginalFixedPoint { .. }) => ATLAS_MARGINAL_SENTINEL,
                Err(e) => return Err(e),
            };
            counts.push(count);
        }
    }
    Ok(AtlasResult {
        x,
        y,
        x_values,
        y_values,
        counts,
    })
}

/// Exciton Zeeman-splitting observable
/// `E_X = g_exciton mu_B B_z - g_e mu_B |B_N|` (ueV), the quantity the
/// sweeps are usually plotted in. Uses `|B_N|` to match how splittings
/// are read off spectra.
pub fn emit_observable(params: &ModelParams, b_z: f64, b_n: f64) -> f64 {
    (params.g_exciton * b_z - params.g_e * b_n.abs()) * BOHR_MAGNETON_UEV_PER_T
}
