//! Time integration of the Overhauser field toward a stable fixed
//! point.
//!
//! The system is one-dimensional and smooth, so a fixed-step classical
//! fourth-order Runge-Kutta integrator is used: simple, deterministic,
//! and accurate far beyond the needs of the quasi-static sweep engine
//! built on top of it.

use crate::error::CoreError;
use crate::model::{DriveConditions, DriveContext, ModelParams};

/// Convergence threshold scale: `|dB_N/dt| < CONV_EPS_SCALE * Gamma_d * B_sat`
/// held for [`CONV_COUNT`] consecutive steps counts as converged.
pub const CONV_EPS_SCALE: f64 = 1e-9;
pub const CONV_COUNT: usize = 10;

/// Relaxation time budget and step size used by [`relax`]:
/// `t_max = RELAX_T_MAX_FACTOR / Gamma_d`,
/// `dt = RELAX_DT_FACTOR / max(peak flip-flop rate, Gamma_d)`.
///
/// The budget must cover far more than a plain relaxation time:
/// quasi-static scans step across saddle-node folds, and just past a
/// fold the state crawls through the ghost of the vanished fixed point
/// with critical slowing down. Passage takes hundreds of depolarization
/// times when a grid point lands within a percent of the fold.
pub const RELAX_T_MAX_FACTOR: f64 = 2000.0;
pub const RELAX_DT_FACTOR: f64 = 0.1;

/// A recorded integration path.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Sample times (s), strictly increasing, starting at 0.
    pub times: Vec<f64>,
    /// `B_N` at each sample (T), clamped to `[-B_sat, +B_sat]`.
    pub values: Vec<f64>,
    /// Whether the convergence criterion was met before `t_max`.
    pub converged: bool,
    /// Last state reached.
    pub final_b_n: f64,
}

/// Integrates `dB_N/dt` from `b_n0` with fixed step `dt` until the state
/// is stationary (see [`CONV_EPS_SCALE`]) or `t_max` is reached. The
/// state is clamped to `[-B_sat, +B_sat]` after every step; the
/// continuous model cannot leave that interval, so clamping only guards
/// against overshoot at coarse steps.
pub fn integrate(
    params: &ModelParams,
    drive: &DriveConditions,
    b_n0: f64,
    t_max: f64,
    dt: f64,
) -> Result<Trajectory, CoreError> {
    if !(b_n0.abs() <= params.b_sat) {
        return Err(CoreError::PolarizationOutOfRange {
            b_n: b_n0,
            b_sat: params.b_sat,
        });
    }
    if !(dt > 0.0) {
        return Err(CoreError::InvalidArgument(format!("dt must be > 0, got {dt}")));
    }
    if !(t_max > dt) {
        return Err(CoreError::InvalidArgument(format!(
            "t_max must exceed dt, got t_max = {t_max}, dt = {dt}"
        )));
    }
    let ctx = DriveContext::new(params, drive)?;
    let conv_eps = CONV_EPS_SCALE * ctx.gamma_d * ctx.b_sat;

    let n_steps = (t_max / dt).ceil() as usize;
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut b = b_n0;
    let mut f_at_b = ctx.dbn_dt(b);
    times.push(0.0);
    values.push(b);

    let mut quiet_steps = 0usize;
    let mut converged = false;
    for step in 1..=n_steps {
        let k1 = f_at_b;
        let k2 = ctx.dbn_dt(b + 0.5 * dt * k1);
        let k3 = ctx.dbn_dt(b + 0.5 * dt * k2);
        let k4 = ctx.dbn_dt(b + dt * k3);
        let next = b + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !next.is_finite() {
            return Err(CoreError::IntegrationDiverged {
                t: step as f64 * dt,
                last_b_n: b,
            });
        }
        b = next.clamp(-ctx.b_sat, ctx.b_sat);
        f_at_b = ctx.dbn_dt(b);
        times.push(step as f64 * dt);
        values.push(b);

        if f_at_b.abs() < conv_eps {
            quiet_steps += 1;
            if quiet_steps >= CONV_COUNT {
                converged = true;
                break;
            }
        } else {
            quiet_steps = 0;
        }
    }

    Ok(Trajectory {
        times,
        values,
        converged,
        final_b_n: b,
    })
}

/// Runs [`integrate`] with an automatically chosen step and time budget
/// and returns the settled field. The step resolves the fastest rate in
/// the problem; the budget is 50 nuclear depolarization times.
pub fn relax(params: &ModelParams, drive: &DriveConditions, b_n0: f64) -> Result<f64, CoreError> {
    let ctx = DriveContext::new(params, drive)?;
    let max_rate = ctx.peak_flip_flop_rate().max(ctx.gamma_d);
    let dt = RELAX_DT_FACTOR / max_rate;
    let t_max = RELAX_T_MAX_FACTOR / ctx.gamma_d;
    let trajectory = integrate(params, drive, b_n0, t_max, dt)?;
    if !trajectory.converged {
        return Err(CoreError::RelaxationNotConverged {
            t_max,
            trajectory: Box::new(trajectory),
        });
    }
    Ok(trajectory.final_b_n)
}
