//! C ABI for the nuclear spin polarization simulator.
//!
//! The surface follows the usual opaque-handle pattern: a `DnpParams`
//! handle owns a validated parameter set plus default drive conditions,
//! every call reports a `DnpStatus`, and results come back either in
//! caller-provided structs or as a second opaque handle with accessor
//! functions. The matching header is generated into `include/dnp.h` at
//! build time.
//!
//! Thread safety: handles are plain immutable data after construction
//! except through `dnp_params_set`, so concurrent reads are fine;
//! callers must not mutate a handle while other threads use it.

use std::ffi::{c_char, c_int, CStr};
use std::path::Path;

use dnp_core::config::{apply_override, parse_config, Config};
use dnp_core::error::CoreError;
use dnp_core::model::{polarization_rate, DriveConditions, Helicity};
use dnp_core::steady::{find_fixed_points, Stability, DEFAULT_GRID_N, DEFAULT_TOL_B};
use dnp_core::sweep::{run_hysteresis, run_sweep, threshold_power, SweepAxis, SweepSpec};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnpStatus {
    DnpOk = 0,
    /// A required pointer argument was null.
    DnpNullPointer = 1,
    /// An argument violates a documented precondition.
    DnpInvalidArgument = 2,
    /// No escape channel: radiative plus tunneling rate is zero.
    DnpNoEscapeChannel = 3,
    /// A nuclear field outside [-B_sat, +B_sat].
    DnpOutOfRange = 4,
    /// A fixed point sits numerically on a bifurcation.
    DnpMarginalFixedPoint = 5,
    /// Relaxation hit its time budget without converging.
    DnpNotConverged = 6,
    /// The integrator state stopped being finite.
    DnpDiverged = 7,
    /// Config file missing, unreadable, or invalid.
    DnpConfigError = 8,
    /// A string argument was not valid UTF-8.
    DnpInvalidUtf8 = 9,
    /// The provided output buffer is too small.
    DnpBufferTooSmall = 10,
}

fn status_of(err: &CoreError) -> DnpStatus {
    match err {
        CoreError::NoEscapeChannel => DnpStatus::DnpNoEscapeChannel,
        CoreError::PolarizationOutOfRange { .. } => DnpStatus::DnpOutOfRange,
        CoreError::InvalidArgument(_) => DnpStatus::DnpInvalidArgument,
        CoreError::MarginalFixedPoint { .. } => DnpStatus::DnpMarginalFixedPoint,
        CoreError::RelaxationNotConverged { .. } => DnpStatus::DnpNotConverged,
        CoreError::IntegrationDiverged { .. } => DnpStatus::DnpDiverged,
        CoreError::SweepFailed { source, .. } => status_of(source),
    }
}

/// Opaque handle: model parameters plus default drive conditions.
pub struct DnpParams {
    config: Config,
}

/// Opaque handle: the recorded trace of one sweep run.
pub struct DnpSweep {
    points: Vec<DnpSweepPoint>,
    thresholds: Vec<DnpThreshold>,
    loop_area: f64,
}

/// Every intermediate rate entering dB_N/dt at one state.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnpRates {
    /// Electron Zeeman splitting (ueV, signed).
    pub delta_e_e: f64,
    /// Effective spin-polarized pumping rate (1/s).
    pub w_x_eff: f64,
    /// Electron-nuclear flip-flop rate (1/s).
    pub w_s: f64,
    /// Tunneling escape rate (1/s).
    pub gamma_t: f64,
    /// Phonon-assisted co-tunneling rate (1/s).
    pub gamma_cot: f64,
    /// Electron spin-retention factor in [0, 1].
    pub rho_e: f64,
    /// Net Overhauser rate of change (T/s).
    pub dbn_dt: f64,
}

/// A fixed point of the polarization rate equation.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnpFixedPoint {
    /// Root position (T).
    pub b_n: f64,
    /// Slope of dB_N/dt at the root (1/s); negative for stable points.
    pub slope: f64,
    /// 1 for stable, 0 for unstable.
    pub stable: c_int,
}

/// One recorded sweep sample.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnpSweepPoint {
    pub axis_value: f64,
    /// Converged nuclear field (T).
    pub b_n: f64,
    /// Electron Zeeman splitting (ueV).
    pub e_e: f64,
    /// Exciton splitting observable (ueV).
    pub e_x: f64,
    /// 0 on the first pass, 1 on the seeded return pass.
    pub direction: c_int,
    /// 1 when a switch was detected at this sample.
    pub threshold_flag: c_int,
}

/// A detected switching event.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnpThreshold {
    /// 0 on the first pass, 1 on the seeded return pass.
    pub direction: c_int,
    /// Axis value of the first point on the new branch.
    pub axis_value: f64,
    /// Signed nuclear-field jump (T).
    pub delta_b_n: f64,
}

/// Sweep axis selector for `dnp_sweep_run`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnpAxis {
    DnpAxisPower = 0,
    DnpAxisBias = 1,
    DnpAxisField = 2,
}

/// Direction selector for `dnp_sweep_run`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnpDirection {
    /// First pass from `from` to `to`, then the seeded return pass.
    DnpDirectionBoth = 0,
    DnpDirectionUp = 1,
    DnpDirectionDown = 2,
}

unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, DnpStatus> {
    if ptr.is_null() {
        return Err(DnpStatus::DnpNullPointer);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| DnpStatus::DnpInvalidUtf8)
}

/// Short static description of a status code.
#[no_mangle]
pub extern "C" fn dnp_status_message(status: DnpStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        DnpStatus::DnpOk => b"ok\0",
        DnpStatus::DnpNullPointer => b"null pointer argument\0",
        DnpStatus::DnpInvalidArgument => b"invalid argument\0",
        DnpStatus::DnpNoEscapeChannel => b"no escape channel\0",
        DnpStatus::DnpOutOfRange => b"polarization out of range\0",
        DnpStatus::DnpMarginalFixedPoint => b"marginal fixed point\0",
        DnpStatus::DnpNotConverged => b"relaxation did not converge\0",
        DnpStatus::DnpDiverged => b"integration diverged\0",
        DnpStatus::DnpConfigError => b"config error\0",
        DnpStatus::DnpInvalidUtf8 => b"invalid utf-8 in string argument\0",
        DnpStatus::DnpBufferTooSmall => b"output buffer too small\0",
    };
    text.as_ptr().cast()
}

/// Creates a handle holding the calibrated reference configuration.
/// Never fails; free with `dnp_params_free`.
#[no_mangle]
pub extern "C" fn dnp_params_new_reference() -> *mut DnpParams {
    Box::into_raw(Box::new(DnpParams {
        config: Config::reference(),
    }))
}

/// Loads a config file (missing keys keep their reference values) into
/// a fresh handle written to `out`.
///
/// # Safety
/// `path` must point to a NUL-terminated string and `out` to a writable
/// pointer slot. On anything but `DnpOk`, `*out` is left untouched.
#[no_mangle]
pub unsafe extern "C" fn dnp_params_load(
    path: *const c_char,
    out: *mut *mut DnpParams,
) -> DnpStatus {
    if out.is_null() {
        return DnpStatus::DnpNullPointer;
    }
    let path = match str_arg(path) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match parse_config(Path::new(path)) {
        Ok(config) => {
            *out = Box::into_raw(Box::new(DnpParams { config }));
            DnpStatus::DnpOk
        }
        Err(_) => DnpStatus::DnpConfigError,
    }
}

/// Applies one `key = value` override, e.g. `dnp_params_set(p, "gamma",
/// "12.5")`. Keys and validation match the config file format; the
/// handle is unchanged when the override is rejected.
///
/// # Safety
/// `params` must be a live handle from this library; `key` and `value`
/// must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn dnp_params_set(
    params: *mut DnpParams,
    key: *const c_char,
    value: *const c_char,
) -> DnpStatus {
    let Some(handle) = params.as_mut() else {
        return DnpStatus::DnpNullPointer;
    };
    let (key, value) = match (str_arg(key), str_arg(value)) {
        (Ok(k), Ok(v)) => (k, v),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    match apply_override(&mut handle.config, key, value) {
        Ok(()) => DnpStatus::DnpOk,
        Err(_) => DnpStatus::DnpConfigError,
    }
}

/// Releases a handle created by this library. A null pointer is a no-op.
///
/// # Safety
/// `params` must have come from `dnp_params_new_reference` or
/// `dnp_params_load` and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dnp_params_free(params: *mut DnpParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

fn drive_for(b_z: f64, power: f64, v_app: f64, helicity: c_int) -> Result<DriveConditions, DnpStatus> {
    let helicity = Helicity::from_sign(helicity).ok_or(DnpStatus::DnpInvalidArgument)?;
    let drive = DriveConditions {
        b_z,
        power,
        v_app,
        helicity,
    };
    drive.validate().map_err(|_| DnpStatus::DnpInvalidArgument)?;
    Ok(drive)
}

/// Evaluates every intermediate rate at one state of drive and nuclear
/// field.
///
/// # Safety
/// `params` must be a live handle; `out` must point to writable
/// `DnpRates` storage.
#[no_mangle]
pub unsafe extern "C" fn dnp_rates(
    params: *const DnpParams,
    b_z: f64,
    power: f64,
    v_app: f64,
    helicity: c_int,
    b_n: f64,
    out: *mut DnpRates,
) -> DnpStatus {
    let Some(handle) = params.as_ref() else {
        return DnpStatus::DnpNullPointer;
    };
    if out.is_null() {
        return DnpStatus::DnpNullPointer;
    }
    let drive = match drive_for(b_z, power, v_app, helicity) {
        Ok(d) => d,
        Err(status) => return status,
    };
    match polarization_rate(&handle.config.params, &drive, b_n) {
        Ok(r) => {
            *out = DnpRates {
                delta_e_e: r.delta_e_e,
                w_x_eff: r.w_x_eff,
                w_s: r.w_s,
                gamma_t: r.gamma_t,
                gamma_cot: r.gamma_cot,
                rho_e: r.rho_e,
                dbn_dt: r.dbn_dt,
            };
            DnpStatus::DnpOk
        }
        Err(e) => status_of(&e),
    }
}

/// Locates every fixed point at the given drive, ascending in B_N.
/// Writes up to `capacity` entries and stores the total count in
/// `count`; returns `DnpBufferTooSmall` when the buffer cannot hold all
/// of them (the count is still stored).
///
/// # Safety
/// `params` must be a live handle; `out` must point to `capacity`
/// writable `DnpFixedPoint` slots; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnp_fixed_points(
    params: *const DnpParams,
    b_z: f64,
    power: f64,
    v_app: f64,
    helicity: c_int,
    out: *mut DnpFixedPoint,
    capacity: usize,
    count: *mut usize,
) -> DnpStatus {
    let Some(handle) = params.as_ref() else {
        return DnpStatus::DnpNullPointer;
    };
    if count.is_null() || (capacity > 0 && out.is_null()) {
        return DnpStatus::DnpNullPointer;
    }
    let drive = match drive_for(b_z, power, v_app, helicity) {
        Ok(d) => d,
        Err(status) => return status,
    };
    match find_fixed_points(&handle.config.params, &drive, DEFAULT_GRID_N, DEFAULT_TOL_B) {
        Ok(points) => {
            *count = points.len();
            for (i, fp) in points.iter().take(capacity).enumerate() {
                *out.add(i) = DnpFixedPoint {
                    b_n: fp.b_n,
                    slope: fp.slope,
                    stable: c_int::from(fp.stability == Stability::Stable),
                };
            }
            if points.len() > capacity {
                DnpStatus::DnpBufferTooSmall
            } else {
                DnpStatus::DnpOk
            }
        }
        Err(e) => status_of(&e),
    }
}

/// Relaxes the nuclear field from `b_n0` to a stable fixed point and
/// writes the settled value to `out`.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnp_relax(
    params: *const DnpParams,
    b_z: f64,
    power: f64,
    v_app: f64,
    helicity: c_int,
    b_n0: f64,
    out: *mut f64,
) -> DnpStatus {
    let Some(handle) = params.as_ref() else {
        return DnpStatus::DnpNullPointer;
    };
    if out.is_null() {
        return DnpStatus::DnpNullPointer;
    }
    let drive = match drive_for(b_z, power, v_app, helicity) {
        Ok(d) => d,
        Err(status) => return status,
    };
    match dnp_core::dynamics::relax(&handle.config.params, &drive, b_n0) {
        Ok(b) => {
            *out = b;
            DnpStatus::DnpOk
        }
        Err(e) => status_of(&e),
    }
}

/// Finds the upward switching threshold power at the given field and
/// bias. When a switch exists below `p_max`, writes it to `out` and
/// sets `*found` to true; otherwise clears `*found` and writes NaN.
///
/// # Safety
/// `params` must be a live handle; `found` and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnp_threshold_power(
    params: *const DnpParams,
    b_z: f64,
    v_app: f64,
    helicity: c_int,
    p_max: f64,
    resolution: f64,
    found: *mut bool,
    out: *mut f64,
) -> DnpStatus {
    let Some(handle) = params.as_ref() else {
        return DnpStatus::DnpNullPointer;
    };
    if found.is_null() || out.is_null() {
        return DnpStatus::DnpNullPointer;
    }
    let Some(helicity) = Helicity::from_sign(helicity) else {
        return DnpStatus::DnpInvalidArgument;
    };
    match threshold_power(&handle.config.params, b_z, v_app, helicity, p_max, resolution) {
        Ok(Some(p)) => {
            *found = true;
            *out = p;
            DnpStatus::DnpOk
        }
        Ok(None) => {
            *found = false;
            *out = f64::NAN;
            DnpStatus::DnpOk
        }
        Err(e) => status_of(&e),
    }
}

/// Runs a quasi-static sweep over the chosen axis. The non-swept drive
/// values come from the handle's defaults; the first point is seeded
/// with an unpolarized dot. On success writes a fresh `DnpSweep` handle
/// to `out`; free it with `dnp_sweep_free`.
///
/// # Safety
/// `params` must be a live handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn dnp_sweep_run(
    params: *const DnpParams,
    axis: DnpAxis,
    from: f64,
    to: f64,
    steps: usize,
    direction: DnpDirection,
    out: *mut *mut DnpSweep,
) -> DnpStatus {
    let Some(handle) = params.as_ref() else {
        return DnpStatus::DnpNullPointer;
    };
    if out.is_null() {
        return DnpStatus::DnpNullPointer;
    }
    let axis = match axis {
        DnpAxis::DnpAxisPower => SweepAxis::Power,
        DnpAxis::DnpAxisBias => SweepAxis::Bias,
        DnpAxis::DnpAxisField => SweepAxis::Field,
    };
    let p = &handle.config.params;

    let collect = |r: &dnp_core::sweep::SweepResult, dir: c_int, sink: &mut DnpSweep| {
        for i in 0..r.axis_values.len() {
            let flagged = r.thresholds.iter().any(|t| t.axis_value == r.axis_values[i]);
            sink.points.push(DnpSweepPoint {
                axis_value: r.axis_values[i],
                b_n: r.b_n[i],
                e_e: r.e_e[i],
                e_x: r.e_x[i],
                direction: dir,
                threshold_flag: c_int::from(flagged),
            });
        }
        for t in &r.thresholds {
            sink.thresholds.push(DnpThreshold {
                direction: dir,
                axis_value: t.axis_value,
                delta_b_n: t.delta_b_n,
            });
        }
    };

    let mut sweep = DnpSweep {
        points: Vec::new(),
        thresholds: Vec::new(),
        loop_area: f64::NAN,
    };
    let outcome = match direction {
        DnpDirection::DnpDirectionBoth => {
            let spec = SweepSpec::new(axis, from, to, steps, handle.config.drive);
            run_hysteresis(p, &spec).map(|h| {
                collect(&h.up, 0, &mut sweep);
                collect(&h.down, 1, &mut sweep);
                sweep.loop_area = h.loop_area;
            })
        }
        DnpDirection::DnpDirectionUp => {
            let spec = SweepSpec::new(axis, from, to, steps, handle.config.drive);
            run_sweep(p, &spec).map(|r| collect(&r, 0, &mut sweep))
        }
        DnpDirection::DnpDirectionDown => {
            let spec = SweepSpec::new(axis, to, from, steps, handle.config.drive);
            run_sweep(p, &spec).map(|r| collect(&r, 1, &mut sweep))
        }
    };
    match outcome {
        Ok(()) => {
            *out = Box::into_raw(Box::new(sweep));
            DnpStatus::DnpOk
        }
        Err(e) => status_of(&e),
    }
}

/// Number of recorded samples (both passes together).
///
/// # Safety
/// `sweep` must be a live handle from `dnp_sweep_run` or null.
#[no_mangle]
pub unsafe extern "C" fn dnp_sweep_len(sweep: *const DnpSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.points.len())
}

/// Copies sample `index` into `out`.
///
/// # Safety
/// `sweep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnp_sweep_point(
    sweep: *const DnpSweep,
    index: usize,
    out: *mut DnpSweepPoint,
) -> DnpStatus {
    let Some(s) = sweep.as_ref() else {
        return DnpStatus::DnpNullPointer;
    };
    if out.is_null() {
        return DnpStatus::DnpNullPointer;
    }
    match s.points.get(index) {
        Some(p) => {
            *out = *p;
            DnpStatus::DnpOk
        }
        None => DnpStatus::DnpInvalidArgument,
    }
}

/// Number of detected switching events.
///
/// # Safety
/// `sweep` must be a live handle from `dnp_sweep_run` or null.
#[no_mangle]
pub unsafe extern "C" fn dnp_sweep_threshold_count(sweep: *const DnpSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.thresholds.len())
}

/// Copies switching event `index` into `out`.
///
/// # Safety
/// `sweep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnp_sweep_threshold(
    sweep: *const DnpSweep,
    index: usize,
    out: *mut DnpThreshold,
) -> DnpStatus {
    let Some(s) = sweep.as_ref() else {
        return DnpStatus::DnpNullPointer;
    };
    if out.is_null() {
        return DnpStatus::DnpNullPointer;
    }
    match s.thresholds.get(index) {
        Some(t) => {
            *out = *t;
            DnpStatus::DnpOk
        }
        None => DnpStatus::DnpInvalidArgument,
    }
}

/// Hysteresis loop area (T x axis units) of a both-directions sweep;
/// NaN for single-direction sweeps or a null handle.
///
/// # Safety
/// `sweep` must be a live handle from `dnp_sweep_run` or null.
#[no_mangle]
pub unsafe extern "C" fn dnp_sweep_loop_area(sweep: *const DnpSweep) -> f64 {
    sweep.as_ref().map_or(f64::NAN, |s| s.loop_area)
}

/// Releases a sweep handle. A null pointer is a no-op.
///
/// # Safety
/// `sweep` must have come from `dnp_sweep_run` and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn dnp_sweep_free(sweep: *mut DnpSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}
