//! Simulator of optically pumped nuclear spin polarization in a single
//! quantum dot embedded in a biased diode.
//!
//! The crate models the feedback between the Overhauser field built up
//! by circularly polarized pumping and the electron Zeeman splitting
//! that gates the electron-nuclear flip-flop rate. That feedback makes
//! the nuclear polarization bistable in a window of power, bias and
//! field, producing abrupt threshold-like switches and hysteresis under
//! quasi-static scans — all of which the crate reproduces with
//! fixed-point, time-integration and sweep tooling plus a CLI.
//!
//! Layering, bottom up:
//! * [`model`] — stateless evaluation of every physical rate.
//! * [`steady`] — fixed points of `dB_N/dt` and their stability.
//! * [`dynamics`] — RK4 relaxation onto stable fixed points.
//! * [`sweep`] — quasi-static hysteresis protocols, threshold powers,
//!   and the 2-D bistability atlas.
//! * [`config`] / [`report`] — the `key = value` config format and the
//!   JSON run reports used by the `dnp` binary.

// Validation guards are written as negated comparisons (`!(x > 0.0)`)
// so that NaN fails them; the positive forms clippy suggests would let
// NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod report;
pub mod steady;
pub mod sweep;

pub use config::{apply_override, parse_config, parse_config_str, Config};
pub use error::{ConfigError, CoreError};
pub use model::{
    cotunneling_rate, effective_pump_rate, electron_zeeman, flip_flop_rate,
    ground_state_detuning, overhauser_target, polarization_rate, spin_retention, tunneling_rate,
    DeviceGeometry, DriveConditions, Helicity, ModelParams, RateBreakdown,
    BOHR_MAGNETON_UEV_PER_T,
};
pub use steady::{classify, find_fixed_points, is_bistable, FixedPoint, Stability};
pub use sweep::{
    bistability_atlas, emit_observable, run_hysteresis, run_sweep, threshold_power, AtlasResult,
    AxisSpec, HysteresisResult, SweepAxis, SweepResult, SweepSpec, Threshold,
};
