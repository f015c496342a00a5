//! Physical model of optically pumped nuclear spin polarization in a
//! single InGaAs-style quantum dot embedded in a biased n-type diode.
//!
//! Everything here is a pure function of its arguments. Units are fixed
//! globally: magnetic fields in tesla, energies in microelectronvolt
//! (the ground-state bias detuning alone in millielectronvolt), optical
//! power in milliwatt, bias in volt, rates in per second, lengths in
//! nanometer.
//!
//! The central object is the net rate of change of the Overhauser field
//! `B_N` (the effective magnetic field the polarized nuclei exert on the
//! electron spin):
//!
//! ```text
//! dB_N/dt = w_s(B_N) * (B_target - B_N) - Gamma_d * B_N
//! ```
//!
//! where `w_s` is the electron-nuclear flip-flop rate, resonant when the
//! electron Zeeman splitting `E_e = g_e mu_B (B_z + B_N)` vanishes, and
//! `B_target = +/-B_sat` is the fully pumped field selected by the pump
//! helicity. The feedback of `B_N` on `E_e` makes the equation bistable
//! in the right drive window, which is what produces the nuclear spin
//! switch and its hysteresis.

use serde::{Serialize, Serializer};

use crate::error::CoreError;

/// Bohr magneton in microelectronvolt per tesla.
pub const BOHR_MAGNETON_UEV_PER_T: f64 = 57.883;

/// Circular polarization of the optical pump.
///
/// Sign convention: under sigma-minus pumping the steady-state Overhauser
/// field is negative (anti-parallel to `B_z`), so the electron Zeeman
/// splitting `g_e mu_B (B_z + B_N)` can cross zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Helicity {
    SigmaPlus,
    SigmaMinus,
}

impl Helicity {
    /// +1.0 for sigma-plus, -1.0 for sigma-minus.
    pub fn sign(self) -> f64 {
        match self {
            Helicity::SigmaPlus => 1.0,
            Helicity::SigmaMinus => -1.0,
        }
    }

    /// Parses the `+1` / `-1` convention used by config files and the CLI.
    pub fn from_sign(value: i32) -> Option<Self> {
        match value {
            1 => Some(Helicity::SigmaPlus),
            -1 => Some(Helicity::SigmaMinus),
            _ => None,
        }
    }
}

impl Serialize for Helicity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i8(match self {
            Helicity::SigmaPlus => 1,
            Helicity::SigmaMinus => -1,
        })
    }
}

/// Layer thicknesses and level alignment of the diode the dot sits in.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeviceGeometry {
    /// Tunnel-barrier thickness between dot and back contact (nm).
    pub d_bar: f64,
    /// Total intrinsic-region thickness (nm).
    pub d_tot: f64,
    /// Optical-phonon energy of the host lattice (meV).
    pub e_lo: f64,
    /// Bias at which the dot ground state aligns with the Fermi edge (V).
    pub v_charging: f64,
}

impl DeviceGeometry {
    /// Device of the measured sample: 25 nm barrier, 230 nm intrinsic
    /// region, charging alignment at 0 V. The phonon energy is set so the
    /// co-tunneling resonance sits at -0.3 V for this geometry.
    pub fn reference() -> Self {
        DeviceGeometry {
            d_bar: 25.0,
            d_tot: 230.0,
            e_lo: 32.6,
            v_charging: 0.0,
        }
    }

    /// First violated single-field invariant, if any.
    pub(crate) fn field_invariant(&self) -> Option<&'static str> {
        if !(self.d_bar > 0.0) {
            return Some("d_bar > 0");
        }
        if !(self.d_tot > 0.0) {
            return Some("d_tot > 0");
        }
        if !(self.e_lo > 0.0) {
            return Some("E_LO > 0");
        }
        if !self.v_charging.is_finite() {
            return Some("V_charging finite");
        }
        None
    }

    /// Cross-field invariant `0 < d_bar < d_tot`.
    pub(crate) fn relation_invariant(&self) -> Option<&'static str> {
        if !(self.d_bar < self.d_tot) {
            return Some("d_bar < d_tot");
        }
        None
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if let Some(inv) = self.field_invariant().or_else(|| self.relation_invariant()) {
            return Err(CoreError::InvalidArgument(format!(
                "geometry violates invariant {inv}"
            )));
        }
        Ok(())
    }
}

/// All physical parameters of the dot and device.
///
/// `reference()` returns the calibrated set shipped with the tool; every
/// value can be overridden from a config file (see [`crate::config`]).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModelParams {
    /// Electron g-factor (dimensionless, signed).
    pub g_e: f64,
    /// Electron state broadening gamma (ueV). Sets the width of the
    /// flip-flop resonance: in field units it is `gamma / (2 g_e mu_B)`.
    pub gamma: f64,
    /// Hyperfine coupling scale |A_hf| (ueV).
    pub a_hf: f64,
    /// Optical pump-rate coefficient (1/s per mW): `w_x = k_pump * P`.
    pub k_pump: f64,
    /// Maximum attainable Overhauser field magnitude (T).
    pub b_sat: f64,
    /// Nuclear depolarization rate (1/s).
    pub gamma_d: f64,
    /// Radiative recombination rate of the dot exciton (1/s).
    pub gamma_r: f64,
    /// Tunneling-rate prefactor (1/s); 0 disables the channel.
    pub gamma_t0: f64,
    /// Tunneling onset bias (V).
    pub v_onset: f64,
    /// Tunneling exponential slope (V).
    pub v_slope: f64,
    /// Peak phonon-assisted co-tunneling rate (1/s); 0 disables it.
    pub gamma_cot0: f64,
    /// Full width at half maximum of the co-tunneling resonance (meV).
    pub w_cot: f64,
    /// Pumping-enhancement factor of the tunneling escape channel
    /// (dimensionless); 0 disables the enhancement.
    pub eta_tunnel: f64,
    /// Exciton g-factor for the Zeeman-splitting observable
    /// `E_X = g_exciton mu_B B_z - g_e mu_B |B_N|`.
    pub g_exciton: f64,
    /// Proportionality constant turning the flip-flop expression
    /// `w_x |A_hf|^2 / (dE^2 + gamma^2/4)` into a rate (dimensionless).
    pub c_rate: f64,
    pub geometry: DeviceGeometry,
}

impl ModelParams {
    /// Calibrated reference parameter set.
    ///
    /// Calibration targets (all reproduced by the acceptance suite): an
    /// upward power-sweep switch near 0.33 mW at B_z = 2 T and -0.45 V
    /// bias; bias-scan switching thresholds near -0.44 V (toward reverse
    /// bias) and -0.10 V (back) at B_z = 2.1 T and 0.4 mW; a local
    /// maximum of the threshold power at the co-tunneling resonance near
    /// -0.3 V; full-scale switching at B_z = 3 T.
    pub fn reference() -> Self {
        ModelParams {
            g_e: 0.6,
            gamma: 17.4,
            a_hf: 100.0,
            k_pump: 1.0e9,
            b_sat: 3.0,
            gamma_d: 1.0,
            gamma_r: 1.0e9,
            gamma_t0: 2.0e11,
            v_onset: -0.4,
            v_slope: 0.05,
            gamma_cot0: 1.8e10,
            w_cot: 10.0,
            eta_tunnel: 8.0,
            g_exciton: 1.9747,
            c_rate: 2.218e-11,
            geometry: DeviceGeometry::reference(),
        }
    }

    /// First violated single-field invariant, if any.
    pub(crate) fn field_invariant(&self) -> Option<&'static str> {
        if !self.g_e.is_finite() {
            return Some("g_e finite");
        }
        if !(self.gamma > 0.0) {
            return Some("gamma > 0");
        }
        if !(self.a_hf > 0.0) {
            return Some("A_hf > 0");
        }
        if !(self.k_pump > 0.0) {
            return Some("k_pump > 0");
        }
        if !(self.b_sat > 0.0) {
            return Some("B_sat > 0");
        }
        if !(self.gamma_d > 0.0) {
            return Some("Gamma_d > 0");
        }
        if !(self.gamma_r > 0.0) {
            return Some("Gamma_r > 0");
        }
        if !(self.gamma_t0 >= 0.0) {
            return Some("Gamma_t0 >= 0");
        }
        if !self.v_onset.is_finite() {
            return Some("V_onset finite");
        }
        if !(self.v_slope > 0.0) {
            return Some("V_slope > 0");
        }
        if !(self.gamma_cot0 >= 0.0) {
            return Some("Gamma_cot0 >= 0");
        }
        if !(self.w_cot > 0.0) {
            return Some("W_cot > 0");
        }
        if !(self.eta_tunnel >= 0.0) {
            return Some("eta_tunnel >= 0");
        }
        if !(self.g_exciton.is_finite()) {
            return Some("g_exciton finite");
        }
        if !(self.c_rate > 0.0) {
            return Some("C_rate > 0");
        }
        self.geometry.field_invariant()
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if let Some(inv) = self
            .field_invariant()
            .or_else(|| self.geometry.relation_invariant())
        {
            return Err(CoreError::InvalidArgument(format!(
                "parameters violate invariant {inv}"
            )));
        }
        Ok(())
    }
}

/// The externally controlled knobs: field, power, bias, pump helicity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DriveConditions {
    /// External magnetic field along the growth axis (T), >= 0.
    pub b_z: f64,
    /// Excitation power (mW), >= 0.
    pub power: f64,
    /// Applied bias (V); reverse bias is negative.
    pub v_app: f64,
    pub helicity: Helicity,
}

impl DriveConditions {
    /// Drive point of the reference power-sweep protocol.
    pub fn reference() -> Self {
        DriveConditions {
            b_z: 2.0,
            power: 0.3,
            v_app: -0.45,
            helicity: Helicity::SigmaMinus,
        }
    }

    pub(crate) fn field_invariant(&self) -> Option<&'static str> {
        if !(self.b_z >= 0.0) || !self.b_z.is_finite() {
            return Some("B_z >= 0");
        }
        if !(self.power >= 0.0) || !self.power.is_finite() {
            return Some("P >= 0");
        }
        if !self.v_app.is_finite() {
            return Some("V_app finite");
        }
        None
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if let Some(inv) = self.field_invariant() {
            return Err(CoreError::InvalidArgument(format!(
                "drive violates invariant {inv}"
            )));
        }
        Ok(())
    }
}

/// Every intermediate rate entering `dB_N/dt` at one state, for
/// inspection and serialization.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateBreakdown {
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
    /// Electron spin-polarization retention factor, in [0, 1].
    pub rho_e: f64,
    /// Net Overhauser rate of change (T/s).
    pub dbn_dt: f64,
}

/// Electron Zeeman splitting `g_e mu_B (B_z + B_N)` in ueV.
///
/// `b_n` is the signed Overhauser component along `B_z`; the switch
/// condition is the zero crossing at `B_N ~ -B_z`.
pub fn electron_zeeman(params: &ModelParams, b_z: f64, b_n: f64) -> f64 {
    params.g_e * BOHR_MAGNETON_UEV_PER_T * (b_z + b_n)
}

/// Fully pumped Overhauser field the flip-flop term drives toward:
/// `+B_sat` for sigma-plus, `-B_sat` for sigma-minus.
pub fn overhauser_target(params: &ModelParams, helicity: Helicity) -> f64 {
    helicity.sign() * params.b_sat
}

/// Detuning of the dot electron ground state above the Fermi edge of the
/// back contact, in meV: `1000 |V_app - V_charging| d_bar / d_tot` under
/// reverse bias, zero once the level is at or below the Fermi edge.
pub fn ground_state_detuning(geometry: &DeviceGeometry, v_app: f64) -> f64 {
    if v_app >= geometry.v_charging {
        0.0
    } else {
        1.0e3 * (geometry.v_charging - v_app) * geometry.d_bar / geometry.d_tot
    }
}

/// Electron tunneling escape rate from the dot ground state to the
/// contact: a smooth sigmoid onset around `V_onset`, saturating to
/// `Gamma_t0` deep in reverse bias. Monotone non-increasing in `V_app`.
pub fn tunneling_rate(params: &ModelParams, v_app: f64) -> f64 {
    params.gamma_t0 / (1.0 + ((v_app - params.v_onset) / params.v_slope).exp())
}

/// Phonon-assisted resonant co-tunneling rate: a unit-peak Lorentzian in
/// the detuning mismatch `dE_GS - E_LO` with FWHM `W_cot`, scaled by
/// `Gamma_cot0`. Peaks exactly where the ground-state detuning matches
/// the optical-phonon energy.
pub fn cotunneling_rate(params: &ModelParams, v_app: f64) -> f64 {
    let mismatch = ground_state_detuning(&params.geometry, v_app) - params.geometry.e_lo;
    let hw = 0.5 * params.w_cot;
    params.gamma_cot0 * hw * hw / (mismatch * mismatch + hw * hw)
}

/// Probability that the photo-excited electron keeps its optically
/// prepared spin until it leaves the dot: the radiative and tunneling
/// exits preserve it, co-tunneling exchange with the contact scrambles
/// it.
pub fn spin_retention(gamma_r: f64, gamma_t: f64, gamma_cot: f64) -> Result<f64, CoreError> {
    let escape = gamma_r + gamma_t;
    if !(escape > 0.0) {
        return Err(CoreError::NoEscapeChannel);
    }
    Ok(escape / (escape + gamma_cot))
}

/// Effective spin-polarized pumping rate
/// `w_x_eff = k_pump P rho_e (1 + eta_tunnel Gamma_t / (Gamma_r + Gamma_t))`.
///
/// Linear in power; boosted by the tunneling branching fraction (fast
/// non-radiative escape lifts the re-excitation bottleneck); degraded by
/// co-tunneling through `rho_e`.
pub fn effective_pump_rate(params: &ModelParams, drive: &DriveConditions) -> Result<f64, CoreError> {
    let gamma_t = tunneling_rate(params, drive.v_app);
    let gamma_cot = cotunneling_rate(params, drive.v_app);
    let rho_e = spin_retention(params.gamma_r, gamma_t, gamma_cot)?;
    let branching = gamma_t / (params.gamma_r + gamma_t);
    Ok(params.k_pump * drive.power * rho_e * (1.0 + params.eta_tunnel * branching))
}

/// Electron-nuclear flip-flop rate
/// `w_s = C_rate w_x_eff A_hf^2 / (dE_e^2 + gamma^2/4)`:
/// even in the splitting, maximal at `dE_e = 0`.
pub fn flip_flop_rate(params: &ModelParams, w_x_eff: f64, delta_e_e: f64) -> f64 {
    let gamma_q = 0.25 * params.gamma * params.gamma;
    params.c_rate * w_x_eff * params.a_hf * params.a_hf / (delta_e_e * delta_e_e + gamma_q)
}

/// Full rate breakdown at one state of the drive and the nuclear field.
///
/// Deterministic: identical inputs yield bit-identical outputs.
pub fn polarization_rate(
    params: &ModelParams,
    drive: &DriveConditions,
    b_n: f64,
) -> Result<RateBreakdown, CoreError> {
    if !(b_n.abs() <= params.b_sat) {
        return Err(CoreError::PolarizationOutOfRange {
            b_n,
            b_sat: params.b_sat,
        });
    }
    let gamma_t = tunneling_rate(params, drive.v_app);
    let gamma_cot = cotunneling_rate(params, drive.v_app);
    let rho_e = spin_retention(params.gamma_r, gamma_t, gamma_cot)?;
    let branching = gamma_t / (params.gamma_r + gamma_t);
    let w_x_eff = params.k_pump * drive.power * rho_e * (1.0 + params.eta_tunnel * branching);
    let delta_e_e = electron_zeeman(params, drive.b_z, b_n);
    let w_s = flip_flop_rate(params, w_x_eff, delta_e_e);
    let target = overhauser_target(params, drive.helicity);
    let dbn_dt = w_s * (target - b_n) - params.gamma_d * b_n;
    Ok(RateBreakdown {
        delta_e_e,
        w_x_eff,
        w_s,
        gamma_t,
        gamma_cot,
        rho_e,
        dbn_dt,
    })
}

/// Precomputed coefficients of `dB_N/dt` for one fixed drive point.
///
/// The bias- and power-dependent channel rates collapse into a single
/// pump amplitude, so the per-`B_N` evaluation in root scans and time
/// integration is a handful of multiplications.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DriveContext {
    pub b_z: f64,
    pub target: f64,
    pub b_sat: f64,
    pub gamma_d: f64,
    /// `C_rate * w_x_eff * A_hf^2` (ueV^2 / s).
    pub pump_amp: f64,
    /// `gamma^2 / 4` (ueV^2).
    pub gamma_q: f64,
    /// `g_e * mu_B` (ueV / T).
    pub zeeman_scale: f64,
}

impl DriveContext {
    pub fn new(params: &ModelParams, drive: &DriveConditions) -> Result<Self, CoreError> {
        let w_x_eff = effective_pump_rate(params, drive)?;
        Ok(DriveContext {
            b_z: drive.b_z,
            target: overhauser_target(params, drive.helicity),
            b_sat: params.b_sat,
            gamma_d: params.gamma_d,
            pump_amp: params.c_rate * w_x_eff * params.a_hf * params.a_hf,
            gamma_q: 0.25 * params.gamma * params.gamma,
            zeeman_scale: params.g_e * BOHR_MAGNETON_UEV_PER_T,
        })
    }

    /// `dB_N/dt` at `b_n` (T/s). Defined for any finite `b_n`; range
    /// checks are the caller's concern.
    #[inline]
    pub fn dbn_dt(&self, b_n: f64) -> f64 {
        let de = self.zeeman_scale * (self.b_z + b_n);
        let w_s = self.pump_amp / (de * de + self.gamma_q);
        w_s * (self.target - b_n) - self.gamma_d * b_n
    }

    /// Flip-flop rate at exact resonance; together with `gamma_d` this
    /// bounds how fast the state can move.
    #[inline]
    pub fn peak_flip_flop_rate(&self) -> f64 {
        self.pump_amp / self.gamma_q
    }
}
