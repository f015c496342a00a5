/* C interface of the dnp nuclear spin polarization simulator.
 * Generated by cbindgen; do not edit by hand.
 */

#ifndef DNP_H
#define DNP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum DnpStatus {
  DnpOk = 0,
  /**
   * A required pointer argument was null.
   */
  DnpNullPointer = 1,
  /**
   * An argument violates a documented precondition.
   */
  DnpInvalidArgument = 2,
  /**
   * No escape channel: radiative plus tunneling rate is zero.
   */
  DnpNoEscapeChannel = 3,
  /**
   * A nuclear field outside [-B_sat, +B_sat].
   */
  DnpOutOfRange = 4,
  /**
   * A fixed point sits numerically on a bifurcation.
   */
  DnpMarginalFixedPoint = 5,
  /**
   * Relaxation hit its time budget without converging.
   */
  DnpNotConverged = 6,
  /**
   * The integrator state stopped being finite.
   */
  DnpDiverged = 7,
  /**
   * Config file missing, unreadable, or invalid.
   */
  DnpConfigError = 8,
  /**
   * A string argument was not valid UTF-8.
   */
  DnpInvalidUtf8 = 9,
  /**
   * The provided output buffer is too small.
   */
  DnpBufferTooSmall = 10,
} DnpStatus;

/**
 * Sweep axis selector for `dnp_sweep_run`.
 */
typedef enum DnpAxis {
  DnpAxisPower = 0,
  DnpAxisBias = 1,
  DnpAxisField = 2,
} DnpAxis;

/**
 * Direction selector for `dnp_sweep_run`.
 */
typedef enum DnpDirection {
  /**
   * First pass from `from` to `to`, then the seeded return pass.
   */
  DnpDirectionBoth = 0,
  DnpDirectionUp = 1,
  DnpDirectionDown = 2,
} DnpDirection;

/**
 * Opaque handle: model parameters plus default drive conditions.
 */
typedef struct DnpParams DnpParams;

/**
 * Opaque handle: the recorded trace of one sweep run.
 */
typedef struct DnpSweep DnpSweep;

/**
 * Every intermediate rate entering dB_N/dt at one state.
 */
typedef struct DnpRates {
  /**
   * Electron Zeeman splitting (ueV, signed).
   */
  double delta_e_e;
  /**
   * Effective spin-polarized pumping rate (1/s).
   */
  double w_x_eff;
  /**
   * Electron-nuclear flip-flop rate (1/s).
   */
  double w_s;
  /**
   * Tunneling escape rate (1/s).
   */
  double gamma_t;
  /**
   * Phonon-assisted co-tunneling rate (1/s).
   */
  double gamma_cot;
  /**
   * Electron spin-retention factor in [0, 1].
   */
  double rho_e;
  /**
   * Net Overhauser rate of change (T/s).
   */
  double dbn_dt;
} DnpRates;

/**
 * A fixed point of the polarization rate equation.
 */
typedef struct DnpFixedPoint {
  /**
   * Root position (T).
   */
  double b_n;
  /**
   * Slope of dB_N/dt at the root (1/s); negative for stable points.
   */
  double slope;
  /**
   * 1 for stable, 0 for unstable.
   */
  int stable;
} DnpFixedPoint;

/**
 * One recorded sweep sample.
 */
typedef struct DnpSweepPoint {
  double axis_value;
  /**
   * Converged nuclear field (T).
   */
  double b_n;
  /**
   * Electron Zeeman splitting (ueV).
   */
  double e_e;
  /**
   * Exciton splitting observable (ueV).
   */
  double e_x;
  /**
   * 0 on the first pass, 1 on the seeded return pass.
   */
  int direction;
  /**
   * 1 when a switch was detected at this sample.
   */
  int threshold_flag;
} DnpSweepPoint;

/**
 * A detected switching event.
 */
typedef struct DnpThreshold {
  /**
   * 0 on the first pass, 1 on the seeded return pass.
   */
  int direction;
  /**
   * Axis value of the first point on the new branch.
   */
  double axis_value;
  /**
   * Signed nuclear-field jump (T).
   */
  double delta_b_n;
} DnpThreshold;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Short static description of a status code.
 */
const char *dnp_status_message(enum DnpStatus status);

/**
 * Creates a handle holding the calibrated reference configuration.
 * Never fails; free with `dnp_params_free`.
 */
struct DnpParams *dnp_params_new_reference(void);

/**
 * Loads a config file (missing keys keep their reference values) into
 * a fresh handle written to `out`.
 *
 * # Safety
 * `path` must point to a NUL-terminated string and `out` to a writable
 * pointer slot. On anything but `DnpOk`, `*out` is left untouched.
 */
enum DnpStatus dnp_params_load(const char *path, struct DnpParams **out);

/**
 * Applies one `key = value` override, e.g. `dnp_params_set(p, "gamma",
 * "12.5")`. Keys and validation match the config file format; the
 * handle is unchanged when the override is rejected.
 *
 * # Safety
 * `params` must be a live handle from this library; `key` and `value`
 * must be NUL-terminated strings.
 */
enum DnpStatus dnp_params_set(struct DnpParams *params, const char *key, const char *value);

/**
 * Releases a handle created by this library. A null pointer is a no-op.
 *
 * # Safety
 * `params` must have come from `dnp_params_new_reference` or
 * `dnp_params_load` and must not be used afterwards.
 */
void dnp_params_free(struct DnpParams *params);

/**
 * Evaluates every intermediate rate at one state of drive and nuclear
 * field.
 *
 * # Safety
 * `params` must be a live handle; `out` must point to writable
 * `DnpRates` storage.
 */
enum DnpStatus dnp_rates(const struct DnpParams *params,
                         double b_z,
                         double power,
                         double v_app,
                         int helicity,
                         double b_n,
                         struct DnpRates *out);

/**
 * Locates every fixed point at the given drive, ascending in B_N.
 * Writes up to `capacity` entries and stores the total count in
 * `count`; returns `DnpBufferTooSmall` when the buffer cannot hold all
 * of them (the count is still stored).
 *
 * # Safety
 * `params` must be a live handle; `out` must point to `capacity`
 * writable `DnpFixedPoint` slots; `count` must be writable.
 */
enum DnpStatus dnp_fixed_points(const struct DnpParams *params,
                                double b_z,
                                double power,
                                double v_app,
                                int helicity,
                                struct DnpFixedPoint *out,
                                uintptr_t capacity,
                                uintptr_t *count);

/**
 * Relaxes the nuclear field from `b_n0` to a stable fixed point and
 * writes the settled value to `out`.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum DnpStatus dnp_relax(const struct DnpParams *params,
                         double b_z,
                         double power,
                         double v_app,
                         int helicity,
                         double b_n0,
                         double *out);

/**
 * Finds the upward switching threshold power at the given field and
 * bias. When a switch exists below `p_max`, writes it to `out` and
 * sets `*found` to true; otherwise clears `*found` and writes NaN.
 *
 * # Safety
 * `params` must be a live handle; `found` and `out` must be writable.
 */
enum DnpStatus dnp_threshold_power(const struct DnpParams *params,
                                   double b_z,
                                   double v_app,
                                   int helicity,
                                   double p_max,
                                   double resolution,
                                   bool *found,
                                   double *out);

/**
 * Runs a quasi-static sweep over the chosen axis. The non-swept drive
 * values come from the handle's defaults; the first point is seeded
 * with an unpolarized dot. On success writes a fresh `DnpSweep` handle
 * to `out`; free it with `dnp_sweep_free`.
 *
 * # Safety
 * `params` must be a live handle and `out` a writable pointer slot.
 */
enum DnpStatus dnp_sweep_run(const struct DnpParams *params,
                             enum DnpAxis axis,
                             double from,
                             double to,
                             uintptr_t steps,
                             enum DnpDirection direction,
                             struct DnpSweep **out);

/**
 * Number of recorded samples (both passes together).
 *
 * # Safety
 * `sweep` must be a live handle from `dnp_sweep_run` or null.
 */
uintptr_t dnp_sweep_len(const struct DnpSweep *sweep);

/**
 * Copies sample `index` into `out`.
 *
 * # Safety
 * `sweep` must be a live handle; `out` must be writable.
 */
enum DnpStatus dnp_sweep_point(const struct DnpSweep *sweep,
                               uintptr_t index,
                               struct DnpSweepPoint *out);

/**
 * Number of detected switching events.
 *
 * # Safety
 * `sweep` must be a live handle from `dnp_sweep_run` or null.
 */
uintptr_t dnp_sweep_threshold_count(const struct DnpSweep *sweep);

/**
 * Copies switching event `index` into `out`.
 *
 * # Safety
 * `sweep` must be a live handle; `out` must be writable.
 */
enum DnpStatus dnp_sweep_threshold(const struct DnpSweep *sweep,
                                   uintptr_t index,
                                   struct DnpThreshold *out);

/**
 * Hysteresis loop area (T x axis units) of a both-directions sweep;
 * NaN for single-direction sweeps or a null handle.
 *
 * # Safety
 * `sweep` must be a live handle from `dnp_sweep_run` or null.
 */
double dnp_sweep_loop_area(const struct DnpSweep *sweep);

/**
 * Releases a sweep handle. A null pointer is a no-op.
 *
 * # Safety
 * `sweep` must have come from `dnp_sweep_run` and must not be used
 * afterwards.
 */
void dnp_sweep_free(struct DnpSweep *sweep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DNP_H */
