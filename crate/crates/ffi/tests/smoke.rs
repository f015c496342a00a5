//! Exercises the C ABI through the same entry points a foreign caller
//! would use, plus a full C round-trip: compile a small program against
//! the generated header, link the static library, run it.

use std::ffi::CString;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dnp_ffi::*;

#[test]
fn params_lifecycle_and_rates() {
    unsafe {
        let p = dnp_params_new_reference();
        assert!(!p.is_null());

        // Dark dot is stationary at B_N = 0.
        let mut rates = std::mem::zeroed::<DnpRates>();
        let status = dnp_rates(p, 2.0, 0.0, -0.45, -1, 0.0, &mut rates);
        assert_eq!(status, DnpStatus::DnpOk);
        assert_eq!(rates.dbn_dt, 0.0);
        assert_eq!(rates.w_x_eff, 0.0);
        assert!(rates.rho_e > 0.9);

        // Overrides flow through the config validation.
        let key = CString::new("gamma").unwrap();
        let good = CString::new("20.0").unwrap();
        let bad = CString::new("-1").unwrap();
        assert_eq!(dnp_params_set(p, key.as_ptr(), good.as_ptr()), DnpStatus::DnpOk);
        assert_eq!(
            dnp_params_set(p, key.as_ptr(), bad.as_ptr()),
            DnpStatus::DnpConfigError
        );

        // Invalid helicity is rejected before any numerics run.
        let status = dnp_rates(p, 2.0, 0.0, -0.45, 3, 0.0, &mut rates);
        assert_eq!(status, DnpStatus::DnpInvalidArgument);

        dnp_params_free(p);
    }
}

#[test]
fn fixed_points_and_relax_roundtrip() {
    unsafe {
        let p = dnp_params_new_reference();
        let mut points = [std::mem::zeroed::<DnpFixedPoint>(); 8];
        let mut count = 0usize;

        // Bistable drive: three alternating roots.
        let status =
            dnp_fixed_points(p, 2.0, 0.28, -0.45, -1, points.as_mut_ptr(), points.len(), &mut count);
        assert_eq!(status, DnpStatus::DnpOk);
        assert_eq!(count, 3);
        assert_eq!(points[0].stable, 1);
        assert_eq!(points[1].stable, 0);
        assert_eq!(points[2].stable, 1);
        assert!(points[0].b_n < points[1].b_n && points[1].b_n < points[2].b_n);

        // A too-small buffer still reports the count.
        let mut one = [std::mem::zeroed::<DnpFixedPoint>(); 1];
        let status = dnp_fixed_points(p, 2.0, 0.28, -0.45, -1, one.as_mut_ptr(), 1, &mut count);
        assert_eq!(status, DnpStatus::DnpBufferTooSmall);
        assert_eq!(count, 3);

        // Relax from above the unstable root lands on the upper stable one.
        let mut settled = f64::NAN;
        let status = dnp_relax(p, 2.0, 0.28, -0.45, -1, points[1].b_n + 1e-4, &mut settled);
        assert_eq!(status, DnpStatus::DnpOk);
        assert!((settled - points[2].b_n).abs() < 1e-4);

        dnp_params_free(p);
    }
}

#[test]
fn sweep_handle_reports_hysteresis() {
    unsafe {
        let p = dnp_params_new_reference();
        let mut sweep: *mut DnpSweep = ptr::null_mut();
        let status = dnp_sweep_run(
            p,
            DnpAxis::DnpAxisPower,
            0.0,
            0.6,
            31,
            DnpDirection::DnpDirectionBoth,
            &mut sweep,
        );
        assert_eq!(status, DnpStatus::DnpOk);
        assert_eq!(dnp_sweep_len(sweep), 62);
        assert_eq!(dnp_sweep_threshold_count(sweep), 2);

        let mut up = std::mem::zeroed::<DnpThreshold>();
        let mut down = std::mem::zeroed::<DnpThreshold>();
        assert_eq!(dnp_sweep_threshold(sweep, 0, &mut up), DnpStatus::DnpOk);
        assert_eq!(dnp_sweep_threshold(sweep, 1, &mut down), DnpStatus::DnpOk);
        assert_eq!(up.direction, 0);
        assert_eq!(down.direction, 1);
        assert!(up.axis_value > down.axis_value);
        assert!(dnp_sweep_loop_area(sweep) > 0.0);

        let mut point = std::mem::zeroed::<DnpSweepPoint>();
        assert_eq!(dnp_sweep_point(sweep, 0, &mut point), DnpStatus::DnpOk);
        assert_eq!(point.axis_value, 0.0);
        assert!(point.b_n.abs() < 1e-6);
        assert_eq!(
            dnp_sweep_point(sweep, 999, &mut point),
            DnpStatus::DnpInvalidArgument
        );

        dnp_sweep_free(sweep);
        dnp_params_free(p);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut rates = std::mem::zeroed::<DnpRates>();
        assert_eq!(
            dnp_rates(ptr::null(), 2.0, 0.0, -0.45, -1, 0.0, &mut rates),
            DnpStatus::DnpNullPointer
        );
        let p = dnp_params_new_reference();
        assert_eq!(
            dnp_rates(p, 2.0, 0.0, -0.45, -1, 0.0, ptr::null_mut()),
            DnpStatus::DnpNullPointer
        );
        let mut out: *mut DnpParams = ptr::null_mut();
        assert_eq!(dnp_params_load(ptr::null(), &mut out), DnpStatus::DnpNullPointer);
        let missing = CString::new("/nonexistent/x.conf").unwrap();
        assert_eq!(
            dnp_params_load(missing.as_ptr(), &mut out),
            DnpStatus::DnpConfigError
        );
        dnp_params_free(p);
        dnp_params_free(ptr::null_mut());
        dnp_sweep_free(ptr::null_mut());
    }
}

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    let target_dir = std::env::var("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|_| manifest.join("../../target"));
    let lib_dir = target_dir.join("debug");
    let static_lib = lib_dir.join("libdnp_ffi.a");
    assert!(
        static_lib.exists(),
        "static library not found at {}",
        static_lib.display()
    );

    let scratch = tempfile::tempdir().unwrap();
    let c_src = scratch.path().join("check.c");
    std::fs::write(
        &c_src,
        r#"
#include <math.h>
#include <stdio.h>
#include "dnp.h"

int main(void) {
    DnpParams *p = dnp_params_new_reference();
    if (!p) return 1;

    DnpFixedPoint points[8];
    uintptr_t count = 0;
    DnpStatus status = dnp_fixed_points(p, 2.0, 0.0, -0.45, -1, points, 8, &count);
    if (status != DnpOk) { fprintf(stderr, "%s\n", dnp_status_message(status)); return 2; }
    if (count != 1 || points[0].stable != 1 || fabs(points[0].b_n) > 1e-5) return 3;

    double settled = 0.0;
    status = dnp_relax(p, 2.0, 0.0, -0.45, -1, 1.0, &settled);
    if (status != DnpOk || fabs(settled) > 1e-6) return 4;

    DnpRates rates;
    status = dnp_rates(p, 2.0, 0.3, -0.45, -1, -1.0, &rates);
    if (status != DnpOk || rates.w_s <= 0.0 || rates.rho_e <= 0.0) return 5;

    dnp_params_free(p);
    return 0;
}
"#,
    )
    .unwrap();

    let exe = scratch.path().join("check");
    let compile = Command::new("cc")
        .arg(&c_src)
        .arg("-I")
        .arg(&include_dir)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-ldnp_ffi")
        .arg("-lpthread")
        .arg("-ldl")
        .arg("-lm")
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&exe).output().expect("compiled program runs");
    assert!(
        run.status.success(),
        "C round-trip exited with {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stderr)
    );
}
