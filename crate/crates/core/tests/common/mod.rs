//! Shared helpers for integration tests: an implementation-independent
//! root oracle and drive constructors. Each suite uses its own subset.
#![allow(dead_code)]

use dnp_core::model::{polarization_rate, DriveConditions, Helicity, ModelParams};

/// Rate of change of the nuclear field through the public evaluation
/// path, unwrapped for in-range arguments.
pub fn dbn_dt(params: &ModelParams, drive: &DriveConditions, b_n: f64) -> f64 {
    polarization_rate(params, drive, b_n)
        .expect("rate evaluation inside [-B_sat, B_sat]")
        .dbn_dt
}

/// Brute-force root list: a dense sign scan over `[-B_sat, +B_sat]`
/// with `n` intervals, each bracket bisected until the interval cannot
/// shrink at float resolution. Serves as the independent oracle for the
/// production root finder, which uses a far coarser scan.
pub fn brute_force_roots(params: &ModelParams, drive: &DriveConditions, n: usize) -> Vec<f64> {
    let lo = -params.b_sat;
    let hi = params.b_sat;
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut f0 = dbn_dt(params, drive, x0);
    if f0 == 0.0 {
        roots.push(x0);
    }
    for i in 1..=n {
        let x1 = if i == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / n as f64
        };
        let f1 = dbn_dt(params, drive, x1);
        if f1 == 0.0 {
            roots.push(x1);
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            let (mut a, mut b) = (x0, x1);
            let mut fa = f0;
            loop {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = dbn_dt(params, drive, m);
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

pub fn sigma_minus_drive(b_z: f64, power: f64, v_app: f64) -> DriveConditions {
    DriveConditions {
        b_z,
        power,
        v_app,
        helicity: Helicity::SigmaMinus,
    }
}
