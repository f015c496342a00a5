//! Machine-readable run reports and the stable CSV number format.
//!
//! Reports are single JSON documents with a fixed field order; two runs
//! of the same command on the same config differ only in `timestamp`.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::model::{DriveConditions, ModelParams};
use crate::steady::FixedPoint;
use crate::sweep::Threshold;

/// Formats a float with 9 significant digits, the fixed CSV format.
pub fn fmt_g9(x: f64) -> String {
    format!("{x:.8e}")
}

/// A switching threshold tagged with the sweep direction it occurred in.
#[derive(Debug, Clone, Serialize)]
pub struct DirectedThreshold {
    pub direction: &'static str,
    pub axis_value: f64,
    pub delta_b_n: f64,
}

impl DirectedThreshold {
    pub fn tag(direction: &'static str, t: &Threshold) -> Self {
        DirectedThreshold {
            direction,
            axis_value: t.axis_value,
            delta_b_n: t.delta_b_n,
        }
    }
}

/// One row of the threshold-power scan.
#[derive(Debug, Clone, Serialize)]
pub struct PthrPoint {
    pub bias: f64,
    /// `None` when no switch occurs below the scan's power ceiling.
    pub p_thr: Option<f64>,
}

/// Summary of a bistability atlas.
#[derive(Debug, Clone, Serialize)]
pub struct AtlasSummary {
    /// `[x_min, x_max, y_min, y_max]` of the region with two or more
    /// stable roots, if such cells exist.
    pub bistable_bounding_box: Option<[f64; 4]>,
    pub marginal_cells: usize,
}

/// Machine-readable summary of one command invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    /// The resolved command line, flags included.
    pub command: String,
    /// RFC 3339 UTC time of the run; the only field allowed to differ
    /// between identical runs.
    pub timestamp: String,
    pub exit_status: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub params: ModelParams,
    pub drive: DriveConditions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_points: Option<Vec<FixedPoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<DirectedThreshold>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loop_area: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_thr: Option<Vec<PthrPoint>>,
    /// Interior local maxima of the threshold-power curve (bias values);
    /// the co-tunneling resonance signature.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_thr_local_maxima: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atlas: Option<AtlasSummary>,
}

impl RunReport {
    pub fn new(command: String, params: ModelParams, drive: DriveConditions) -> Self {
        RunReport {
            command,
            timestamp: chrono::Utc::now().to_rfc3339(),
            exit_status: 0,
            error: None,
            params,
            drive,
            fixed_points: None,
            thresholds: None,
            loop_area: None,
            p_thr: None,
            p_thr_local_maxima: None,
            atlas: None,
        }
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut body = serde_json::to_string_pretty(self).expect("report serializes");
        body.push('\n');
        fs::write(path, body)
    }
}

/// Interior local maxima of a partially defined curve. Threshold
/// refinement quantizes values, so a maximum can be a flat run of equal
/// samples: a run counts when the defined samples immediately before
/// and after it are both strictly lower, and it is reported at the run
/// center. Undefined neighbors disqualify a run.
pub fn local_maxima(points: &[PthrPoint]) -> Vec<f64> {
    let mut maxima = Vec::new();
    let mut i = 1usize;
    while i + 1 < points.len() {
        let Some(v) = points[i].p_thr else {
            i += 1;
            continue;
        };
        let mut j = i;
        while j + 1 < points.len() && points[j + 1].p_thr == Some(v) {
            j += 1;
        }
        if j + 1 < points.len() {
            if let (Some(left), Some(right)) = (points[i - 1].p_thr, points[j + 1].p_thr) {
                if left < v && right < v {
                    maxima.push(0.5 * (points[i].bias + points[j].bias));
                }
            }
        }
        i = j + 1;
    }
    maxima
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_g9(0.3), "3.00000000e-1");
        assert_eq!(fmt_g9(-69.4596), "-6.94596000e1");
        assert_eq!(fmt_g9(0.0), "0.00000000e0");
        assert_eq!(fmt_g9(6144.17), "6.14417000e3");
    }

    #[test]
    fn local_maxima_skip_undefined_cells() {
        let mk = |bias: f64, p: Option<f64>| PthrPoint { bias, p_thr: p };
        let pts = vec![
            mk(-0.4, Some(0.33)),
            mk(-0.35, Some(0.37)),
            mk(-0.3, Some(0.65)),
            mk(-0.25, Some(0.60)),
            mk(-0.2, Some(0.70)),
            mk(-0.15, None),
            mk(-0.1, Some(2.0)),
        ];
        assert_eq!(local_maxima(&pts), vec![-0.3]);
    }

    #[test]
    fn local_maxima_merge_quantized_plateaus() {
        let mk = |bias: f64, p: f64| PthrPoint {
            bias,
            p_thr: Some(p),
        };
        // A flat two-point peak counts once, at its center; the equal
        // pair on the rising flank does not.
        let pts = vec![
            mk(-0.34, 0.41),
            mk(-0.32, 0.48),
            mk(-0.30, 0.59),
            mk(-0.28, 0.65),
            mk(-0.26, 0.65),
            mk(-0.24, 0.64),
            mk(-0.22, 0.66),
        ];
        let got = local_maxima(&pts);
        assert_eq!(got.len(), 1);
        assert!((got[0] + 0.27).abs() < 1e-12);
    }

    #[test]
    fn report_roundtrips_as_json() {
        let report = RunReport::new(
            "dnp steady".into(),
            ModelParams::reference(),
            DriveConditions::reference(),
        );
        let text = serde_json::to_string(&report).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["exit_status"], 0);
        assert!(value["params"]["gamma"].is_number());
        assert_eq!(value["drive"]["helicity"], -1);
    }
}
