//! Configuration files: plain UTF-8 `key = value` lines with `#`
//! comments and optional `[model]` / `[geometry]` / `[drive]` sections.
//!
//! Keys are exactly the parameter field names. Unknown keys are a hard
//! error (no silent typo tolerance); missing keys fall back to the
//! calibrated reference values shipped in the binary. Every invariant of
//! the model types is enforced at load time with the offending line
//! number.

use std::fs;
use std::path::Path;

use crate::error::ConfigError;
use crate::model::{DriveConditions, Helicity, ModelParams};

/// A fully resolved parameter set: model constants plus default drive.
#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub params: ModelParams,
    pub drive: DriveConditions,
}

impl Config {
    /// The calibrated reference configuration.
    pub fn reference() -> Self {
        Config {
            params: ModelParams::reference(),
            drive: DriveConditions::reference(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Model,
    Geometry,
    Drive,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Model => "model",
            Section::Geometry => "geometry",
            Section::Drive => "drive",
        }
    }
}

const MODEL_KEYS: &[&str] = &[
    "g_e",
    "gamma",
    "A_hf",
    "k_pump",
    "B_sat",
    "Gamma_d",
    "Gamma_r",
    "Gamma_t0",
    "V_onset",
    "V_slope",
    "Gamma_cot0",
    "W_cot",
    "eta_tunnel",
    "g_exciton",
    "C_rate",
];
const GEOMETRY_KEYS: &[&str] = &["d_bar", "d_tot", "E_LO", "V_charging"];
const DRIVE_KEYS: &[&str] = &["B_z", "P", "V_app", "helicity"];

fn section_of(key: &str) -> Option<Section> {
    if MODEL_KEYS.contains(&key) {
        Some(Section::Model)
    } else if GEOMETRY_KEYS.contains(&key) {
        Some(Section::Geometry)
    } else if DRIVE_KEYS.contains(&key) {
        Some(Section::Drive)
    } else {
        None
    }
}

/// Loads and validates a config file. Missing keys keep their reference
/// values; an empty file yields the full reference set.
pub fn parse_config(path: &Path) -> Result<Config, ConfigError> {
    let text = fs::read_to_string(path)?;
    parse_config_str(&text)
}

/// Same as [`parse_config`], from an in-memory string.
pub fn parse_config_str(text: &str) -> Result<Config, ConfigError> {
    let mut cfg = Config::reference();
    let mut section: Option<Section> = None;
    let mut seen: Vec<(&str, usize)> = Vec::new();
    let mut geometry_lines: (usize, usize) = (0, 0); // (d_bar, d_tot)

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }

        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = Some(match name.trim() {
                "model" => Section::Model,
                "geometry" => Section::Geometry,
                "drive" => Section::Drive,
                other => {
                    return Err(ConfigError::UnknownSection {
                        line: line_no,
                        section: other.to_string(),
                    })
                }
            });
            continue;
        }

        let Some((key_raw, value_raw)) = line.split_once('=') else {
            return Err(ConfigError::Malformed { line: line_no });
        };
        let key = key_raw.trim();
        let value = value_raw.trim();

        let Some(home) = section_of(key) else {
            return Err(ConfigError::UnknownKey {
                line: line_no,
                key: key.to_string(),
            });
        };
        if let Some(active) = section {
            if active != home {
                return Err(ConfigError::KeyOutsideSection {
                    line: line_no,
                    key: key.to_string(),
                    section: active.name(),
                });
            }
        }
        if let Some(&(k, _)) = seen.iter().find(|&&(k, _)| k == key) {
            return Err(ConfigError::DuplicateKey {
                line: line_no,
                key: k.to_string(),
            });
        }

        apply_key(&mut cfg, key, value, line_no)?;
        if key == "d_bar" {
            geometry_lines.0 = line_no;
        }
        if key == "d_tot" {
            geometry_lines.1 = line_no;
        }

        // The reference values are valid, so any fresh violation comes
        // from the key just applied.
        let violated = cfg
            .params
            .field_invariant()
            .or_else(|| cfg.drive.field_invariant());
        if let Some(invariant) = violated {
            return Err(ConfigError::InvariantViolation {
                line: line_no,
                invariant,
            });
        }

        let interned = section_of(key)
            .map(|s| match s {
                Section::Model => MODEL_KEYS,
                Section::Geometry => GEOMETRY_KEYS,
                Section::Drive => DRIVE_KEYS,
            })
            .and_then(|keys| keys.iter().find(|&&k| k == key))
            .expect("key already resolved");
        seen.push((interned, line_no));
    }

    if let Some(invariant) = cfg.params.geometry.relation_invariant() {
        let line = geometry_lines.0.max(geometry_lines.1);
        return Err(ConfigError::InvariantViolation { line, invariant });
    }

    Ok(cfg)
}

/// Applies one `key = value` override to an in-memory configuration,
/// with the same key set and validation as the file parser. The config
/// is untouched when the override is rejected. Errors report line 0
/// since there is no file position.
pub fn apply_override(cfg: &mut Config, key: &str, value: &str) -> Result<(), ConfigError> {
    if section_of(key).is_none() {
        return Err(ConfigError::UnknownKey {
            line: 0,
            key: key.to_string(),
        });
    }
    let mut staged = *cfg;
    apply_key(&mut staged, key, value, 0)?;
    let violated = staged
        .params
        .field_invariant()
        .or_else(|| staged.drive.field_invariant())
        .or_else(|| staged.params.geometry.relation_invariant());
    if let Some(invariant) = violated {
        return Err(ConfigError::InvariantViolation { line: 0, invariant });
    }
    *cfg = staged;
    Ok(())
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64, ConfigError> {
    let invalid = || ConfigError::InvalidValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    };
    let v: f64 = value.parse().map_err(|_| invalid())?;
    if !v.is_finite() {
        return Err(invalid());
    }
    Ok(v)
}

fn apply_key(cfg: &mut Config, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
    if key == "helicity" {
        let parsed = match value {
            "+1" | "1" => Some(Helicity::SigmaPlus),
            "-1" => Some(Helicity::SigmaMinus),
            _ => None,
        };
        let Some(h) = parsed else {
            return Err(ConfigError::InvalidValue {
                line,
                key: key.to_string(),
                value: value.to_string(),
            });
        };
        cfg.drive.helicity = h;
        return Ok(());
    }

    let v = parse_f64(key, value, line)?;
    let p = &mut cfg.params;
    match key {
        "g_e" => p.g_e = v,
        "gamma" => p.gamma = v,
        "A_hf" => p.a_hf = v,
        "k_pump" => p.k_pump = v,
        "B_sat" => p.b_sat = v,
        "Gamma_d" => p.gamma_d = v,
        "Gamma_r" => p.gamma_r = v,
        "Gamma_t0" => p.gamma_t0 = v,
        "V_onset" => p.v_onset = v,
        "V_slope" => p.v_slope = v,
        "Gamma_cot0" => p.gamma_cot0 = v,
        "W_cot" => p.w_cot = v,
        "eta_tunnel" => p.eta_tunnel = v,
        "g_exciton" => p.g_exciton = v,
        "C_rate" => p.c_rate = v,
        "d_bar" => p.geometry.d_bar = v,
        "d_tot" => p.geometry.d_tot = v,
        "E_LO" => p.geometry.e_lo = v,
        "V_charging" => p.geometry.v_charging = v,
        "B_z" => cfg.drive.b_z = v,
        "P" => cfg.drive.power = v,
        "V_app" => cfg.drive.v_app = v,
        _ => unreachable!("key {key} was resolved to a section"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_file_yields_reference_set() {
        let cfg = parse_config_str("").unwrap();
        let reference = Config::reference();
        assert_eq!(cfg.params.gamma, reference.params.gamma);
        assert_eq!(cfg.params.c_rate, reference.params.c_rate);
        assert_eq!(cfg.drive.b_z, reference.drive.b_z);
    }

    #[test]
    fn comments_blanks_and_sections_parse() {
        let text = "\n# reference overrides\n[model]\ngamma = 12.5  # ueV\n\n[geometry]\nd_bar = 25\nd_tot = 230\n\n[drive]\nB_z = 2.1\nhelicity = -1\n";
        let cfg = parse_config_str(text).unwrap();
        assert_relative_eq!(cfg.params.gamma, 12.5);
        assert_eq!(cfg.params.geometry.d_bar, 25.0);
        assert_eq!(cfg.params.geometry.d_tot, 230.0);
        assert_eq!(cfg.drive.b_z, 2.1);
        assert_eq!(cfg.drive.helicity, Helicity::SigmaMinus);
    }

    #[test]
    fn bare_keys_resolve_without_sections() {
        let cfg = parse_config_str("gamma = 20\nB_z = 1.8\n").unwrap();
        assert_eq!(cfg.params.gamma, 20.0);
        assert_eq!(cfg.drive.b_z, 1.8);
    }

    #[test]
    fn unknown_key_is_a_hard_error_with_line() {
        let err = parse_config_str("gamma = 20\ngama = 3\n").unwrap_err();
        match err {
            ConfigError::UnknownKey { line, key } => {
                assert_eq!(line, 2);
                assert_eq!(key, "gama");
            }
            other => panic!("expected UnknownKey, got {other:?}"),
        }
    }

    #[test]
    fn key_in_wrong_section_is_rejected() {
        let err = parse_config_str("[model]\nd_bar = 30\n").unwrap_err();
        match err {
            ConfigError::KeyOutsideSection { line, key, section } => {
                assert_eq!(line, 2);
                assert_eq!(key, "d_bar");
                assert_eq!(section, "model");
            }
            other => panic!("expected KeyOutsideSection, got {other:?}"),
        }
    }

    #[test]
    fn negative_gamma_reports_invariant_and_line() {
        let err = parse_config_str("# comment\ngamma = -1\n").unwrap_err();
        match err {
            ConfigError::InvariantViolation { line, invariant } => {
                assert_eq!(line, 2);
                assert_eq!(invariant, "gamma > 0");
            }
            other => panic!("expected InvariantViolation, got {other:?}"),
        }
        assert!(err.to_string().contains("violates invariant gamma > 0"));
    }

    #[test]
    fn geometry_relation_checked_at_end() {
        let err = parse_config_str("d_bar = 300\n").unwrap_err();
        match err {
            ConfigError::InvariantViolation { line, invariant } => {
                assert_eq!(line, 1);
                assert_eq!(invariant, "d_bar < d_tot");
            }
            other => panic!("expected InvariantViolation, got {other:?}"),
        }
        // Consistent pair passes.
        let cfg = parse_config_str("d_bar = 30\nd_tot = 260\n").unwrap();
        assert_eq!(cfg.params.geometry.d_bar, 30.0);
    }

    #[test]
    fn malformed_and_duplicate_lines() {
        assert!(matches!(
            parse_config_str("gamma\n"),
            Err(ConfigError::Malformed { line: 1 })
        ));
        assert!(matches!(
            parse_config_str("gamma = 2\ngamma = 3\n"),
            Err(ConfigError::DuplicateKey { line: 2, .. })
        ));
    }

    #[test]
    fn invalid_number_names_the_key() {
        let err = parse_config_str("B_sat = three\n").unwrap_err();
        assert!(err.to_string().contains("invalid value for `B_sat`"));
        assert!(matches!(
            parse_config_str("gamma = inf\n"),
            Err(ConfigError::InvalidValue { .. })
        ));
    }

    #[test]
    fn helicity_accepts_only_signs() {
        assert_eq!(
            parse_config_str("helicity = +1\n").unwrap().drive.helicity,
            Helicity::SigmaPlus
        );
        assert!(matches!(
            parse_config_str("helicity = 2\n"),
            Err(ConfigError::InvalidValue { .. })
        ));
    }

    #[test]
    fn apply_override_validates_like_the_parser() {
        let mut cfg = Config::reference();
        apply_override(&mut cfg, "gamma", "21.5").unwrap();
        assert_eq!(cfg.params.gamma, 21.5);
        assert!(matches!(
            apply_override(&mut cfg, "gamma", "-2"),
            Err(ConfigError::InvariantViolation {
                invariant: "gamma > 0",
                ..
            })
        ));
        assert!(matches!(
            apply_override(&mut cfg, "gama", "1"),
            Err(ConfigError::UnknownKey { .. })
        ));
        // The failed override must not have clobbered the value.
        assert_eq!(cfg.params.gamma, 21.5);
    }

    #[test]
    fn unknown_section_is_rejected() {
        assert!(matches!(
            parse_config_str("[optics]\n"),
            Err(ConfigError::UnknownSection { line: 1, .. })
        ));
    }
}
