//! Flat key-value configuration files.
//!
//! Exactly the ten parameter keys are accepted: `R, lambda, phi1, phi2,
//! y1, y2, omega, I, W, sigma`. Unknown or repeated keys are errors so a
//! misspelled parameter can never silently fall back to its default.
//! Blank lines and `#` comments are ignored.

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Optional per-field overrides layered over a base parameter set.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamOverrides {
    pub r: Option<f64>,
    pub lambda: Option<f64>,
    pub phi1: Option<f64>,
    pub phi2: Option<f64>,
    pub y1: Option<f64>,
    pub y2: Option<f64>,
    pub omega: Option<f64>,
    pub invest: Option<f64>,
    pub wealth: Option<f64>,
    pub sigma: Option<f64>,
}

impl ParamOverrides {
    /// Applies the overrides on top of `base`, leaving unset fields alone.
    pub fn apply(&self, base: &ModelParams) -> ModelParams {
        ModelParams {
            r: self.r.unwrap_or(base.r),
            lambda: self.lambda.unwrap_or(base.lambda),
            phi1: self.phi1.unwrap_or(base.phi1),
            phi2: self.phi2.unwrap_or(base.phi2),
            y1: self.y1.unwrap_or(base.y1),
            y2: self.y2.unwrap_or(base.y2),
            omega: self.omega.unwrap_or(base.omega),
            invest: self.invest.unwrap_or(base.invest),
            wealth: self.wealth.unwrap_or(base.wealth),
            sigma: self.sigma.unwrap_or(base.sigma),
        }
    }

    fn slot(&mut self, key: &str) -> Option<&mut Option<f64>> {
        match key {
            "R" => Some(&mut self.r),
            "lambda" => Some(&mut self.lambda),
            "phi1" => Some(&mut self.phi1),
            "phi2" => Some(&mut self.phi2),
            "y1" => Some(&mut self.y1),
            "y2" => Some(&mut self.y2),
            "omega" => Some(&mut self.omega),
            "I" => Some(&mut self.invest),
            "W" => Some(&mut self.wealth),
            "sigma" => Some(&mut self.sigma),
            _ => None,
        }
    }
}

/// Parses a config file into overrides. An empty file yields no overrides.
pub fn parse_config(path: &Path) -> Result<ParamOverrides> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        message: format!("cannot read config: {e}"),
    })?;
    parse_config_str(&text, &path.display().to_string())
}

pub fn parse_config_str(text: &str, path: &str) -> Result<ParamOverrides> {
    let mut overrides = ParamOverrides::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Parse {
                path: path.to_string(),
                line,
                message: format!("expected key=value, got {content:?}"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        let Some(slot) = overrides.slot(key) else {
            return Err(Error::Parse {
                path: path.to_string(),
                line,
                message: format!(
                    "unknown key {key:?}; expected one of R, lambda, phi1, phi2, y1, y2, omega, I, W, sigma"
                ),
            });
        };
        if slot.is_some() {
            return Err(Error::Parse {
                path: path.to_string(),
                line,
                message: format!("duplicate key {key:?}"),
            });
        }
        let parsed: f64 = value.parse().map_err(|_| Error::Parse {
            path: path.to_string(),
            line,
            message: format!("cannot parse {value:?} as a number for key {key:?}"),
        })?;
        *slot = Some(parsed);
    }
    Ok(overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_override_leaves_defaults_alone() {
        let ov = parse_config_str("lambda = 0.2\n", "test").unwrap();
        let p = ov.apply(&ModelParams::default());
        assert_eq!(p.lambda, 0.2);
        assert_eq!(p.r, 1.05);
        assert_eq!(p.wealth, 10.0);
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = parse_config_str("lambdaa = 0.2\n", "test").unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 1);
                assert!(message.contains("unknown key"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_has_no_overrides() {
        let ov = parse_config_str("", "test").unwrap();
        assert_eq!(ov, ParamOverrides::default());
        let p = ov.apply(&ModelParams::default());
        assert_eq!(p, ModelParams::default());
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "# base case\n\nR = 1.1   # gross rate\n  sigma=2\n";
        let ov = parse_config_str(text, "test").unwrap();
        assert_eq!(ov.r, Some(1.1));
        assert_eq!(ov.sigma, Some(2.0));
    }

    #[test]
    fn duplicate_key_is_an_error() {
        let err = parse_config_str("R=1.1\nR=1.2\n", "test").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn bad_number_reports_the_line() {
        let err = parse_config_str("R=1.1\nW=ten\n", "test").unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("ten"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_separator_is_an_error() {
        assert!(parse_config_str("R 1.1\n", "test").is_err());
    }

    #[test]
    fn all_ten_keys_round_trip() {
        let text =
            "R=1.1\nlambda=0.2\nphi1=0.3\nphi2=0.4\ny1=11\ny2=12\nomega=1\nI=4\nW=9\nsigma=2\n";
        let p = parse_config_str(text, "test")
            .unwrap()
            .apply(&ModelParams::default());
        assert_eq!(p.r, 1.1);
        assert_eq!(p.lambda, 0.2);
        assert_eq!(p.phi1, 0.3);
        assert_eq!(p.phi2, 0.4);
        assert_eq!(p.y1, 11.0);
        assert_eq!(p.y2, 12.0);
        assert_eq!(p.omega, 1.0);
        assert_eq!(p.invest, 4.0);
        assert_eq!(p.wealth, 9.0);
        assert_eq!(p.sigma, 2.0);
    }
}
