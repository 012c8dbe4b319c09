//! Run configuration: a flat `key = value` file merged with command-line
//! overrides, then parsed into typed settings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ctrw_core::{JumpLaw, MarketModel, OptionSpec, Side, WaitingLaw};

use crate::error::CliError;

pub const DEFAULT_PRECISION: usize = 12;

/// Raw settings; later inserts replace earlier ones.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Reads `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut settings = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let key = match key.trim().replace('_', "-").as_str() {
                "n-paths" => "paths".to_string(),
                other => other.to_string(),
            };
            if key.is_empty() {
                return Err(format!("line {}: empty key", n + 1));
            }
            settings.set(&key, value.trim());
        }
        Ok(settings)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn number(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|v| v.parse::<f64>().map_err(|_| CliError::Invalid(format!("{key}: expected a number, got '{v}'"))))
            .transpose()
    }

    pub fn number_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    pub fn required(&self, key: &str) -> Result<f64, CliError> {
        self.number(key)?.ok_or_else(|| CliError::Invalid(format!("{key}: missing")))
    }

    pub fn integer_or(&self, key: &str, default: u64) -> Result<u64, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => {
                // Accept 1e6-style counts as long as they are whole.
                let x: f64 = v.parse().map_err(|_| CliError::Invalid(format!("{key}: expected an integer, got '{v}'")))?;
                if x.fract() != 0.0 || x < 0.0 || x > u64::MAX as f64 {
                    return Err(CliError::Invalid(format!("{key}: expected a non-negative integer, got '{v}'")));
                }
                Ok(x as u64)
            }
        }
    }

    /// Comma-separated numbers, or `start:stop:step` for an inclusive grid.
    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        let Some(v) = self.get(key) else {
            return Ok(default.to_vec());
        };
        let bad = || CliError::Invalid(format!("{key}: expected 'a,b,c' or 'start:stop:step', got '{v}'"));
        if v.contains(':') {
            let parts: Vec<f64> = v.split(':').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
            let [start, stop, step] = parts[..] else { return Err(bad()) };
            if !(step.is_finite() && step > 0.0 && stop >= start) {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            return Ok((0..=count).map(|i| start + i as f64 * step).collect());
        }
        v.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())
    }

    pub fn precision(&self) -> Result<usize, CliError> {
        let p = self.integer_or("precision", DEFAULT_PRECISION as u64)?;
        if !(1..=17).contains(&p) {
            return Err(CliError::Invalid(format!("precision: expected 1..=17 digits, got {p}")));
        }
        Ok(p as usize)
    }

    pub fn output(&self) -> Option<PathBuf> {
        self.get("output").map(PathBuf::from)
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key) {
            None | Some("false") | Some("0") => Ok(false),
            Some("true") | Some("1") => Ok(true),
            Some(v) => Err(CliError::Invalid(format!("{key}: expected true or false, got '{v}'"))),
        }
    }
}

/// Transaction-rate setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    /// The martingale rate.
    Auto,
    /// A fixed rate; the model is then not risk-neutral.
    Fixed(f64),
}

impl Lambda {
    pub fn from_settings(settings: &Settings) -> Result<Self, CliError> {
        match settings.get("lambda") {
            None | Some("auto") => Ok(Lambda::Auto),
            Some(v) => {
                let rate: f64 = v.parse().map_err(|_| CliError::Invalid(format!("lambda: expected 'auto' or a number, got '{v}'")))?;
                if !(rate.is_finite() && rate > 0.0) {
                    return Err(CliError::Invalid(format!("lambda: must be > 0, got {rate}")));
                }
                Ok(Lambda::Fixed(rate))
            }
        }
    }
}

/// Builds the market model from `rho`, `gamma`, `r`, `lambda` and the given
/// spot.
pub fn model(settings: &Settings, spot: f64) -> Result<MarketModel, CliError> {
    let jumps = JumpLaw::new(settings.required("rho")?, settings.required("gamma")?)?;
    let r = settings.required("r")?;
    let model = match Lambda::from_settings(settings)? {
        Lambda::Auto => MarketModel::risk_neutral(jumps, r, spot)?,
        Lambda::Fixed(rate) => MarketModel::physical(jumps, WaitingLaw::exponential(rate)?, r, spot)?,
    };
    Ok(model)
}

pub fn option_spec(settings: &Settings) -> Result<OptionSpec, CliError> {
    let strike = settings.required("strike")?;
    let spec = match settings.get("option") {
        Some("put") => OptionSpec::VanillaPut { strike },
        Some("call") => OptionSpec::VanillaCall { strike },
        Some("binary-call") => OptionSpec::BinaryCall { k0: strike },
        Some("binary-put") => OptionSpec::BinaryPut { k0: strike },
        Some(other) => {
            return Err(CliError::Invalid(format!("option: expected put, call, binary-call or binary-put, got '{other}'")))
        }
        None => return Err(CliError::Invalid("option: missing (use --put, --call, --binary-call or --binary-put)".into())),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn side(settings: &Settings) -> Result<Side, CliError> {
    match settings.get("side") {
        Some("up") => Ok(Side::Up),
        Some("down") => Ok(Side::Down),
        Some(other) => Err(CliError::Invalid(format!("side: expected up or down, got '{other}'"))),
        None => Err(CliError::Invalid("side: missing".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_underscores() {
        let s = Settings::parse("# model\nrho = 2\ngamma=3 # down tail\n\nn_paths = 1e6\n").unwrap();
        assert_eq!(s.get("rho"), Some("2"));
        assert_eq!(s.get("gamma"), Some("3"));
        assert_eq!(s.integer_or("paths", 0).unwrap(), 1_000_000);
        assert!(Settings::parse("rho 2").is_err());
    }

    #[test]
    fn later_values_win() {
        let mut s = Settings::parse("rho = 2").unwrap();
        s.set("rho", "5");
        assert_eq!(s.required("rho").unwrap(), 5.0);
    }

    #[test]
    fn lists_and_grids() {
        let mut s = Settings::default();
        s.set("times", "1, 10,100");
        assert_eq!(s.list_or("times", &[]).unwrap(), vec![1.0, 10.0, 100.0]);
        s.set("grid", "0.85:1.5:0.05");
        let grid = s.list_or("grid", &[]).unwrap();
        assert_eq!(grid.len(), 14);
        assert!((grid[13] - 1.5).abs() < 1e-12);
        s.set("grid", "1:0:0.1");
        assert!(s.list_or("grid", &[]).is_err());
    }

    #[test]
    fn field_precise_messages() {
        let mut s = Settings::default();
        s.set("rho", "two");
        assert!(s.required("rho").unwrap_err().to_string().contains("rho"));
        s.set("lambda", "-1");
        assert!(Lambda::from_settings(&s).unwrap_err().to_string().contains("lambda"));
        s.set("precision", "40");
        assert!(s.precision().unwrap_err().to_string().contains("precision"));
    }
}
