//! Run configuration: a line-oriented `key=value` file plus flag overrides.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub threads: usize,
    pub seed: u64,
    /// Wall-clock budget for the commands that can trade accuracy for time.
    pub budget_seconds: Option<f64>,
    /// Standard output when absent.
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            seed: 0,
            budget_seconds: None,
            output_path: None,
            format: Format::Csv,
        }
    }
}

pub fn parse_threads(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("threads must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(format!("bad thread count {s:?}: {e}")),
    }
}

pub fn parse_budget(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("budget must be a positive number of seconds, got {v}")),
        Err(e) => Err(format!("bad budget {s:?}: {e}")),
    }
}

/// Parse configuration text. Blank lines and lines starting with `#` are
/// skipped; every other line must be `key=value` with a known key.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let err = |reason: String| ConfigError::Parse { line, reason };
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got {body:?}")))?;
        let value = value.trim();
        match key.trim() {
            "threads" => cfg.threads = parse_threads(value).map_err(err)?,
            "seed" => cfg.seed = value.parse().map_err(|e| err(format!("bad seed {value:?}: {e}")))?,
            "budget_seconds" => cfg.budget_seconds = Some(parse_budget(value).map_err(err)?),
            "output_path" => cfg.output_path = Some(PathBuf::from(value)),
            "format" => cfg.format = value.parse().map_err(err)?,
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        assert_eq!(parse_config("").unwrap(), RunConfig::default());
        let cfg = parse_config("threads=4\nseed=42").unwrap();
        assert_eq!((cfg.threads, cfg.seed), (4, 42));
        assert_eq!(cfg.format, Format::Csv);
        let cfg = parse_config("# comment\n\nformat = json\nbudget_seconds=12.5\noutput_path=out.csv\n").unwrap();
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.budget_seconds, Some(12.5));
        assert_eq!(cfg.output_path, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn rejections_name_the_line() {
        let e = parse_config("threds=4").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 1, .. }), "{e}");
        assert!(e.to_string().contains("threds"));
        assert!(matches!(
            parse_config("seed=1\nthreads=0"),
            Err(ConfigError::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_config("seed"), Err(ConfigError::Parse { line: 1, .. })));
        assert!(matches!(
            parse_config("\nformat=xml"),
            Err(ConfigError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("budget_seconds=-1"),
            Err(ConfigError::Parse { line: 1, .. })
        ));
    }
}
