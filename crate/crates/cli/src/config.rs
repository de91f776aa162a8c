//! Run configuration: built-in defaults, then the precision environment
//! variable, then a `key=value` config file, then command-line flags.

use std::fmt;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use ellcoh::Curve;

/// Environment variable holding the default working precision.
pub const PREC_ENV: &str = "ELLCOH_PREC";

pub const DEFAULT_CURVE: &str = "0,0,0,-1,1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

/// A malformed user input that is not a library parse error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub curve: Curve,
    pub prec: usize,
    pub polecap: u32,
    pub format: Format,
    /// Directions with `|λ|+|μ| ≤ grid` form the default direction grid.
    pub grid: i64,
    pub split_budget: i64,
    pub subgroup_budget: u64,
}

/// Values given on the command line; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub curve: Option<String>,
    pub prec: Option<usize>,
    pub polecap: Option<u32>,
    pub format: Option<Format>,
    pub grid: Option<i64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            curve: DEFAULT_CURVE.parse().expect("default curve is nonsingular"),
            prec: 10,
            polecap: 2,
            format: Format::Json,
            grid: 3,
            split_budget: ellcoh::lattice::DEFAULT_SPLIT_BUDGET,
            subgroup_budget: 36,
        }
    }
}

impl RunConfig {
    pub fn resolve(
        env_prec: Option<String>,
        file: Option<&Path>,
        flags: &Overrides,
    ) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(v) = env_prec {
            cfg.set("prec", &v)
                .with_context(|| format!("in {PREC_ENV}"))?;
        }
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
            cfg.apply_file(&text)
                .with_context(|| format!("in config file {}", path.display()))?;
        }
        if let Some(c) = &flags.curve {
            cfg.set("curve", c)?;
        }
        if let Some(p) = flags.prec {
            cfg.prec = p;
        }
        if let Some(k) = flags.polecap {
            cfg.polecap = k;
        }
        if let Some(f) = flags.format {
            cfg.format = f;
        }
        if let Some(g) = flags.grid {
            cfg.grid = g;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("line {}: expected key=value", n + 1)))?;
            self.set(key.trim(), value.trim())
                .with_context(|| format!("line {}", n + 1))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let int = |v: &str| -> Result<i64> {
            v.parse()
                .map_err(|_| usage(format!("{key}: expected an integer, found {v:?}")))
        };
        match key {
            "curve" => self.curve = value.parse()?,
            "prec" => {
                self.prec = int(value)?
                    .try_into()
                    .map_err(|_| usage("prec must be >= 0"))?
            }
            "polecap" => {
                self.polecap = int(value)?
                    .try_into()
                    .map_err(|_| usage("polecap must be >= 0"))?
            }
            "format" => {
                self.format = Format::from_str(value, true)
                    .map_err(|_| usage(format!("format must be json or tsv, found {value:?}")))?
            }
            "grid" => self.grid = int(value)?,
            "split_budget" => self.split_budget = int(value)?,
            "subgroup_budget" => {
                self.subgroup_budget = int(value)?
                    .try_into()
                    .map_err(|_| usage("subgroup_budget must be positive"))?
            }
            other => return Err(usage(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.prec < 2 {
            return Err(usage("precision must be at least 2"));
        }
        if self.polecap == 0 {
            return Err(usage("pole cap must be at least 1"));
        }
        if self.grid < 1 || self.split_budget < 1 || self.subgroup_budget < 1 {
            return Err(usage("grid and budgets must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let dir = std::env::temp_dir().join(format!("ellcoh-cfg-{}", std::process::id()));
        std::fs::write(&dir, "# comment\nprec = 14\npolecap=3\nformat=tsv\n").unwrap();
        let cfg = RunConfig::resolve(Some("12".into()), None, &Overrides::default()).unwrap();
        assert_eq!(cfg.prec, 12);
        let cfg = RunConfig::resolve(Some("12".into()), Some(&dir), &Overrides::default()).unwrap();
        assert_eq!((cfg.prec, cfg.polecap, cfg.format), (14, 3, Format::Tsv));
        let flags = Overrides {
            prec: Some(9),
            ..Overrides::default()
        };
        let cfg = RunConfig::resolve(Some("12".into()), Some(&dir), &flags).unwrap();
        assert_eq!(cfg.prec, 9);
        std::fs::remove_file(&dir).unwrap();
    }

    #[test]
    fn bad_inputs() {
        assert!(RunConfig::resolve(Some("x".into()), None, &Overrides::default()).is_err());
        let mut cfg = RunConfig::default();
        assert!(cfg.apply_file("nonsense").is_err());
        assert!(cfg.apply_file("colour=blue").is_err());
        let flags = Overrides {
            prec: Some(1),
            ..Overrides::default()
        };
        assert!(RunConfig::resolve(None, None, &flags).is_err());
    }
}
