//! Flat key=value experiment configuration.
//!
//! Grammar: one `key = value` per line; `#` starts a comment; blank lines
//! ignored. A `version` key is required (currently `1`). Rationals are
//! written `p/q` or as plain integers. Lists are comma-separated.

use std::collections::BTreeMap;

use kglab::rational::Rational;
use kglab::{KgError, LatticeMode};

/// CLI-level failure, carrying the process exit code contract:
/// validation problems exit 2, unsupported-exactness problems exit 3.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Unsupported(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Io(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Unsupported(m) | CliError::Io(m) => m,
        }
    }
}

impl From<KgError> for CliError {
    fn from(e: KgError) -> Self {
        match e {
            KgError::UnsupportedScale(m) => CliError::Unsupported(format!(
                "unsupported scale in exact mode: {m}"
            )),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Measure,
    Pairsum,
    Qia,
    Inherit,
    Simulate,
    Gcdsum,
    Transfer,
    Verify,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> CliResult<Self> {
        Ok(match s {
            "measure" => Self::Measure,
            "pairsum" => Self::Pairsum,
            "qia" => Self::Qia,
            "inherit" => Self::Inherit,
            "simulate" => Self::Simulate,
            "gcdsum" => Self::Gcdsum,
            "transfer" => Self::Transfer,
            "verify" => Self::Verify,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown experiment kind '{other}'"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Measure => "measure",
            Self::Pairsum => "pairsum",
            Self::Qia => "qia",
            Self::Inherit => "inherit",
            Self::Simulate => "simulate",
            Self::Gcdsum => "gcdsum",
            Self::Transfer => "transfer",
            Self::Verify => "verify",
        }
    }
}

/// Parsed configuration: the raw key/value map plus the original text
/// (echoed into the manifest for reproducibility).
#[derive(Debug, Clone)]
pub struct Config {
    pub text: String,
    map: BTreeMap<String, String>,
    consumed: std::cell::RefCell<std::collections::BTreeSet<String>>,
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Config> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Validation(format!(
                    "line {}: expected 'key = value', got '{raw}'",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if map.insert(key.clone(), value).is_some() {
                return Err(CliError::Validation(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }
        let cfg = Config {
            text: text.to_string(),
            map,
            consumed: Default::default(),
        };
        match cfg.get("version")? {
            "1" => {}
            v => {
                return Err(CliError::Validation(format!(
                    "unsupported config version '{v}' (expected 1)"
                )))
            }
        }
        Ok(cfg)
    }

    fn get(&self, key: &str) -> CliResult<&str> {
        self.consumed.borrow_mut().insert(key.to_string());
        self.map
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| CliError::Validation(format!("missing required key '{key}'")))
    }

    fn get_opt(&self, key: &str) -> Option<&str> {
        self.consumed.borrow_mut().insert(key.to_string());
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn kind(&self) -> CliResult<ExperimentKind> {
        ExperimentKind::parse(self.get("experiment")?)
    }

    pub fn u32_key(&self, key: &str) -> CliResult<u32> {
        self.get(key)?
            .parse()
            .map_err(|_| CliError::Validation(format!("key '{key}' must be a small integer")))
    }

    pub fn u64_key(&self, key: &str) -> CliResult<u64> {
        self.get(key)?
            .parse()
            .map_err(|_| CliError::Validation(format!("key '{key}' must be an integer")))
    }

    pub fn u64_opt(&self, key: &str) -> CliResult<Option<u64>> {
        self.get_opt(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Validation(format!("key '{key}' must be an integer")))
            })
            .transpose()
    }

    pub fn u32_default(&self, key: &str, default: u32) -> CliResult<u32> {
        match self.get_opt(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| CliError::Validation(format!("key '{key}' must be a small integer"))),
        }
    }

    pub fn rational_key(&self, key: &str) -> CliResult<Rational> {
        parse_rational(self.get(key)?)
            .ok_or_else(|| CliError::Validation(format!("key '{key}' must be a rational p/q")))
    }

    pub fn rational_opt(&self, key: &str) -> CliResult<Option<Rational>> {
        self.get_opt(key)
            .map(|v| {
                parse_rational(v)
                    .ok_or_else(|| CliError::Validation(format!("key '{key}' must be a rational p/q")))
            })
            .transpose()
    }

    pub fn rational_default(&self, key: &str, default: Rational) -> CliResult<Rational> {
        Ok(self.rational_opt(key)?.unwrap_or(default))
    }

    pub fn rational_list(&self, key: &str) -> CliResult<Vec<Rational>> {
        self.get(key)?
            .split(',')
            .map(|p| {
                parse_rational(p.trim()).ok_or_else(|| {
                    CliError::Validation(format!("key '{key}' must be a comma list of rationals"))
                })
            })
            .collect()
    }

    pub fn i64_list(&self, key: &str) -> CliResult<Vec<i64>> {
        self.get(key)?
            .split(',')
            .map(|p| {
                p.trim().parse().map_err(|_| {
                    CliError::Validation(format!("key '{key}' must be a comma list of integers"))
                })
            })
            .collect()
    }

    pub fn schedule(&self) -> CliResult<Vec<u64>> {
        let sched: Vec<u64> = self
            .get("schedule")?
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim().parse().map_err(|_| {
                    CliError::Validation("schedule must be a comma list of integers".into())
                })
            })
            .collect::<CliResult<_>>()?;
        if sched.is_empty() {
            return Err(CliError::Validation("schedule must not be empty".into()));
        }
        if sched[0] == 0 || sched.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Validation(
                "schedule must be strictly increasing and positive".into(),
            ));
        }
        Ok(sched)
    }

    pub fn mode(&self) -> CliResult<LatticeMode> {
        match self.get_opt("mode").unwrap_or("full") {
            "full" => Ok(LatticeMode::Full),
            "orthant" => Ok(LatticeMode::Orthant),
            other => Err(CliError::Validation(format!(
                "mode must be 'full' or 'orthant', got '{other}'"
            ))),
        }
    }

    pub fn string_key(&self, key: &str) -> CliResult<String> {
        Ok(self.get(key)?.to_string())
    }

    pub fn string_opt(&self, key: &str) -> Option<String> {
        self.get_opt(key).map(|s| s.to_string())
    }

    /// Reject keys that no experiment consumed: typos should not pass
    /// silently.
    pub fn finish(&self) -> CliResult<()> {
        let consumed = self.consumed.borrow();
        let unknown: Vec<&String> =
            self.map.keys().filter(|k| !consumed.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(format!(
                "unknown config keys: {}",
                unknown.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            )))
        }
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        Some(Rational::new(p.into(), q.into()))
    } else {
        let p: i64 = s.parse().ok()?;
        Some(Rational::from_integer(p.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kglab::rational::rat;

    #[test]
    fn parses_basic_config() {
        let cfg = Config::parse(
            "# comment\nversion = 1\nexperiment = gcdsum\nq_max = 100\nm = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.kind().unwrap(), ExperimentKind::Gcdsum);
        assert_eq!(cfg.u64_key("q_max").unwrap(), 100);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(Config::parse("experiment = gcdsum\n").is_err()); // no version
        assert!(Config::parse("version = 2\n").is_err());
        assert!(Config::parse("version = 1\nfoo\n").is_err());
        assert!(Config::parse("version = 1\na = 1\na = 2\n").is_err());
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/5"), Some(rat(1, 5)));
        assert_eq!(parse_rational(" -3 / 4 "), Some(rat(-3, 4)));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn schedule_validation() {
        let cfg =
            Config::parse("version = 1\nschedule = 4,8,16\n").unwrap();
        assert_eq!(cfg.schedule().unwrap(), vec![4, 8, 16]);
        let cfg = Config::parse("version = 1\nschedule = \n").unwrap();
        assert!(cfg.schedule().is_err());
        let cfg = Config::parse("version = 1\nschedule = 8,4\n").unwrap();
        assert!(cfg.schedule().is_err());
    }
}
