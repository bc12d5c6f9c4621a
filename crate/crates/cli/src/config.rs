use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::anyhow;

use crate::failure::{invalid, CmdResult, Context};

/// Environment variable consulted for the seed when neither a flag nor the
/// config file sets one.
pub const SEED_ENV: &str = "NETCLASS_SEED";
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Copy)]
enum Kind {
    Unsigned,
    Real,
}

/// Keys accepted in a config file. Each mirrors the flag of the same name
/// with dashes replaced by underscores.
const KEYS: &[(&str, Kind)] = &[
    ("seed", Kind::Unsigned),
    ("workers", Kind::Unsigned),
    ("trees", Kind::Unsigned),
    ("features_per_split", Kind::Unsigned),
    ("min_split", Kind::Unsigned),
    ("folds", Kind::Unsigned),
    ("perplexity", Kind::Real),
    ("iterations", Kind::Unsigned),
    ("learning_rate", Kind::Real),
    ("exaggeration", Kind::Real),
    ("exaggeration_iters", Kind::Unsigned),
    ("k", Kind::Unsigned),
    ("restarts", Kind::Unsigned),
    ("max_iter", Kind::Unsigned),
    ("merge_threshold", Kind::Real),
];

/// Values from a flat `key = value` config file. Blank lines and lines
/// starting with `#` are ignored.
#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> CmdResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .invalid_ctx(format!("reading config {}", p.display()))?;
                Self::parse(&text).invalid_ctx(format!("config {}", p.display()))
            }
        }
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let kind = KEYS
                .iter()
                .find(|(k, _)| *k == key)
                .map(|&(_, kind)| kind)
                .ok_or_else(|| anyhow!("line {}: unknown key {key:?}", i + 1))?;
            let ok = match kind {
                Kind::Unsigned => value.parse::<u64>().is_ok(),
                Kind::Real => value.parse::<f64>().is_ok_and(f64::is_finite),
            };
            if !ok {
                return Err(anyhow!("line {}: invalid value {value:?} for {key}", i + 1));
            }
            if values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(anyhow!("line {}: duplicate key {key:?}", i + 1));
            }
        }
        Ok(Self { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> CmdResult<Option<T>>
    where
        T::Err: Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| invalid(anyhow!("config key {key}: {e}")))
            })
            .transpose()
    }

    /// Flag value, else config value, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CmdResult<T>
    where
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    /// Flag value, else config value, if either is present.
    pub fn optional<T: FromStr>(&self, flag: Option<T>, key: &str) -> CmdResult<Option<T>>
    where
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    /// Seed from the flag, the config file, the environment, then the
    /// built-in default, in that order.
    pub fn seed(&self, flag: Option<u64>) -> CmdResult<u64> {
        if let Some(s) = flag {
            return Ok(s);
        }
        if let Some(s) = self.get("seed")? {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| invalid(anyhow!("{SEED_ENV}={v:?} is not an unsigned integer"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }
}
