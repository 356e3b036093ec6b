//! `key = value` config files and list arguments.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::CliError;

/// Values accepted in a `--config` file. Command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub format: Option<crate::Format>,
    pub slack: Option<f64>,
    pub budget: Option<u64>,
    pub restarts: Option<usize>,
    pub output: Option<PathBuf>,
    pub sidecar: Option<PathBuf>,
}

const KEYS: &[&str] = &["seed", "workers", "format", "slack", "budget", "restarts", "output", "sidecar"];

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    raw.parse()
        .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))
}

impl FromStr for FileConfig {
    type Err = CliError;

    /// Lines of `key = value`; `#` starts a comment, values may be double-quoted.
    fn from_str(text: &str) -> Result<Self, CliError> {
        let mut seen = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
            let k = k.trim();
            let v = v.trim();
            let v = v
                .strip_prefix('"')
                .and_then(|s| s.strip_suffix('"'))
                .unwrap_or(v);
            if !KEYS.contains(&k) {
                return Err(CliError::Usage(format!("unknown config key {k:?}")));
            }
            if seen.insert(k.to_string(), v.to_string()).is_some() {
                return Err(CliError::Usage(format!("config key {k} given twice")));
            }
        }
        let mut cfg = FileConfig::default();
        for (k, v) in &seen {
            match k.as_str() {
                "seed" => cfg.seed = Some(value(k, v)?),
                "workers" => cfg.workers = Some(value(k, v)?),
                "format" => cfg.format = Some(value(k, v)?),
                "slack" => cfg.slack = Some(value(k, v)?),
                "budget" => cfg.budget = Some(value(k, v)?),
                "restarts" => cfg.restarts = Some(value(k, v)?),
                "output" => cfg.output = Some(PathBuf::from(v)),
                "sidecar" => cfg.sidecar = Some(PathBuf::from(v)),
                _ => unreachable!("checked against KEYS"),
            }
        }
        Ok(cfg)
    }
}

/// A list of integers such as `1,3,5`, `1..6` or `2^4..2^12` (ranges inclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<u64>);

const MAX_LIST: usize = 1 << 16;

fn atom(s: &str) -> Result<(u64, bool), String> {
    match s.trim().split_once('^') {
        Some((b, e)) => {
            if b.trim() != "2" {
                return Err(format!("only powers of 2 are supported, got {s:?}"));
            }
            let e: u32 = e.trim().parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            1u64.checked_shl(e)
                .filter(|_| e < 64)
                .map(|v| (v, true))
                .ok_or_else(|| format!("2^{e} overflows"))
        }
        None => s.trim().parse().map(|v| (v, false)).map_err(|_| format!("bad integer {s:?}")),
    }
}

impl FromStr for IntList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for item in s.split(',') {
            match item.split_once("..") {
                Some((a, b)) => {
                    let ((a, pa), (b, pb)) = (atom(a)?, atom(b)?);
                    if a > b {
                        return Err(format!("empty range {item:?}"));
                    }
                    if pa && pb {
                        let mut v = a;
                        while v <= b {
                            out.push(v);
                            v = v.saturating_mul(2);
                            if v == u64::MAX {
                                break;
                            }
                        }
                    } else {
                        if b - a >= MAX_LIST as u64 {
                            return Err(format!("range {item:?} is too long"));
                        }
                        out.extend(a..=b);
                    }
                }
                None => out.push(atom(item)?.0),
            }
            if out.len() > MAX_LIST {
                return Err("list is too long".into());
            }
        }
        if out.is_empty() {
            return Err("empty list".into());
        }
        Ok(IntList(out))
    }
}

impl fmt::Display for IntList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for IntList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}
