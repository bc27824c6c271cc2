//! Run configuration: a flat UTF-8 key-value file with dotted keys.
//!
//! Every key has a default, unknown keys are rejected, and the only
//! environment override is `QKZ_KIT_SEED`. The full canonical key set is
//! listed in [`RunConfig::canonical`], which is also what gets hashed into
//! the report's config digest.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qkz_core::C64;
use sha2::{Digest, Sha256};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(HarnessError::Config(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: C64,
    pub beta: C64,
    pub branch: i8,
    pub length: f64,
    pub n: usize,
    pub n_left: usize,
    pub range_lo: f64,
    pub range_hi: f64,
    pub samples: usize,
    pub seed: u64,
    pub qkz_m: usize,
    pub qkz_base_points: Vec<C64>,
    pub qkz_trunc: Vec<i64>,
    pub h_mode: String,
    pub h_table: Option<String>,
    pub suites: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub break_f: Option<String>,
    pub output_path: Option<String>,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: C64::new(1.0, 0.0),
            beta: C64::new(0.3, 0.0),
            branch: 1,
            length: 1.7,
            n: 4,
            n_left: 2,
            range_lo: -5.0,
            range_hi: 5.0,
            samples: 100,
            seed: 7,
            qkz_m: 1,
            qkz_base_points: vec![C64::new(0.9, 0.0)],
            qkz_trunc: vec![5, 10, 20, 40],
            h_mode: "gamma-asymptotic".to_string(),
            h_table: None,
            suites: Vec::new(),
            tolerances: BTreeMap::new(),
            break_f: None,
            output_path: None,
            output_format: OutputFormat::Json,
        }
    }
}

/// Parses complex literals: "1.5", "-0.3i", "1+0.5i", "2.0-0.13i".
pub fn parse_complex(raw: &str) -> Result<C64, HarnessError> {
    let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || HarnessError::Config(format!("cannot parse complex number '{raw}'"));
    if let Ok(re) = s.parse::<f64>() {
        return Ok(C64::new(re, 0.0));
    }
    if let Some(im_part) = s.strip_suffix('i') {
        // find the split between real and imaginary parts: the last +/-
        // that is not an exponent sign and not the leading sign
        let bytes = im_part.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        return match split {
            None => {
                let im = if im_part.is_empty() || im_part == "+" {
                    1.0
                } else if im_part == "-" {
                    -1.0
                } else {
                    im_part.parse::<f64>().map_err(|_| bad())?
                };
                Ok(C64::new(0.0, im))
            }
            Some(k) => {
                let re = im_part[..k].parse::<f64>().map_err(|_| bad())?;
                let im_str = &im_part[k..];
                let im = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse::<f64>().map_err(|_| bad())?
                };
                Ok(C64::new(re, im))
            }
        };
    }
    Err(bad())
}

impl RunConfig {
    /// Applies one dotted key; unknown keys are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let parse_f64 = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| HarnessError::Config(format!("bad float '{v}' for key '{key}'")))
        };
        let parse_usize = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| HarnessError::Config(format!("bad integer '{v}' for key '{key}'")))
        };
        match key {
            "coupling.alpha" => self.alpha = parse_complex(value)?,
            "coupling.beta" => self.beta = parse_complex(value)?,
            "coupling.branch" => {
                self.branch = match value {
                    "+1" | "1" | "plus" => 1,
                    "-1" | "minus" => -1,
                    other => {
                        return Err(HarnessError::Config(format!("bad branch '{other}'")));
                    }
                }
            }
            "coupling.length" => self.length = parse_f64(value)?,
            "system.n" => self.n = parse_usize(value)?,
            "system.n_left" => self.n_left = parse_usize(value)?,
            "kinematics.range_lo" => self.range_lo = parse_f64(value)?,
            "kinematics.range_hi" => self.range_hi = parse_f64(value)?,
            "kinematics.samples" => self.samples = parse_usize(value)?,
            "kinematics.seed" => {
                self.seed = value.parse::<u64>().map_err(|_| {
                    HarnessError::Config(format!("bad seed '{value}'"))
                })?
            }
            "qkz.m" => self.qkz_m = parse_usize(value)?,
            "qkz.base_points" => {
                self.qkz_base_points = value
                    .split(',')
                    .map(parse_complex)
                    .collect::<Result<Vec<_>, _>>()?
            }
            "qkz.trunc" => {
                self.qkz_trunc = value
                    .split(',')
                    .map(|v| {
                        v.trim().parse::<i64>().map_err(|_| {
                            HarnessError::Config(format!("bad truncation '{v}'"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
            "qkz.h_mode" => {
                if value != "gamma-asymptotic" && value != "user-table" {
                    return Err(HarnessError::Config(format!("bad h_mode '{value}'")));
                }
                self.h_mode = value.to_string();
            }
            "qkz.h_table" => self.h_table = Some(value.to_string()),
            "suites.run" => {
                self.suites = value.split(',').map(|s| s.trim().to_string()).collect()
            }
            "output.path" => self.output_path = Some(value.to_string()),
            "output.format" => self.output_format = OutputFormat::parse(value)?,
            _ => {
                if let Some(suite) = key.strip_prefix("tolerance.") {
                    self.tolerances.insert(suite.to_string(), parse_f64(value)?);
                } else {
                    return Err(HarnessError::Config(format!("unknown key '{key}'")));
                }
            }
        }
        Ok(())
    }

    /// Parses the key-value text format ('#' comments, 'key = value').
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.apply_env();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_env(&mut self) {
        if let Ok(seed) = std::env::var("QKZ_KIT_SEED") {
            if let Ok(seed) = seed.parse::<u64>() {
                self.seed = seed;
            }
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n == 0 || self.n > 12 {
            return Err(HarnessError::Config(format!("system.n {} outside 1..=12", self.n)));
        }
        if self.n_left > self.n {
            return Err(HarnessError::Config("system.n_left exceeds system.n".into()));
        }
        if !(self.length > 0.0) {
            return Err(HarnessError::Config("coupling.length must be positive".into()));
        }
        if self.range_lo >= self.range_hi {
            return Err(HarnessError::Config("kinematics range is empty".into()));
        }
        if let Some(b) = &self.break_f {
            if b != "quadratic" {
                return Err(HarnessError::Config(format!("unknown break-f mode '{b}'")));
            }
        }
        if self.qkz_base_points.len() < self.qkz_m {
            return Err(HarnessError::Config(
                "qkz.base_points shorter than qkz.m".into(),
            ));
        }
        if self.h_mode == "user-table" && self.h_table.is_none() {
            return Err(HarnessError::Config(
                "qkz.h_mode = user-table requires qkz.h_table".into(),
            ));
        }
        Ok(())
    }

    /// Canonical text rendering: every key, sorted, one per line.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let c = |z: C64| format!("{}{}{}i", z.re, if z.im < 0.0 { "" } else { "+" }, z.im);
        let _ = writeln!(s, "coupling.alpha = {}", c(self.alpha));
        let _ = writeln!(s, "coupling.beta = {}", c(self.beta));
        let _ = writeln!(s, "coupling.branch = {:+}", self.branch);
        let _ = writeln!(s, "coupling.length = {}", self.length);
        let _ = writeln!(s, "kinematics.range_hi = {}", self.range_hi);
        let _ = writeln!(s, "kinematics.range_lo = {}", self.range_lo);
        let _ = writeln!(s, "kinematics.samples = {}", self.samples);
        let _ = writeln!(s, "kinematics.seed = {}", self.seed);
        let _ = writeln!(s, "qkz.base_points = {}", self.qkz_base_points.iter().map(|&z| c(z)).collect::<Vec<_>>().join(","));
        let _ = writeln!(s, "qkz.h_mode = {}", self.h_mode);
        if let Some(t) = &self.h_table {
            let _ = writeln!(s, "qkz.h_table = {t}");
        }
        let _ = writeln!(s, "qkz.m = {}", self.qkz_m);
        let _ = writeln!(s, "qkz.trunc = {}", self.qkz_trunc.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","));
        let _ = writeln!(s, "suites.run = {}", self.suites.join(","));
        let _ = writeln!(s, "system.n = {}", self.n);
        let _ = writeln!(s, "system.n_left = {}", self.n_left);
        for (k, v) in &self.tolerances {
            let _ = writeln!(s, "tolerance.{k} = {v}");
        }
        if let Some(b) = &self.break_f {
            let _ = writeln!(s, "break_f = {b}");
        }
        s
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical().as_bytes());
        let out = h.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn tolerance_or(&self, suite: &str, default: f64) -> f64 {
        self.tolerances.get(suite).copied().unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let cfg = RunConfig::parse(
            "# comment\ncoupling.alpha = 2.0\nsystem.n = 3\nsystem.n_left = 1\nqkz.trunc = 5, 10\n",
        )
        .unwrap();
        assert_eq!(cfg.alpha, C64::new(2.0, 0.0));
        assert_eq!(cfg.n, 3);
        assert_eq!(cfg.qkz_trunc, vec![5, 10]);
        assert!(RunConfig::parse("nonsense.key = 1\n").is_err());
        assert!(RunConfig::parse("system.n = 40\n").is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5").unwrap(), C64::new(1.5, 0.0));
        assert_eq!(parse_complex("-0.3i").unwrap(), C64::new(0.0, -0.3));
        assert_eq!(parse_complex("1+0.5i").unwrap(), C64::new(1.0, 0.5));
        assert_eq!(parse_complex("2.0-0.13i").unwrap(), C64::new(2.0, -0.13));
        assert_eq!(parse_complex("1e-3+2e-4i").unwrap(), C64::new(1e-3, 2e-4));
        assert!(parse_complex("pizza").is_err());
    }

    #[test]
    fn digest_stable_and_sensitive() {
        let a = RunConfig::default();
        let mut b = RunConfig::default();
        assert_eq!(a.digest(), b.digest());
        b.seed = 8;
        assert_ne!(a.digest(), b.digest());
    }
}
