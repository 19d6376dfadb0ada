use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use arveson_core::ccr_matrix::Scheme;

use crate::CliError;

/// Option values as strings, keyed by long flag name.
pub type Settings = BTreeMap<String, String>;

pub const KEYS: [&str; 16] = [
    "seed",
    "scheme",
    "dims",
    "t",
    "alpha",
    "m",
    "samples",
    "n-list",
    "delta-list",
    "out",
    "format",
    "threads",
    "timing",
    "profile",
    "norm-from",
    "lemma43-from",
];

pub fn defaults() -> Settings {
    let pairs = [
        ("seed", "1".to_string()),
        ("scheme", "oscillator,grid".to_string()),
        ("dims", "64,128,256,512,1024".to_string()),
        ("t", "0.5".to_string()),
        ("alpha", format!("{}", 2.0 * PI / 3.0)),
        ("m", "16384".to_string()),
        ("samples", "10000".to_string()),
        ("n-list", "8,16,32,64".to_string()),
        ("delta-list", "2^-8,2^-10,2^-12".to_string()),
        ("threads", "0".to_string()),
        ("timing", "false".to_string()),
        ("profile", "w".to_string()),
    ];
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Parses a flat `key = value` file; `#` starts a comment.
pub fn read_config(path: &Path) -> Result<Settings, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Settings, CliError> {
    let mut out = Settings::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Validation(format!("config line {}: unknown key {key}", i + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

/// Defaults, overlaid by the config file, overlaid by flags.
pub fn merge(config: Settings, flags: Settings) -> Settings {
    let mut s = defaults();
    s.extend(config);
    s.extend(flags);
    s
}

pub struct Resolved<'a>(pub &'a Settings);

impl Resolved<'_> {
    fn raw(&self, key: &str) -> Result<&str, CliError> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CliError::Validation(format!("--{key} is required")))
    }

    pub fn opt(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| CliError::Validation(format!("--{key}: cannot parse {raw:?}")))
    }

    pub fn positive_usize(&self, key: &str) -> Result<usize, CliError> {
        let v: usize = self.get(key)?;
        if v == 0 {
            return Err(CliError::Validation(format!("--{key} must be positive")));
        }
        Ok(v)
    }

    pub fn positive_f64(&self, key: &str) -> Result<f64, CliError> {
        let v = parse_real(self.raw(key)?).ok_or_else(|| bad(key, self.0))?;
        if !(v > 0.0) {
            return Err(CliError::Validation(format!("--{key} must be positive")));
        }
        Ok(v)
    }

    pub fn bool(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key)? {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            other => Err(CliError::Validation(format!("--{key}: expected a boolean, got {other:?}"))),
        }
    }

    pub fn list<T>(&self, key: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, CliError> {
        let items: Option<Vec<T>> = self.raw(key)?.split(',').map(|s| parse(s.trim())).collect();
        match items {
            Some(v) if !v.is_empty() => Ok(v),
            _ => Err(bad(key, self.0)),
        }
    }

    pub fn schemes(&self) -> Result<Vec<Scheme>, CliError> {
        self.list("scheme", |s| s.parse().ok())
    }

    pub fn format(&self) -> Result<Format, CliError> {
        match self.opt("format") {
            None => Ok(Format::Csv),
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(CliError::Validation(format!("--format: expected csv or json, got {other:?}"))),
        }
    }

    /// `--out`, or `stem.ext` in `$ARVESON_OUT_DIR` (default: the working directory).
    pub fn out_path(&self, stem: &str, format: Format) -> PathBuf {
        match self.opt("out") {
            Some(p) => PathBuf::from(p),
            None => {
                let dir = std::env::var_os("ARVESON_OUT_DIR").map_or_else(|| PathBuf::from("."), PathBuf::from);
                dir.join(format!("{stem}.{}", format.extension()))
            }
        }
    }
}

fn bad(key: &str, s: &Settings) -> CliError {
    CliError::Validation(format!("--{key}: cannot parse {:?}", s.get(key).map_or("", String::as_str)))
}

/// A decimal number or a power of two written `2^k`.
pub fn parse_real(s: &str) -> Option<f64> {
    if let Some(exp) = s.strip_prefix("2^") {
        let k: i32 = exp.parse().ok()?;
        return Some(2f64.powi(k));
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}
