//! Declarative experiment configs for the `bench` subcommand.
//!
//! Line-oriented `key = value` text; `#` starts a comment. Example:
//!
//! ```text
//! mode = twopass
//! epsilon = 0.1
//! gen = erdos_renyi:100:0.08
//! gen = triangle_chain:25
//! seeds = 0..10
//! oracle = true
//! out_csv = results.csv
//! ```
//!
//! Every generator spec is run once per seed; records land on stdout and
//! optionally in CSV and JSON files.

use crate::gen::GenSpec;
use std::fmt;
use std::ops::Range;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Twopass,
    Dynamic,
    Verify,
}

#[derive(Debug)]
pub struct BenchConfig {
    pub mode: Mode,
    pub gens: Vec<(String, GenSpec)>,
    pub seeds: Range<u64>,
    pub epsilon: String,
    pub k: Option<u64>,
    pub requery: Option<usize>,
    pub budget: Option<u64>,
    pub oracle: bool,
    pub out_csv: Option<String>,
    pub out_json: Option<String>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { line, message: message.into() }
}

fn parse_seeds(line: usize, v: &str) -> Result<Range<u64>, ConfigError> {
    if let Some((a, b)) = v.split_once("..") {
        let start = a.trim().parse().map_err(|_| err(line, format!("bad seed range start: {a}")))?;
        let end = b.trim().parse().map_err(|_| err(line, format!("bad seed range end: {b}")))?;
        if start >= end {
            return Err(err(line, format!("empty seed range: {v}")));
        }
        Ok(start..end)
    } else {
        let s: u64 = v.parse().map_err(|_| err(line, format!("bad seed: {v}")))?;
        Ok(s..s + 1)
    }
}

pub fn parse(text: &str) -> Result<BenchConfig, ConfigError> {
    let mut mode = None;
    let mut gens = Vec::new();
    let mut seeds = 0..1;
    let mut epsilon: Option<String> = None;
    let mut k = None;
    let mut requery = None;
    let mut budget = None;
    let mut oracle = false;
    let mut out_csv = None;
    let mut out_json = None;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(lineno, format!("expected key = value, got: {line}")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "mode" => {
                mode = Some(match value {
                    "twopass" => Mode::Twopass,
                    "dynamic" => Mode::Dynamic,
                    "verify" => Mode::Verify,
                    other => return Err(err(lineno, format!("unknown mode: {other}"))),
                })
            }
            "gen" => {
                let spec: GenSpec = value
                    .parse()
                    .map_err(|e| err(lineno, format!("{e}")))?;
                gens.push((value.to_string(), spec));
            }
            "seeds" => seeds = parse_seeds(lineno, value)?,
            "epsilon" => epsilon = Some(value.to_string()),
            "k" => {
                k = Some(value.parse().map_err(|_| err(lineno, format!("bad k: {value}")))?)
            }
            "requery" => {
                requery =
                    Some(value.parse().map_err(|_| err(lineno, format!("bad requery: {value}")))?)
            }
            "budget" => {
                budget =
                    Some(value.parse().map_err(|_| err(lineno, format!("bad budget: {value}")))?)
            }
            "oracle" => {
                oracle = match value {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    other => return Err(err(lineno, format!("bad oracle flag: {other}"))),
                }
            }
            "out_csv" => out_csv = Some(value.to_string()),
            "out_json" => out_json = Some(value.to_string()),
            other => return Err(err(lineno, format!("unknown key: {other}"))),
        }
    }

    let mode = mode.ok_or_else(|| err(0, "missing required key: mode"))?;
    if gens.is_empty() {
        return Err(err(0, "missing required key: gen"));
    }
    let epsilon = epsilon.unwrap_or_else(|| {
        match mode {
            Mode::Dynamic => "0.25",
            _ => "0.1",
        }
        .to_string()
    });
    Ok(BenchConfig {
        mode,
        gens,
        seeds,
        epsilon,
        k,
        requery,
        budget,
        oracle,
        out_csv,
        out_json,
    })
}
