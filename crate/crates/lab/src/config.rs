//! Flat `key = value` experiment configuration.
//!
//! One experiment per file. Lines are `key = value`; blank lines and lines
//! starting with `#` are ignored. Values are raw strings, typically in the
//! canonical text grammar of the core types (`power 3/2`,
//! `bernoulli p=[1/2,1/2]`, `sqrt2m1`). Keys outside the experiment's
//! schema are rejected. The [`Display`](fmt::Display) form lists every key
//! with its resolved value in sorted order and parses back to an equal
//! config.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{config_err, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentKind {
    Example1,
    Example2,
    ZinftyCounterexample,
    WeylVdc,
    BernoulliDisjointness,
    Recurrence,
    JointErgodicityDemo,
    SpectralClassify,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Example1,
        ExperimentKind::Example2,
        ExperimentKind::ZinftyCounterexample,
        ExperimentKind::WeylVdc,
        ExperimentKind::BernoulliDisjointness,
        ExperimentKind::Recurrence,
        ExperimentKind::JointErgodicityDemo,
        ExperimentKind::SpectralClassify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Example1 => "example1",
            ExperimentKind::Example2 => "example2",
            ExperimentKind::ZinftyCounterexample => "zinfty_counterexample",
            ExperimentKind::WeylVdc => "weyl_vdc",
            ExperimentKind::BernoulliDisjointness => "bernoulli_disjointness",
            ExperimentKind::Recurrence => "recurrence",
            ExperimentKind::JointErgodicityDemo => "joint_ergodicity_demo",
            ExperimentKind::SpectralClassify => "spectral_classify",
        }
    }

    /// Experiment-specific keys with their defaults.
    pub fn schema(self) -> &'static [(&'static str, &'static str)] {
        match self {
            ExperimentKind::Example1 => &[("p", "3"), ("k", "1"), ("samples", "50")],
            ExperimentKind::Example2 => &[
                ("p", "3"),
                ("poly", "poly c=[{};{};{1:1}]"),
                ("max_level", "6"),
                ("char_length", "3"),
                ("h_degree", "3"),
                ("samples", "20"),
                ("negatives", "5"),
                ("selection", "ideal"),
            ],
            ExperimentKind::ZinftyCounterexample => &[("level", "4"), ("m", "1"), ("samples", "10")],
            ExperimentKind::WeylVdc => &[
                ("theta", "sqrt2m1"),
                ("map", "power 2/1"),
                ("mode", "summable"),
                ("radius", "20"),
                ("checkpoints", "10000,20000,50000,100000"),
                ("window", "10000"),
                ("hypothesis_threshold", "0.05"),
                ("conclusion_threshold", "0.05"),
                ("max_last_block_share", "0.1"),
                ("refute_fraction", "0.5"),
            ],
            ExperimentKind::BernoulliDisjointness => &[
                ("system", "bernoulli p=[1/2,1/2]"),
                ("theta_single", "sqrt2m1"),
                ("theta_pair", "1/3"),
                ("checkpoints", "1024,2048,4096,8192,16384"),
                ("float_checkpoints", "1024,4096"),
            ],
            ExperimentKind::Recurrence => &[
                ("alpha_t", "sqrt2m1"),
                ("alpha_s", "sqrt3m1"),
                ("map", "power 3/2"),
                ("interval", "[0,1/2)"),
                ("checkpoints", "100,1000,10000"),
            ],
            ExperimentKind::JointErgodicityDemo => &[
                ("alpha_t", "sqrt2m1"),
                ("alpha_s", "sqrt3m1"),
                ("map", "power 3/2"),
                ("f0", "1"),
                ("f1", "1"),
                ("checkpoints", "100,1000,10000"),
            ],
            ExperimentKind::SpectralClassify => &[
                ("cases", "bernoulli,rotation,mixture,finite_dual,finite_dual_regular"),
                ("n", "4096"),
                ("resolution", "4096"),
                ("theta", "sqrt2m1"),
            ],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = crate::LabError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| config_err!("unknown experiment {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    TableText,
    StructuredText,
}

impl ReportFormat {
    pub fn name(self) -> &'static str {
        match self {
            ReportFormat::TableText => "table_text",
            ReportFormat::StructuredText => "structured_text",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = crate::LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table_text" => Ok(ReportFormat::TableText),
            "structured_text" => Ok(ReportFormat::StructuredText),
            _ => Err(config_err!("unknown format {s:?}")),
        }
    }
}

/// Keys accepted by every experiment, with defaults. `out` has no default.
pub const COMMON_KEYS: [(&str, &str); 3] = [("seed", "0"), ("budget", "10000000"), ("format", "table_text")];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    kind: ExperimentKind,
    values: BTreeMap<String, String>,
}

impl ExperimentConfig {
    /// All keys at their defaults.
    pub fn new(kind: ExperimentKind) -> Self {
        let values = COMMON_KEYS.iter().chain(kind.schema()).map(|(k, v)| (k.to_string(), v.to_string())).collect();
        ExperimentConfig { kind, values }
    }

    pub fn kind(&self) -> ExperimentKind {
        self.kind
    }

    fn allows(&self, key: &str) -> bool {
        key == "out" || COMMON_KEYS.iter().chain(self.kind.schema()).any(|(k, _)| *k == key)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if key == "experiment" {
            return Err(config_err!("the experiment cannot be changed"));
        }
        if !self.allows(key) {
            return Err(config_err!("unknown key {key:?} for {}", self.kind));
        }
        self.values.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    pub fn with(mut self, key: &str, value: &str) -> Result<Self> {
        self.set(key, value)?;
        Ok(self)
    }

    pub fn raw(&self, key: &str) -> Result<&str> {
        self.values.get(key).map(String::as_str).ok_or_else(|| config_err!("missing key {key:?}"))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        let raw = self.raw(key)?;
        raw.parse().map_err(|e| config_err!("bad value {raw:?} for {key}: {e}"))
    }

    /// Comma-separated list value.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>>
    where
        T::Err: fmt::Display,
    {
        let raw = self.raw(key)?;
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|e| config_err!("bad item {s:?} in {key}: {e}")))
            .collect()
    }

    pub fn seed(&self) -> Result<u64> {
        self.get("seed")
    }

    pub fn budget(&self) -> Result<u64> {
        self.get("budget")
    }

    pub fn format(&self) -> Result<ReportFormat> {
        self.get("format")
    }

    pub fn out(&self) -> Option<&str> {
        self.values.get("out").map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        std::iter::once(("experiment", self.kind.name())).chain(self.values.iter().map(|(k, v)| (k.as_str(), v.as_str())))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut pairs = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| config_err!("line {}: expected key = value", no + 1))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "experiment" {
                if kind.is_some() {
                    return Err(config_err!("line {}: experiment given twice", no + 1));
                }
                kind = Some(v.parse::<ExperimentKind>()?);
            } else {
                if pairs.iter().any(|(x, _): &(&str, &str)| *x == k) {
                    return Err(config_err!("line {}: duplicate key {k:?}", no + 1));
                }
                pairs.push((k, v));
            }
        }
        let kind = kind.ok_or_else(|| config_err!("missing experiment = <name>"))?;
        let mut cfg = ExperimentConfig::new(kind);
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries() {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}
