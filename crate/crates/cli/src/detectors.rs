//! Detector names, parameter keys and construction.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use mddm::baselines::{Adwin, Cusum, Ddm, Eddm, PageHinkley, Rddm, RddmParams};
use mddm::learners::AdaptationPolicy;
use mddm::mddm::Mddm;
use mddm::weights::{DEFAULT_CONFIDENCE, DEFAULT_D, DEFAULT_LAMBDA, DEFAULT_R};
use mddm::DriftDetector;

use crate::error::{CliError, Result};

pub const DEFAULT_BLIND_PERIOD: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorKind {
    MddmA,
    MddmG,
    MddmE,
    Fhddm,
    Cusum,
    PageHinkley,
    Ddm,
    Eddm,
    Rddm,
    Adwin,
    /// No detector: the classifier is never rebuilt.
    NoDetection,
    /// No detector: the classifier is rebuilt every `period` instances.
    Blind,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 12] = [
        DetectorKind::MddmA,
        DetectorKind::MddmG,
        DetectorKind::MddmE,
        DetectorKind::Fhddm,
        DetectorKind::Cusum,
        DetectorKind::PageHinkley,
        DetectorKind::Ddm,
        DetectorKind::Eddm,
        DetectorKind::Rddm,
        DetectorKind::Adwin,
        DetectorKind::NoDetection,
        DetectorKind::Blind,
    ];

    /// Name accepted on the command line.
    pub fn key(&self) -> &'static str {
        match self {
            DetectorKind::MddmA => "mddm-a",
            DetectorKind::MddmG => "mddm-g",
            DetectorKind::MddmE => "mddm-e",
            DetectorKind::Fhddm => "fhddm",
            DetectorKind::Cusum => "cusum",
            DetectorKind::PageHinkley => "page-hinkley",
            DetectorKind::Ddm => "ddm",
            DetectorKind::Eddm => "eddm",
            DetectorKind::Rddm => "rddm",
            DetectorKind::Adwin => "adwin",
            DetectorKind::NoDetection => "none",
            DetectorKind::Blind => "blind",
        }
    }

    /// Name used in reports.
    pub fn display_name(&self) -> &'static str {
        match self {
            DetectorKind::MddmA => "MDDM-A",
            DetectorKind::MddmG => "MDDM-G",
            DetectorKind::MddmE => "MDDM-E",
            DetectorKind::Fhddm => "FHDDM",
            DetectorKind::Cusum => "CUSUM",
            DetectorKind::PageHinkley => "PageHinkley",
            DetectorKind::Ddm => "DDM",
            DetectorKind::Eddm => "EDDM",
            DetectorKind::Rddm => "RDDM",
            DetectorKind::Adwin => "ADWIN",
            DetectorKind::NoDetection => "NoDetection",
            DetectorKind::Blind => "BlindAdaptation",
        }
    }

    /// Parameter keys accepted by `--set`.
    pub fn parameters(&self) -> &'static [&'static str] {
        match self {
            DetectorKind::MddmA => &["n", "delta", "d"],
            DetectorKind::MddmG => &["n", "delta", "r"],
            DetectorKind::MddmE => &["n", "delta", "lambda"],
            DetectorKind::Fhddm => &["n", "delta"],
            DetectorKind::Cusum => &["delta", "lambda", "min_instances", "centred"],
            DetectorKind::PageHinkley => &["delta", "lambda", "min_instances"],
            DetectorKind::Ddm => &["warning", "drift", "min_instances"],
            DetectorKind::Eddm => &["warning", "drift", "min_errors"],
            DetectorKind::Rddm => &[
                "warning",
                "drift",
                "max_concept",
                "min_stable",
                "warn_limit",
                "min_instances",
            ],
            DetectorKind::Adwin => &["delta", "two_sided"],
            DetectorKind::NoDetection => &[],
            DetectorKind::Blind => &["period"],
        }
    }

    pub fn accepts(&self, key: &str) -> bool {
        self.parameters().contains(&key)
    }

    /// Whether the detector uses a weighted window of size `n`.
    pub fn is_windowed(&self) -> bool {
        matches!(
            self,
            DetectorKind::MddmA | DetectorKind::MddmG | DetectorKind::MddmE | DetectorKind::Fhddm
        )
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|k| k.key()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for DetectorKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let kind = match lower.as_str() {
            "ph" | "pagehinkley" | "page_hinkley" => Some(DetectorKind::PageHinkley),
            "no-detection" | "nodetection" => Some(DetectorKind::NoDetection),
            "blind-adaptation" | "blindadaptation" => Some(DetectorKind::Blind),
            _ => Self::ALL.iter().copied().find(|k| k.key() == lower),
        };
        kind.ok_or_else(|| {
            CliError::usage(format!(
                "unknown detector '{s}'; valid names: {}",
                Self::valid_names()
            ))
        })
    }
}

/// A detector kind plus validated parameter overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    pub kind: DetectorKind,
    params: BTreeMap<String, f64>,
}

impl DetectorConfig {
    pub fn new(kind: DetectorKind) -> Self {
        Self {
            kind,
            params: BTreeMap::new(),
        }
    }

    /// Records an override; keys the detector does not know are rejected.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !self.kind.accepts(key) {
            let keys = self.kind.parameters();
            return Err(CliError::usage(format!(
                "{} has no parameter '{key}'; valid keys: {}",
                self.kind.key(),
                if keys.is_empty() { "none".to_owned() } else { keys.join(", ") }
            )));
        }
        self.params.insert(key.to_owned(), value);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    pub fn overrides(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    fn real(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }

    fn count(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
            Some(v) => Err(CliError::usage(format!(
                "{key} must be a non-negative integer, got {v}"
            ))),
        }
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key) {
            None | Some(0.0) => Ok(false),
            Some(1.0) => Ok(true),
            Some(v) => Err(CliError::usage(format!("{key} must be 0 or 1, got {v}"))),
        }
    }

    fn positive_level(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.real(key, default);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(CliError::usage(format!("{key} must be positive, got {v}")))
        }
    }

    /// Window size for windowed detectors: the `n` override, else `fallback`.
    pub fn window_size(&self, fallback: usize) -> Result<usize> {
        Ok(self.count("n", fallback as u64)? as usize)
    }

    pub fn adaptation(&self, keep: bool) -> Result<AdaptationPolicy> {
        Ok(match self.kind {
            DetectorKind::Blind => {
                let period = self.count("period", DEFAULT_BLIND_PERIOD)?;
                if period == 0 {
                    return Err(CliError::usage("period must be positive"));
                }
                AdaptationPolicy::Blind { period }
            }
            _ if keep => AdaptationPolicy::Keep,
            _ => AdaptationPolicy::Reset,
        })
    }

    /// Builds a fresh detector, or `None` for the detector-free benchmarks.
    pub fn build(&self, window: usize) -> Result<Option<Box<dyn DriftDetector>>> {
        let n = || self.window_size(window);
        let confidence = self.real("delta", DEFAULT_CONFIDENCE);
        let min_instances = |default| self.count("min_instances", default);
        let detector: Box<dyn DriftDetector> = match self.kind {
            DetectorKind::MddmA => {
                Box::new(Mddm::arithmetic(n()?, self.real("d", DEFAULT_D), confidence)?)
            }
            DetectorKind::MddmG => {
                Box::new(Mddm::geometric(n()?, self.real("r", DEFAULT_R), confidence)?)
            }
            DetectorKind::MddmE => {
                Box::new(Mddm::euler(n()?, self.real("lambda", DEFAULT_LAMBDA), confidence)?)
            }
            DetectorKind::Fhddm => Box::new(Mddm::fhddm(n()?, confidence)?),
            DetectorKind::Cusum => Box::new(
                Cusum::new(self.real("delta", 0.005), self.real("lambda", 50.0))?
                    .centred(!self.get("centred").is_some_and(|v| v == 0.0))
                    .min_instances(min_instances(30)?),
            ),
            DetectorKind::PageHinkley => Box::new(
                PageHinkley::new(self.real("delta", 0.005), self.real("lambda", 50.0))?
                    .min_instances(min_instances(30)?),
            ),
            DetectorKind::Ddm => Box::new(
                Ddm::new(self.positive_level("warning", 2.0)?, self.positive_level("drift", 3.0)?)
                    .min_instances(min_instances(30)?),
            ),
            DetectorKind::Eddm => Box::new(
                Eddm::new(
                    self.positive_level("warning", 0.95)?,
                    self.positive_level("drift", 0.90)?,
                )
                .min_errors(self.count("min_errors", 30)?),
            ),
            DetectorKind::Rddm => {
                let d = RddmParams::default();
                Box::new(Rddm::new(RddmParams {
                    warning_level: self.real("warning", d.warning_level),
                    drift_level: self.real("drift", d.drift_level),
                    max_concept: self.count("max_concept", d.max_concept)?,
                    min_stable_concept: self.count("min_stable", d.min_stable_concept as u64)?
                        as usize,
                    warn_limit: self.count("warn_limit", d.warn_limit)?,
                    min_instances: min_instances(d.min_instances)?,
                })?)
            }
            DetectorKind::Adwin => Box::new(
                Adwin::new(self.real("delta", 0.002))?.two_sided(self.flag("two_sided")?),
            ),
            DetectorKind::NoDetection | DetectorKind::Blind => return Ok(None),
        };
        Ok(Some(detector))
    }

    /// Report label: the display name plus any overrides, e.g.
    /// `MDDM-A[delta=0.01]`.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.kind.display_name().to_owned();
        }
        let parts: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}[{}]", self.kind.display_name(), parts.join(";"))
    }
}
