//! Experiment settings from flags and `key = value` config files.
//!
//! A config file holds one `key = value` pair per line; blank lines and
//! lines starting with `#` are ignored. Keys are the long flag names without
//! the leading dashes (`stream`, `detector`, `runs`, `seed`, `length`,
//! `window-size`, `delta`, `accept-delay`, `noise`, `policy`, `out`, `dump`,
//! `set`). `stream` and `detector` take comma-separated lists and `set` may
//! repeat. Flags given on the command line win over the file.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use mddm::stream::{Family, DEFAULT_LENGTH, DEFAULT_NOISE};

use crate::detectors::{DetectorConfig, DetectorKind};
use crate::error::{CliError, Result};

pub const DEFAULT_RUNS: usize = 100;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamSource {
    Synthetic(Family),
    Csv(PathBuf),
}

impl StreamSource {
    pub fn name(&self) -> String {
        match self {
            StreamSource::Synthetic(f) => f.display_name().to_owned(),
            StreamSource::Csv(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        }
    }

    /// Window size for the MDDM family: 100 on the gradual streams, 25
    /// elsewhere.
    pub fn default_window(&self) -> usize {
        match self {
            StreamSource::Synthetic(f) if f.is_gradual() => 100,
            _ => 25,
        }
    }

    /// Acceptable delay: 1000 on the gradual streams, 250 elsewhere.
    pub fn default_accept_delay(&self) -> u64 {
        match self {
            StreamSource::Synthetic(f) if f.is_gradual() => 1000,
            _ => 250,
        }
    }
}

impl FromStr for StreamSource {
    type Err = CliError;

    /// A family name, `csv:PATH`, or any path ending in `.csv`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("csv:") {
            return Ok(StreamSource::Csv(PathBuf::from(path)));
        }
        if let Ok(family) = s.parse::<Family>() {
            return Ok(StreamSource::Synthetic(family));
        }
        if s.to_ascii_lowercase().ends_with(".csv") {
            return Ok(StreamSource::Csv(PathBuf::from(s)));
        }
        let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
        Err(CliError::usage(format!(
            "unknown stream '{s}'; valid names: {}, or a path to a .csv file",
            names.join(", ")
        )))
    }
}

/// One fully resolved (stream, detector) experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub stream: StreamSource,
    pub detector: DetectorConfig,
    pub runs: usize,
    pub seed: u64,
    pub length: u64,
    pub noise: f64,
    pub window_size: usize,
    pub accept_delay: u64,
    /// Keep the classifier on alarms instead of rebuilding it.
    pub keep_model: bool,
}

impl ExperimentConfig {
    /// Defaults for one stream and detector.
    pub fn new(stream: StreamSource, detector: DetectorKind) -> Self {
        let runs = match stream {
            StreamSource::Synthetic(_) => DEFAULT_RUNS,
            StreamSource::Csv(_) => 1,
        };
        Self {
            window_size: stream.default_window(),
            accept_delay: stream.default_accept_delay(),
            stream,
            detector: DetectorConfig::new(detector),
            runs,
            seed: DEFAULT_SEED,
            length: DEFAULT_LENGTH,
            noise: DEFAULT_NOISE,
            keep_model: false,
        }
    }

    pub fn with_runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_length(mut self, length: u64) -> Self {
        self.length = length;
        self
    }

    pub fn stream_name(&self) -> String {
        self.stream.name()
    }

    pub fn detector_label(&self) -> String {
        self.detector.label()
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(CliError::usage("runs must be at least 1"));
        }
        if self.accept_delay == 0 {
            return Err(CliError::usage("accept-delay must be positive"));
        }
        if !(0.0..1.0).contains(&self.noise) {
            return Err(CliError::usage(format!("noise must lie in [0, 1), got {}", self.noise)));
        }
        self.detector.build(self.window_size)?;
        self.detector.adaptation(self.keep_model)?;
        Ok(())
    }
}

/// Raw settings as read from flags or a config file; every field is
/// optional so that two sources can be layered.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub streams: Vec<String>,
    pub detectors: Vec<String>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub length: Option<u64>,
    pub window_size: Option<usize>,
    pub delta: Option<f64>,
    pub accept_delay: Option<u64>,
    pub noise: Option<f64>,
    pub policy: Option<String>,
    pub out: Option<PathBuf>,
    pub dump: Option<PathBuf>,
    /// `key=value` or `key=v1|v2|...` sweeps.
    pub sets: Vec<String>,
}

/// One cell of an experiment matrix; `config` holds the reason when the
/// cell cannot run.
#[derive(Debug)]
pub struct Cell {
    pub stream: String,
    pub detector: String,
    pub config: Result<ExperimentConfig>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("invalid value for {key}: '{value}'")))
}

fn split_list(value: &str) -> impl Iterator<Item = String> + '_ {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_owned)
}

impl Settings {
    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(mddm::Error::from)?;
        Self::parse_config(&text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn parse_config(text: &str) -> Result<Self> {
        let mut settings = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("line {}: expected key = value", i + 1)))?;
            settings
                .apply(key.trim(), value.trim())
                .map_err(|e| CliError::usage(format!("line {}: {e}", i + 1)))?;
        }
        Ok(settings)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "stream" => self.streams.extend(split_list(value)),
            "detector" => self.detectors.extend(split_list(value)),
            "runs" => self.runs = Some(parse_value(key, value)?),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "length" => self.length = Some(parse_value(key, value)?),
            "window-size" => self.window_size = Some(parse_value(key, value)?),
            "delta" => self.delta = Some(parse_value(key, value)?),
            "accept-delay" => self.accept_delay = Some(parse_value(key, value)?),
            "noise" => self.noise = Some(parse_value(key, value)?),
            "policy" => self.policy = Some(value.to_owned()),
            "out" => self.out = Some(PathBuf::from(value)),
            "dump" => self.dump = Some(PathBuf::from(value)),
            "set" => self.sets.push(value.to_owned()),
            _ => return Err(CliError::usage(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Layers `over` on top of `self`: any value present in `over` wins;
    /// `set` entries accumulate, later ones taking precedence per key.
    pub fn overlay(mut self, over: Settings) -> Settings {
        if !over.streams.is_empty() {
            self.streams = over.streams;
        }
        if !over.detectors.is_empty() {
            self.detectors = over.detectors;
        }
        self.runs = over.runs.or(self.runs);
        self.seed = over.seed.or(self.seed);
        self.length = over.length.or(self.length);
        self.window_size = over.window_size.or(self.window_size);
        self.delta = over.delta.or(self.delta);
        self.accept_delay = over.accept_delay.or(self.accept_delay);
        self.noise = over.noise.or(self.noise);
        self.policy = over.policy.or(self.policy);
        self.out = over.out.or(self.out);
        self.dump = over.dump.or(self.dump);
        self.sets.extend(over.sets);
        self
    }

    fn keep_model(&self) -> Result<bool> {
        match self.policy.as_deref().map(str::to_ascii_lowercase).as_deref() {
            None | Some("reset") => Ok(false),
            Some("keep") => Ok(true),
            Some(other) => Err(CliError::usage(format!(
                "unknown policy '{other}'; valid policies: reset, keep"
            ))),
        }
    }

    /// Parses `--set` entries into `(key, values)` pairs, one per key.
    fn sweeps(&self) -> Result<Vec<(String, Vec<f64>)>> {
        let mut sweeps: Vec<(String, Vec<f64>)> = Vec::new();
        for entry in &self.sets {
            let (key, values) = entry
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("--set expects key=value, got '{entry}'")))?;
            let key = key.trim().to_owned();
            let values = values
                .split('|')
                .map(|v| parse_value::<f64>(&key, v))
                .collect::<Result<Vec<_>>>()?;
            match sweeps.iter_mut().find(|(k, _)| *k == key) {
                Some(slot) => slot.1 = values,
                None => sweeps.push((key, values)),
            }
        }
        Ok(sweeps)
    }

    /// Expands streams x detectors x parameter sweeps into cells, in that
    /// nesting order. A `--set` key applies to every detector that has it;
    /// a key no requested detector has is a usage error.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let keep_model = self.keep_model()?;
        let sweeps = self.sweeps()?;
        let kinds: Vec<Result<DetectorKind>> =
            self.detectors.iter().map(|d| d.parse()).collect();
        for (key, _) in &sweeps {
            let known = kinds.iter().flatten().any(|k| k.accepts(key));
            if !known && kinds.iter().any(|k| k.is_ok()) {
                return Err(CliError::usage(format!(
                    "no requested detector has a parameter '{key}'"
                )));
            }
        }
        let combos = sweeps.iter().fold(vec![Vec::new()], |acc, (key, values)| {
            acc.iter()
                .flat_map(|prefix: &Vec<(String, f64)>| {
                    values.iter().map(move |v| {
                        let mut next = prefix.clone();
                        next.push((key.clone(), *v));
                        next
                    })
                })
                .collect::<Vec<_>>()
        });

        let mut cells = Vec::new();
        for stream in &self.streams {
            let source = stream.parse::<StreamSource>();
            for (name, kind) in self.detectors.iter().zip(&kinds) {
                for combo in &combos {
                    let config = match (&source, kind) {
                        (Ok(source), Ok(kind)) => self.resolve(source.clone(), *kind, combo, keep_model),
                        (Err(e), _) | (_, Err(e)) => Err(CliError::usage(e.to_string())),
                    };
                    let detector = match &config {
                        Ok(c) => c.detector_label(),
                        Err(_) => name.clone(),
                    };
                    let stream = match &source {
                        Ok(s) => s.name(),
                        Err(_) => stream.clone(),
                    };
                    cells.push(Cell {
                        stream,
                        detector,
                        config,
                    });
                }
            }
        }
        Ok(cells)
    }

    fn resolve(
        &self,
        stream: StreamSource,
        kind: DetectorKind,
        combo: &[(String, f64)],
        keep_model: bool,
    ) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(stream, kind);
        if let Some(runs) = self.runs {
            cfg.runs = runs;
        }
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.length = self.length.unwrap_or(cfg.length);
        cfg.noise = self.noise.unwrap_or(cfg.noise);
        cfg.window_size = self.window_size.unwrap_or(cfg.window_size);
        cfg.accept_delay = self.accept_delay.unwrap_or(cfg.accept_delay);
        cfg.keep_model = keep_model;
        if let (Some(delta), true) = (self.delta, kind.is_windowed()) {
            cfg.detector.set("delta", delta)?;
        }
        for (key, value) in combo {
            if kind.accepts(key) {
                cfg.detector.set(key, *value)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
