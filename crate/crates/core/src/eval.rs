//! Scoring alarms against known drift positions, and aggregating runs.
//!
//! Every drift at position `d` owns the acceptable region `(d, d + Δ]`.
//! The first alarm inside a region is a true positive with delay
//! `alarm - d`; later alarms in the same region are ignored. A drift without
//! an alarm in its region is a false negative and contributes a delay of
//! `Δ`. Every alarm outside all regions is a false positive, so a late alarm
//! counts both as a miss and as a false alarm.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DriftScore {
    /// One entry per scheduled drift.
    pub delays: Vec<u64>,
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub alarms: u64,
    /// Prequential accuracy in `[0, 1]`, when known.
    pub accuracy: Option<f64>,
}

impl DriftScore {
    pub fn with_accuracy(mut self, accuracy: f64) -> Self {
        self.accuracy = Some(accuracy);
        self
    }

    /// Score for a stream with unknown drift positions: alarms only.
    pub fn alarms_only(alarms: u64) -> Self {
        Self {
            alarms,
            ..Self::default()
        }
    }

    /// Mean of the per-drift delays, `None` without drifts.
    pub fn mean_delay(&self) -> Option<f64> {
        if self.delays.is_empty() {
            None
        } else {
            Some(self.delays.iter().sum::<u64>() as f64 / self.delays.len() as f64)
        }
    }
}

fn check_increasing(what: &str, xs: &[u64]) -> Result<()> {
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Contract(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

/// Scores one run. `alarms` and `drifts` are 1-based stream positions.
pub fn score_run(alarms: &[u64], drifts: &[u64], accept: u64, length: u64) -> Result<DriftScore> {
    if accept == 0 {
        return Err(Error::Contract("acceptable delay must be positive".into()));
    }
    check_increasing("alarms", alarms)?;
    check_increasing("drifts", drifts)?;
    if drifts.windows(2).any(|w| w[1] < w[0] + accept) {
        return Err(Error::Contract("acceptable regions overlap".into()));
    }
    if let Some(&last) = alarms.last() {
        if last > length {
            return Err(Error::Contract(format!("alarm {last} beyond stream length {length}")));
        }
    }

    let mut score = DriftScore {
        alarms: alarms.len() as u64,
        ..DriftScore::default()
    };
    let mut in_region = 0u64;
    let mut a = 0;
    for &d in drifts {
        while a < alarms.len() && alarms[a] <= d {
            a += 1;
        }
        let start = a;
        while a < alarms.len() && alarms[a] <= d + accept {
            a += 1;
        }
        if a > start {
            score.true_positives += 1;
            score.delays.push(alarms[start] - d);
            in_region += (a - start) as u64;
        } else {
            score.false_negatives += 1;
            score.delays.push(accept);
        }
    }
    score.false_positives = score.alarms - in_region;
    Ok(score)
}

/// Mean and sample standard deviation (0 for a single value).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        if values.iter().all(|&v| v == values[0]) {
            return Some(Self { mean: values[0], std: 0.0 });
        }
        let ss = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
        Some(Self {
            mean,
            std: (ss / (n - 1.0)).sqrt(),
        })
    }
}

impl std::fmt::Display for MeanStd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.2} ± {:.2}", self.mean, self.std)
    }
}

/// Mean ± std of every metric over a set of runs of one (stream, detector)
/// cell. Delay and accuracy are absent when no run reported them.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub stream: String,
    pub detector: String,
    pub runs: usize,
    pub delay: Option<MeanStd>,
    pub true_positives: MeanStd,
    pub false_positives: MeanStd,
    pub false_negatives: MeanStd,
    pub alarms: MeanStd,
    pub accuracy: Option<MeanStd>,
}

pub fn aggregate(stream: &str, detector: &str, scores: &[DriftScore]) -> Result<AggregateRow> {
    if scores.is_empty() {
        return Err(Error::Contract("cannot aggregate zero runs".into()));
    }
    let column = |f: &dyn Fn(&DriftScore) -> f64| {
        MeanStd::of(&scores.iter().map(f).collect::<Vec<_>>()).expect("non-empty")
    };
    let delays: Vec<f64> = scores.iter().filter_map(DriftScore::mean_delay).collect();
    let accuracies: Vec<f64> = scores.iter().filter_map(|s| s.accuracy).collect();
    Ok(AggregateRow {
        stream: stream.to_owned(),
        detector: detector.to_owned(),
        runs: scores.len(),
        delay: MeanStd::of(&delays),
        true_positives: column(&|s| s.true_positives as f64),
        false_positives: column(&|s| s.false_positives as f64),
        false_negatives: column(&|s| s.false_negatives as f64),
        alarms: column(&|s| s.alarms as f64),
        accuracy: MeanStd::of(&accuracies),
    })
}
