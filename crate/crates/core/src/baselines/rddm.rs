use std::collections::VecDeque;

use super::error_value;
use crate::detector::{DriftDetector, Verdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RddmParams {
    pub warning_level: f64,
    pub drift_level: f64,
    /// Largest concept size; exceeding it forces a drift.
    pub max_concept: u64,
    /// Size of the recent segment kept to rebuild statistics after a drift.
    pub min_stable_concept: usize,
    /// Consecutive warnings tolerated before a drift is forced.
    pub warn_limit: u64,
    pub min_instances: u64,
}

impl Default for RddmParams {
    fn default() -> Self {
        Self {
            warning_level: 1.773,
            drift_level: 2.258,
            max_concept: 40_000,
            min_stable_concept: 7_000,
            warn_limit: 1_400,
            min_instances: 129,
        }
    }
}

/// Reactive Drift Detection Method.
///
/// DDM statistics with three drift triggers: the `drift_level` test, the
/// instance count exceeding `max_concept`, and more than `warn_limit`
/// consecutive warnings. The last `min_stable_concept` outcomes are kept.
/// After a drift the statistics are rebuilt from the stored outcomes since
/// the start of the current warning streak (just the current outcome when
/// there was no warning, or for a forced drift), so the detector resumes on
/// the new concept instead of from zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Rddm {
    params: RddmParams,
    stored: VecDeque<bool>,
    count: u64,
    error_rate: f64,
    std_dev: f64,
    p_min: f64,
    s_min: f64,
    warnings: u64,
    /// Length of the stored suffix that began with the current warning streak.
    warning_suffix: Option<usize>,
}

impl Default for Rddm {
    fn default() -> Self {
        Self::new(RddmParams::default()).expect("default parameters are valid")
    }
}

impl Rddm {
    pub fn new(params: RddmParams) -> Result<Self> {
        if params.min_stable_concept == 0 {
            return Err(Error::domain("min", "stable concept size must be positive"));
        }
        if !(params.drift_level > 0.0 && params.warning_level > 0.0) {
            return Err(Error::domain("alpha", "warning and drift levels must be positive"));
        }
        Ok(Self {
            stored: VecDeque::with_capacity(params.min_stable_concept),
            params,
            count: 0,
            error_rate: 0.0,
            std_dev: 0.0,
            p_min: f64::INFINITY,
            s_min: f64::INFINITY,
            warnings: 0,
            warning_suffix: None,
        })
    }

    pub fn params(&self) -> &RddmParams {
        &self.params
    }

    /// `(p_t, s_t)` and the instance count behind them.
    pub fn statistics(&self) -> (f64, f64, u64) {
        (self.error_rate, self.std_dev, self.count)
    }

    fn clear_statistics(&mut self) {
        self.count = 0;
        self.error_rate = 0.0;
        self.std_dev = 0.0;
        self.p_min = f64::INFINITY;
        self.s_min = f64::INFINITY;
        self.warnings = 0;
        self.warning_suffix = None;
    }

    /// Folds one outcome into `p_t`, `s_t` and (past the gate) the minimum.
    fn absorb(&mut self, x: f64) {
        self.count += 1;
        let t = self.count as f64;
        self.error_rate += (x - self.error_rate) / t;
        self.std_dev = (self.error_rate * (1.0 - self.error_rate) / t).sqrt();
        if self.count >= self.params.min_instances
            && self.error_rate + self.std_dev < self.p_min + self.s_min
        {
            self.p_min = self.error_rate;
            self.s_min = self.std_dev;
        }
    }

    /// Keeps the last `keep` stored outcomes and rebuilds the statistics
    /// from them.
    fn rebuild_from_suffix(&mut self, keep: usize) {
        let keep = keep.clamp(1, self.stored.len().max(1));
        let drop = self.stored.len().saturating_sub(keep);
        self.stored.drain(..drop);
        self.clear_statistics();
        let recent: Vec<bool> = self.stored.iter().copied().collect();
        for correct in recent {
            self.absorb(error_value(correct));
        }
    }
}

impl DriftDetector for Rddm {
    fn step(&mut self, correct: bool) -> Verdict {
        if self.stored.len() == self.params.min_stable_concept {
            self.stored.pop_front();
            if let Some(len) = self.warning_suffix.as_mut() {
                *len = (*len).min(self.params.min_stable_concept - 1);
            }
        }
        self.stored.push_back(correct);
        if let Some(len) = self.warning_suffix.as_mut() {
            *len += 1;
        }
        self.absorb(error_value(correct));

        if self.count > self.params.max_concept {
            self.rebuild_from_suffix(1);
            return Verdict::Drift;
        }
        if self.count < self.params.min_instances {
            return Verdict::NoChange;
        }
        let level = self.error_rate + self.std_dev;
        if level > self.p_min + self.params.drift_level * self.s_min {
            let keep = self.warning_suffix.unwrap_or(1);
            self.rebuild_from_suffix(keep);
            Verdict::Drift
        } else if level > self.p_min + self.params.warning_level * self.s_min {
            if self.warnings >= self.params.warn_limit {
                self.rebuild_from_suffix(1);
                return Verdict::Drift;
            }
            self.warnings += 1;
            if self.warning_suffix.is_none() {
                self.warning_suffix = Some(1);
            }
            Verdict::Warning
        } else {
            self.warnings = 0;
            self.warning_suffix = None;
            Verdict::NoChange
        }
    }

    fn reset(&mut self) {
        self.stored.clear();
        self.clear_statistics();
    }

    fn name(&self) -> &'static str {
        "RDDM"
    }
}
