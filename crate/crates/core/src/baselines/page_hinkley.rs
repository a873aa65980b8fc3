use super::{error_value, DEFAULT_MIN_INSTANCES};
use crate::detector::{DriftDetector, Verdict};
use crate::error::{Error, Result};

/// Page-Hinkley test on the error indicator.
///
/// `m_T = sum(x_t - mean_t - delta)` with the running mean `mean_t`,
/// `M_T = min(m_1..m_T)`, drift when `m_T - M_T > threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct PageHinkley {
    delta: f64,
    threshold: f64,
    min_instances: u64,
    mean: f64,
    cumulative: f64,
    minimum: f64,
    count: u64,
}

impl Default for PageHinkley {
    fn default() -> Self {
        Self::new(0.005, 50.0).expect("default parameters are valid")
    }
}

impl PageHinkley {
    pub fn new(delta: f64, threshold: f64) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::domain("delta", "must be finite"));
        }
        if !(threshold > 0.0 && threshold.is_finite()) {
            return Err(Error::domain("threshold", format!("must be positive, got {threshold}")));
        }
        Ok(Self {
            delta,
            threshold,
            min_instances: DEFAULT_MIN_INSTANCES,
            mean: 0.0,
            cumulative: 0.0,
            minimum: f64::INFINITY,
            count: 0,
        })
    }

    pub fn min_instances(mut self, min_instances: u64) -> Self {
        self.min_instances = min_instances;
        self
    }

    /// `(m_T, M_T)`
    pub fn statistics(&self) -> (f64, f64) {
        (self.cumulative, self.minimum)
    }
}

impl DriftDetector for PageHinkley {
    fn step(&mut self, correct: bool) -> Verdict {
        let x = error_value(correct);
        self.count += 1;
        self.mean += (x - self.mean) / self.count as f64;
        self.cumulative += x - self.mean - self.delta;
        self.minimum = self.minimum.min(self.cumulative);
        if self.count >= self.min_instances && self.cumulative - self.minimum > self.threshold {
            self.reset();
            Verdict::Drift
        } else {
            Verdict::NoChange
        }
    }

    fn reset(&mut self) {
        self.mean = 0.0;
        self.cumulative = 0.0;
        self.minimum = f64::INFINITY;
        self.count = 0;
    }

    fn name(&self) -> &'static str {
        "PageHinkley"
    }
}
