use super::{error_value, DEFAULT_MIN_INSTANCES};
use crate::detector::{DriftDetector, Verdict};

/// Drift Detection Method: watches `p_t + s_t` against the recorded
/// minimum `p_min + s_min`, with `s_t = sqrt(p_t (1 - p_t) / t)`.
///
/// Thresholds are compared strictly (`>`), otherwise a perfect classifier
/// (`s_min = 0`) would alarm on its first step after the gate.
#[derive(Debug, Clone, PartialEq)]
pub struct Ddm {
    warning_level: f64,
    drift_level: f64,
    min_instances: u64,
    count: u64,
    error_rate: f64,
    std_dev: f64,
    p_min: f64,
    s_min: f64,
}

impl Default for Ddm {
    fn default() -> Self {
        Self::new(2.0, 3.0)
    }
}

impl Ddm {
    pub fn new(warning_level: f64, drift_level: f64) -> Self {
        Self {
            warning_level,
            drift_level,
            min_instances: DEFAULT_MIN_INSTANCES,
            count: 0,
            error_rate: 0.0,
            std_dev: 0.0,
            p_min: f64::INFINITY,
            s_min: f64::INFINITY,
        }
    }

    pub fn min_instances(mut self, min_instances: u64) -> Self {
        self.min_instances = min_instances;
        self
    }

    /// `(p_t, s_t)`
    pub fn statistics(&self) -> (f64, f64) {
        (self.error_rate, self.std_dev)
    }
}

impl DriftDetector for Ddm {
    fn step(&mut self, correct: bool) -> Verdict {
        let x = error_value(correct);
        self.count += 1;
        let t = self.count as f64;
        self.error_rate += (x - self.error_rate) / t;
        self.std_dev = (self.error_rate * (1.0 - self.error_rate) / t).sqrt();
        if self.count < self.min_instances {
            return Verdict::NoChange;
        }
        let level = self.error_rate + self.std_dev;
        if level < self.p_min + self.s_min {
            self.p_min = self.error_rate;
            self.s_min = self.std_dev;
        }
        if level > self.p_min + self.drift_level * self.s_min {
            self.reset();
            Verdict::Drift
        } else if level > self.p_min + self.warning_level * self.s_min {
            Verdict::Warning
        } else {
            Verdict::NoChange
        }
    }

    fn reset(&mut self) {
        self.count = 0;
        self.error_rate = 0.0;
        self.std_dev = 0.0;
        self.p_min = f64::INFINITY;
        self.s_min = f64::INFINITY;
    }

    fn name(&self) -> &'static str {
        "DDM"
    }
}
