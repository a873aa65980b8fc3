use super::{error_value, DEFAULT_MIN_INSTANCES};
use crate::detector::{DriftDetector, Verdict};
use crate::error::{Error, Result};

/// Page's cumulative sum over the error indicator.
///
/// The centred form accumulates `x_t - mean_t - delta` where `mean_t` is the
/// running error rate since the last reset; the uncentred form accumulates
/// `x_t - delta`. In both cases `g = max(0, g + increment)` and a drift is
/// raised when `g > threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cusum {
    delta: f64,
    threshold: f64,
    centred: bool,
    min_instances: u64,
    g: f64,
    mean: f64,
    count: u64,
}

impl Default for Cusum {
    fn default() -> Self {
        Self::new(0.005, 50.0).expect("default parameters are valid")
    }
}

impl Cusum {
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
            centred: true,
            min_instances: DEFAULT_MIN_INSTANCES,
            g: 0.0,
            mean: 0.0,
            count: 0,
        })
    }

    /// Switches between `x - mean - delta` (default) and `x - delta`.
    pub fn centred(mut self, centred: bool) -> Self {
        self.centred = centred;
        self
    }

    pub fn min_instances(mut self, min_instances: u64) -> Self {
        self.min_instances = min_instances;
        self
    }

    pub fn statistic(&self) -> f64 {
        self.g
    }
}

impl DriftDetector for Cusum {
    fn step(&mut self, correct: bool) -> Verdict {
        let x = error_value(correct);
        self.count += 1;
        self.mean += (x - self.mean) / self.count as f64;
        let centre = if self.centred { self.mean } else { 0.0 };
        self.g = (self.g + x - centre - self.delta).max(0.0);
        if self.count >= self.min_instances && self.g > self.threshold {
            self.reset();
            Verdict::Drift
        } else {
            Verdict::NoChange
        }
    }

    fn reset(&mut self) {
        self.g = 0.0;
        self.mean = 0.0;
        self.count = 0;
    }

    fn name(&self) -> &'static str {
        "CUSUM"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn silent_on_all_correct() {
        let mut c = Cusum::default();
        assert!((0..100_000).all(|_| c.step(true) == Verdict::NoChange));
        assert_eq!(c.statistic(), 0.0);
    }

    #[test]
    fn uncentred_constant_errors_fire_at_step_51() {
        let mut c = Cusum::new(0.005, 50.0).unwrap().centred(false);
        let first = (1..=1000).find(|_| c.step(false) == Verdict::Drift);
        // 0.995 per step: smallest k with 0.995 k > 50.
        assert_eq!(first, Some((50.0f64 / 0.995).ceil() as usize));
    }

    #[test]
    fn centred_ignores_a_constant_error_rate() {
        let mut c = Cusum::default();
        assert!((0..10_000).all(|_| c.step(false) == Verdict::NoChange));
    }

    #[test]
    fn centred_fires_after_error_rate_jump() {
        let mut c = Cusum::default();
        for _ in 0..2000 {
            assert_eq!(c.step(true), Verdict::NoChange);
        }
        let first = (1..=1000).find(|_| c.step(false) == Verdict::Drift);
        assert!(first.is_some());
    }

    #[test]
    fn g_is_never_negative() {
        let mut c = Cusum::new(0.3, 5.0).unwrap();
        for i in 0..5000u32 {
            c.step(i % 7 != 0);
            assert!(c.statistic() >= 0.0);
        }
    }
}
