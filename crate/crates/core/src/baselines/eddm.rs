use crate::detector::{DriftDetector, Verdict};

/// Early Drift Detection Method.
///
/// Tracks the mean `p'` and population standard deviation `s'` of the
/// distance (in instances) between consecutive errors, and the maximum of
/// `p' + 2 s'`. A shrinking ratio `(p' + 2 s') / max` means errors are
/// getting closer together.
#[derive(Debug, Clone, PartialEq)]
pub struct Eddm {
    warning_ratio: f64,
    drift_ratio: f64,
    min_errors: u64,
    count: u64,
    errors: u64,
    last_error_at: u64,
    mean_distance: f64,
    m2: f64,
    max_level: f64,
}

impl Default for Eddm {
    fn default() -> Self {
        Self::new(0.95, 0.90)
    }
}

impl Eddm {
    pub fn new(warning_ratio: f64, drift_ratio: f64) -> Self {
        Self {
            warning_ratio,
            drift_ratio,
            min_errors: 30,
            count: 0,
            errors: 0,
            last_error_at: 0,
            mean_distance: 0.0,
            m2: 0.0,
            max_level: 0.0,
        }
    }

    pub fn min_errors(mut self, min_errors: u64) -> Self {
        self.min_errors = min_errors.max(2);
        self
    }

    /// `(p', s')` over the distances seen since the last reset.
    pub fn statistics(&self) -> (f64, f64) {
        let std = if self.errors == 0 {
            0.0
        } else {
            (self.m2 / self.errors as f64).sqrt()
        };
        (self.mean_distance, std)
    }
}

impl DriftDetector for Eddm {
    fn step(&mut self, correct: bool) -> Verdict {
        self.count += 1;
        if correct {
            return Verdict::NoChange;
        }
        self.errors += 1;
        let distance = (self.count - self.last_error_at) as f64;
        self.last_error_at = self.count;
        let previous = self.mean_distance;
        self.mean_distance += (distance - previous) / self.errors as f64;
        self.m2 += (distance - previous) * (distance - self.mean_distance);

        let (mean, std) = self.statistics();
        let level = mean + 2.0 * std;
        if level > self.max_level {
            self.max_level = level;
            return Verdict::NoChange;
        }
        if self.errors < self.min_errors {
            return Verdict::NoChange;
        }
        let ratio = level / self.max_level;
        if ratio < self.drift_ratio {
            self.reset();
            Verdict::Drift
        } else if ratio < self.warning_ratio {
            Verdict::Warning
        } else {
            Verdict::NoChange
        }
    }

    fn reset(&mut self) {
        self.count = 0;
        self.errors = 0;
        self.last_error_at = 0;
        self.mean_distance = 0.0;
        self.m2 = 0.0;
        self.max_level = 0.0;
    }

    fn name(&self) -> &'static str {
        "EDDM"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widening_error_gaps_never_drift() {
        let mut eddm = Eddm::default();
        let mut gap = 1;
        let mut since = 0;
        for _ in 0..200_000 {
            since += 1;
            let err = since == gap;
            if err {
                since = 0;
                gap += 1;
            }
            assert_ne!(eddm.step(!err), Verdict::Drift);
        }
    }

    #[test]
    fn population_variance_of_distances() {
        let mut eddm = Eddm::default();
        // errors at 2, 5, 6, 10 -> distances 2, 3, 1, 4
        for i in 1..=10u32 {
            eddm.step(![2, 5, 6, 10].contains(&i));
        }
        let (mean, std) = eddm.statistics();
        assert!((mean - 2.5).abs() < 1e-12);
        assert!((std - 1.25f64.sqrt()).abs() < 1e-12);
    }
}
