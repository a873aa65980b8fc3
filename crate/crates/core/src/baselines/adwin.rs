use std::collections::VecDeque;

use super::error_value;
use crate::detector::{DriftDetector, Verdict};
use crate::error::{Error, Result};

pub const DEFAULT_CAPACITY: usize = 32_768;

/// Adaptive windowing over the error indicator.
///
/// The window is a plain buffer (no exponential histogram). After each
/// insertion every split into an older part `w0` (length `n0`) and a newer
/// part `w1` (length `n1`) is tested:
///
/// ```text
/// |mean(w0) - mean(w1)| >= sqrt(1 / (2m) * ln(4 / delta')),
/// m = 1 / (1/n0 + 1/n1),  delta' = delta / n
/// ```
///
/// While some split is significant the oldest element is dropped. By
/// default a step that dropped anything reports a drift only if the error
/// estimate went up, since a falling error rate is no reason to rebuild a
/// classifier; [`Adwin::two_sided`] reports every shrink. A reported drift
/// empties the window, so the detector restarts along with the model. The scan is exact but skips runs
/// of splits that provably cannot reach the bound, so a stationary window
/// of a few thousand elements costs far less than one test per split.
#[derive(Debug, Clone, PartialEq)]
pub struct Adwin {
    delta: f64,
    capacity: usize,
    /// Running count of ones, one entry per element; `base` is the count
    /// just before the oldest element.
    prefix: VecDeque<u64>,
    base: u64,
    two_sided: bool,
}

impl Default for Adwin {
    fn default() -> Self {
        Self::new(0.002).expect("default parameters are valid")
    }
}

impl Adwin {
    pub fn new(delta: f64) -> Result<Self> {
        Self::with_capacity(delta, DEFAULT_CAPACITY)
    }

    pub fn with_capacity(delta: f64, capacity: usize) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::domain("delta", format!("must lie in (0, 1), got {delta}")));
        }
        if capacity < 2 {
            return Err(Error::domain("capacity", "must be at least 2"));
        }
        Ok(Self {
            delta,
            capacity,
            prefix: VecDeque::new(),
            base: 0,
            two_sided: false,
        })
    }

    /// Also report shrinks caused by a drop in the error rate.
    pub fn two_sided(mut self, on: bool) -> Self {
        self.two_sided = on;
        self
    }

    pub fn width(&self) -> usize {
        self.prefix.len()
    }

    pub fn mean(&self) -> f64 {
        if self.prefix.is_empty() {
            0.0
        } else {
            self.total() as f64 / self.width() as f64
        }
    }

    /// Window contents from oldest to newest, as error indicators.
    pub fn contents(&self) -> Vec<bool> {
        let mut prev = self.base;
        self.prefix
            .iter()
            .map(|&c| {
                let one = c > prev;
                prev = c;
                one
            })
            .collect()
    }

    fn total(&self) -> u64 {
        self.prefix.back().map_or(0, |last| last - self.base)
    }

    fn ones_in_oldest(&self, k: usize) -> u64 {
        if k == 0 {
            0
        } else {
            self.prefix[k - 1] - self.base
        }
    }

    fn pop_oldest(&mut self) {
        if let Some(c) = self.prefix.pop_front() {
            self.base = c;
        }
    }

    /// Length of the older part of some significant split, if one exists.
    pub fn significant_cut(&self) -> Option<usize> {
        let n = self.width();
        if n < 2 {
            return None;
        }
        let nf = n as f64;
        let half_log = (4.0 * nf / self.delta).ln() / 2.0;
        let total = self.total() as f64;
        let mut k = 1usize;
        while k < n {
            let n0 = k as f64;
            let n1 = (n - k) as f64;
            let s0 = self.ones_in_oldest(k) as f64;
            let diff = (s0 / n0 - (total - s0) / n1).abs();
            let eps_sq = half_log * (1.0 / n0 + 1.0 / n1);
            if diff * diff >= eps_sq {
                return Some(k);
            }
            k += self.safe_skip(k, n, diff, half_log);
        }
        None
    }

    /// How far the scan may advance from split `k`: every split strictly
    /// between `k` and `k + j` stays below its bound. Moving the split by
    /// one element changes the older mean by at most `1/(k'+1)` and the
    /// newer mean by at most `1/(n-k'-1)`, while the bound at `k'` is at
    /// least `sqrt(half_log * (1/(k+j-1) + 1/(n-k-1)))`.
    fn safe_skip(&self, k: usize, n: usize, diff: f64, half_log: f64) -> usize {
        let remaining = n - k;
        if remaining <= 2 {
            return 1;
        }
        let eps = (half_log * (1.0 / k as f64 + 1.0 / remaining as f64)).sqrt();
        let rate = 1.0 / (k + 1) as f64 + 1.0 / (remaining - 1) as f64;
        let mut j = (((eps - diff) / rate) as usize).clamp(1, remaining);
        while j > 1 {
            let moved = (j - 1) as f64;
            let drift_bound = moved
                * (1.0 / (k + 1) as f64 + 1.0 / (remaining + 1 - j) as f64);
            let eps_floor = (half_log
                * (1.0 / (k + j - 1) as f64 + 1.0 / (remaining - 1) as f64))
                .sqrt();
            if diff + drift_bound < eps_floor * (1.0 - 1e-9) {
                break;
            }
            j /= 2;
        }
        j
    }
}

impl DriftDetector for Adwin {
    fn step(&mut self, correct: bool) -> Verdict {
        let before = self.mean();
        if self.width() == self.capacity {
            self.pop_oldest();
        }
        let last = self.prefix.back().copied().unwrap_or(self.base);
        self.prefix.push_back(last + error_value(correct) as u64);

        let mut dropped = false;
        while self.significant_cut().is_some() {
            self.pop_oldest();
            dropped = true;
        }
        if dropped && (self.two_sided || self.mean() > before) {
            self.reset();
            Verdict::Drift
        } else {
            Verdict::NoChange
        }
    }

    fn reset(&mut self) {
        self.prefix.clear();
        self.base = 0;
    }

    fn name(&self) -> &'static str {
        "ADWIN"
    }
}
