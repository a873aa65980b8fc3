//! McDiarmid drift detection over a weighted sliding window.
//!
//! The window holds the last `n` prediction outcomes (1 = correct). Newer
//! entries carry larger weights. Once the window is full, every step
//! computes the weighted mean `mu_t`, raises the running maximum `mu_max`
//! if needed, and signals a drift when `mu_max - mu_t >= epsilon`, where
//! `epsilon` is the McDiarmid bound for the normalised weights. A drift
//! empties the window and clears `mu_max`.

use std::collections::VecDeque;

use crate::detector::{DriftDetector, Verdict};
use crate::error::{Error, Result};
use crate::weights::{self, compensated_sum, WeightScheme};

/// Fixed-capacity FIFO of outcomes with a weight per slot.
///
/// Slot 0 is the tail (oldest entry, weight `w_1`); slot `n - 1` is the
/// head (newest entry, largest weight).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedWindow {
    weights: Vec<f64>,
    weight_sum: f64,
    bits: VecDeque<bool>,
}

impl WeightedWindow {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("n", "window size must be at least 1"));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::domain("weights", format!("weights must be positive, got {w}")));
        }
        let weight_sum = compensated_sum(weights.iter().copied());
        Ok(Self {
            bits: VecDeque::with_capacity(weights.len()),
            weights,
            weight_sum,
        })
    }

    pub fn capacity(&self) -> usize {
        self.weights.len()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.bits.len() == self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Drops the tail if full, then pushes at the head.
    pub fn push(&mut self, bit: bool) {
        if self.is_full() {
            self.bits.pop_front();
        }
        self.bits.push_back(bit);
    }

    pub fn clear(&mut self) {
        self.bits.clear();
    }

    /// `sum(p_i w_i) / sum(w_i)`; `None` until the window is full.
    ///
    /// The numerator is summed with the same compensated routine as the
    /// denominator, so a window of ones yields exactly 1.
    pub fn weighted_mean(&self) -> Option<f64> {
        if !self.is_full() {
            return None;
        }
        let num = compensated_sum(
            self.bits
                .iter()
                .zip(&self.weights)
                .map(|(&b, &w)| if b { w } else { 0.0 }),
        );
        Some(num / self.weight_sum)
    }
}

/// The MDDM detector. With uniform weights it is FHDDM.
#[derive(Debug, Clone, PartialEq)]
pub struct Mddm {
    window: WeightedWindow,
    confidence: f64,
    epsilon: f64,
    mu_max: f64,
    kind: &'static str,
}

impl Mddm {
    pub fn new(scheme: WeightScheme, window_size: usize, confidence: f64) -> Result<Self> {
        weights::check_confidence(confidence)?;
        let weights = weights::build_weights(scheme, window_size)?;
        let kind = match scheme {
            WeightScheme::Arithmetic { .. } => "MDDM-A",
            WeightScheme::Geometric { .. } => "MDDM-G",
            WeightScheme::Euler { .. } => "MDDM-E",
            WeightScheme::Uniform => "FHDDM",
        };
        Self::with_weights(weights, confidence, kind)
    }

    /// Builds a detector over an explicit weight vector (tail first).
    pub fn from_weights(weights: Vec<f64>, confidence: f64) -> Result<Self> {
        Self::with_weights(weights, confidence, "MDDM")
    }

    fn with_weights(weights: Vec<f64>, confidence: f64, kind: &'static str) -> Result<Self> {
        let epsilon = weights::compute_epsilon(&weights, confidence)?;
        Ok(Self {
            window: WeightedWindow::new(weights)?,
            confidence,
            epsilon,
            mu_max: 0.0,
            kind,
        })
    }

    pub fn arithmetic(window_size: usize, d: f64, confidence: f64) -> Result<Self> {
        Self::new(WeightScheme::Arithmetic { d }, window_size, confidence)
    }

    pub fn geometric(window_size: usize, r: f64, confidence: f64) -> Result<Self> {
        Self::new(WeightScheme::Geometric { r }, window_size, confidence)
    }

    pub fn euler(window_size: usize, lambda: f64, confidence: f64) -> Result<Self> {
        Self::new(WeightScheme::Euler { lambda }, window_size, confidence)
    }

    pub fn fhddm(window_size: usize, confidence: f64) -> Result<Self> {
        Self::new(WeightScheme::Uniform, window_size, confidence)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn confidence(&self) -> f64 {
        self.confidence
    }

    pub fn mu_max(&self) -> f64 {
        self.mu_max
    }

    pub fn window(&self) -> &WeightedWindow {
        &self.window
    }

    /// One detection step. Verdicts are `NoChange` until the window fills.
    pub fn detect(&mut self, correct: bool) -> Verdict {
        self.window.push(correct);
        let Some(mu_t) = self.window.weighted_mean() else {
            return Verdict::NoChange;
        };
        if self.mu_max < mu_t {
            self.mu_max = mu_t;
        }
        if self.mu_max - mu_t >= self.epsilon {
            self.clear();
            Verdict::Drift
        } else {
            Verdict::NoChange
        }
    }

    fn clear(&mut self) {
        self.window.clear();
        self.mu_max = 0.0;
    }
}

impl DriftDetector for Mddm {
    fn step(&mut self, correct: bool) -> Verdict {
        self.detect(correct)
    }

    fn reset(&mut self) {
        self.clear();
    }

    fn name(&self) -> &'static str {
        self.kind
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step_response(mut det: Mddm) -> usize {
        for _ in 0..det.window().capacity() {
            assert_eq!(det.step(true), Verdict::NoChange);
        }
        (1..=1000)
            .find(|_| det.step(false) == Verdict::Drift)
            .expect("drift on a run of errors")
    }

    #[test]
    fn step_response_uniform_and_arithmetic() {
        assert_eq!(step_response(Mddm::fhddm(25, 1e-6).unwrap()), 14);
        assert_eq!(step_response(Mddm::arithmetic(25, 0.01, 1e-6).unwrap()), 13);
    }

    #[test]
    fn weighted_mean_examples() {
        let mut w = WeightedWindow::new(vec![1.0, 1.01, 1.02]).unwrap();
        assert_eq!(w.weighted_mean(), None);
        for b in [false, true, true] {
            w.push(b);
        }
        let mean = w.weighted_mean().unwrap();
        assert!((mean - 2.03 / 3.03).abs() < 1e-12);
        assert!(mean > 2.0 / 3.0);

        let geo = weights::build_weights(WeightScheme::Geometric { r: 1.3 }, 40).unwrap();
        let mut ones = WeightedWindow::new(geo.clone()).unwrap();
        let mut zeros = WeightedWindow::new(geo).unwrap();
        for _ in 0..40 {
            ones.push(true);
            zeros.push(false);
        }
        assert_eq!(ones.weighted_mean(), Some(1.0));
        assert_eq!(zeros.weighted_mean(), Some(0.0));
    }

    #[test]
    fn never_drifts_on_all_correct() {
        let mut det = Mddm::geometric(100, 1.05, 1e-2).unwrap();
        assert!((0..100_000).all(|_| det.step(true) == Verdict::NoChange));
    }

    #[test]
    fn warm_up_is_silent_after_reset() {
        let mut det = Mddm::fhddm(25, 1e-6).unwrap();
        det.reset();
        for i in 0..24 {
            assert_eq!(det.step(i % 2 == 0), Verdict::NoChange);
        }
        assert!(!det.window().is_full());
    }

    #[test]
    fn reset_is_idempotent() {
        let mut det = Mddm::arithmetic(10, 0.01, 1e-3).unwrap();
        for i in 0..37 {
            det.step(i % 3 != 0);
        }
        det.reset();
        let once = det.clone();
        det.reset();
        assert_eq!(det, once);
        assert_eq!(det, Mddm::arithmetic(10, 0.01, 1e-3).unwrap());
    }

    #[test]
    fn state_after_drift_equals_fresh_state() {
        let fresh = Mddm::euler(25, 0.01, 1e-6).unwrap();
        let mut det = fresh.clone();
        for _ in 0..25 {
            det.step(true);
        }
        let mut verdict = Verdict::NoChange;
        while verdict != Verdict::Drift {
            verdict = det.step(false);
        }
        assert_eq!(det, fresh);
    }

    #[test]
    fn rejects_invalid_construction() {
        assert!(Mddm::fhddm(0, 1e-6).is_err());
        assert!(Mddm::fhddm(25, 0.0).is_err());
        assert!(Mddm::fhddm(25, 1.5).is_err());
        assert!(Mddm::arithmetic(25, -0.5, 1e-6).is_err());
        assert!(Mddm::from_weights(vec![1.0, 0.0], 1e-6).is_err());
    }

    #[test]
    fn mu_max_never_decreases_between_resets() {
        let mut det = Mddm::arithmetic(8, 0.05, 1e-9).unwrap();
        let mut last = 0.0;
        let mut x: u32 = 17;
        for _ in 0..5000 {
            x = x.wrapping_mul(1_103_515_245).wrapping_add(12_345);
            let v = det.step(!(x >> 16).is_multiple_of(4));
            if v == Verdict::Drift {
                last = 0.0;
                continue;
            }
            assert!(det.mu_max() >= last);
            if let Some(mu) = det.window().weighted_mean() {
                assert!(det.mu_max() - mu >= 0.0);
            }
            last = det.mu_max();
        }
    }
}
