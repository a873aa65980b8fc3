//! Window weighting schemes and the McDiarmid bound over normalised weights.

use crate::error::{Error, Result};

/// How weights grow from the tail (oldest) to the head (newest) of a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightScheme {
    /// `w_i = 1 + (i - 1) d`
    Arithmetic { d: f64 },
    /// `w_i = r^(i - 1)`
    Geometric { r: f64 },
    /// Geometric with `r = e^lambda`.
    Euler { lambda: f64 },
    Uniform,
}

pub const DEFAULT_CONFIDENCE: f64 = 1e-6;
pub const DEFAULT_D: f64 = 0.01;
pub const DEFAULT_R: f64 = 1.01;
pub const DEFAULT_LAMBDA: f64 = 0.01;

impl WeightScheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightScheme::Arithmetic { d } if !(d >= 0.0 && d.is_finite()) => {
                Err(Error::domain("d", format!("must be a finite value >= 0, got {d}")))
            }
            WeightScheme::Geometric { r } if !(r >= 1.0 && r.is_finite()) => {
                Err(Error::domain("r", format!("must be a finite value >= 1, got {r}")))
            }
            WeightScheme::Euler { lambda } if !(lambda >= 0.0 && lambda.is_finite()) => Err(
                Error::domain("lambda", format!("must be a finite value >= 0, got {lambda}")),
            ),
            _ => Ok(()),
        }
    }

    /// Ratio between consecutive weights for the exponential schemes.
    fn ratio(&self) -> Option<f64> {
        match *self {
            WeightScheme::Geometric { r } => Some(r),
            WeightScheme::Euler { lambda } => Some(lambda.exp()),
            _ => None,
        }
    }
}

/// Builds `w_1..w_n`, index 0 being the tail of the window.
///
/// The Euler scheme goes through the geometric path with `r = e^lambda`, so
/// a geometric scheme built with the same ratio yields bit-identical weights.
pub fn build_weights(scheme: WeightScheme, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("n", "window size must be at least 1"));
    }
    scheme.validate()?;
    let weights = match scheme {
        WeightScheme::Uniform => vec![1.0; n],
        WeightScheme::Arithmetic { d } => (0..n).map(|i| 1.0 + i as f64 * d).collect(),
        WeightScheme::Geometric { .. } | WeightScheme::Euler { .. } => {
            let r = scheme.ratio().expect("exponential scheme");
            (0..n).map(|i| r.powi(i as i32)).collect()
        }
    };
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::domain("n", format!("weights overflow for window size {n}")));
    }
    Ok(weights)
}

/// `sqrt(sum(v_i^2) / 2 * ln(1 / delta))` with `v_i = w_i / sum(w)`.
pub fn compute_epsilon(weights: &[f64], delta: f64) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::domain("weights", "weight vector is empty"));
    }
    check_confidence(delta)?;
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::domain("weights", format!("weights must be positive, got {w}")));
    }
    let total = compensated_sum(weights.iter().copied());
    let sum_sq = compensated_sum(weights.iter().map(|w| {
        let v = w / total;
        v * v
    }));
    Ok((sum_sq / 2.0 * (1.0 / delta).ln()).sqrt())
}

pub(crate) fn check_confidence(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("delta", format!("confidence must lie in (0, 1), got {delta}")))
    }
}

/// Neumaier summation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
