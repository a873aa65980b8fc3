//! Comparison detectors monitoring the classifier's error stream.
//!
//! All of them implement [`DriftDetector`](crate::DriftDetector) and take
//! the prediction-correct bit, complementing it internally.

mod adwin;
mod cusum;
mod ddm;
mod eddm;
mod page_hinkley;
mod rddm;

pub use adwin::Adwin;
pub use cusum::Cusum;
pub use ddm::Ddm;
pub use eddm::Eddm;
pub use page_hinkley::PageHinkley;
pub use rddm::{Rddm, RddmParams};

/// Verdict gate shared by the sequential tests.
pub const DEFAULT_MIN_INSTANCES: u64 = 30;

#[inline]
fn error_value(correct: bool) -> f64 {
    if correct {
        0.0
    } else {
        1.0
    }
}
