//! Streaming concept-drift detection.
//!
//! The crate is organised around a single detector interface,
//! [`DriftDetector`], which consumes one prediction outcome per instance
//! (`true` = the classifier was right) and answers with a [`Verdict`].
//!
//! * [`mddm`] holds the weighted sliding-window detectors driven by the
//!   McDiarmid bound (arithmetic, geometric and Euler weighting, and the
//!   uniform-weight FHDDM special case).
//! * [`baselines`] holds CUSUM, Page-Hinkley, DDM, EDDM, RDDM and ADWIN.
//! * [`stream`] generates the Sine1, Mixed, Circles and LED streams with
//!   sigmoid concept transitions, and reads CSV streams.
//! * [`learners`] provides an incremental Naive Bayes classifier and the
//!   prequential (test-then-train) loop.
//! * [`eval`] scores alarm positions against known drift positions and
//!   aggregates runs into mean ± std rows.

pub mod baselines;
pub mod detector;
pub mod error;
pub mod eval;
pub mod learners;
pub mod mddm;
pub mod stream;
pub mod weights;

pub use detector::{DriftDetector, Verdict};
pub use error::{Error, Result};
