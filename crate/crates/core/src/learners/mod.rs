//! Incremental classification and the prequential (test-then-train) loop.

mod naive_bayes;
mod prequential;

pub use naive_bayes::{Gaussian, NaiveBayes, VARIANCE_FLOOR};
pub use prequential::{prequential_run, AdaptationPolicy, Prequential, RunRecord};

use crate::error::Result;
use crate::stream::{Attribute, LabeledInstance};

/// An online classifier that can be wiped back to its untrained state.
pub trait Classifier {
    /// Fails with [`Error::NotReady`](crate::Error::NotReady) before the
    /// first training instance.
    fn predict(&self, attributes: &[Attribute]) -> Result<u32>;

    fn train(&mut self, instance: &LabeledInstance) -> Result<()>;

    fn reset(&mut self);
}
