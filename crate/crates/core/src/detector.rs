use std::fmt;

/// Per-instance output of a drift detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Verdict {
    #[default]
    NoChange,
    Warning,
    Drift,
}

impl Verdict {
    pub fn is_drift(self) -> bool {
        self == Verdict::Drift
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NoChange => "no-change",
            Verdict::Warning => "warning",
            Verdict::Drift => "drift",
        })
    }
}

/// A single-stream change detector over prequential outcomes.
///
/// `correct` is `true` when the monitored classifier predicted the instance
/// correctly. Detectors that monitor the error rate take the complement
/// internally, so every implementation is driven the same way.
pub trait DriftDetector: Send {
    fn step(&mut self, correct: bool) -> Verdict;

    /// Return to the freshly constructed state.
    fn reset(&mut self);

    fn name(&self) -> &'static str;
}

impl<D: DriftDetector + ?Sized> DriftDetector for Box<D> {
    fn step(&mut self, correct: bool) -> Verdict {
        (**self).step(correct)
    }

    fn reset(&mut self) {
        (**self).reset()
    }

    fn name(&self) -> &'static str {
        (**self).name()
    }
}
