use super::Classifier;
use crate::detector::{DriftDetector, Verdict};
use crate::error::{Error, Result};
use crate::stream::LabeledInstance;

/// What happens to the classifier when an alarm is raised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdaptationPolicy {
    /// Drop the model and learn from scratch.
    #[default]
    Reset,
    /// Record the alarm, keep the model.
    Keep,
    /// No detector: rebuild the model every `period` instances.
    Blind { period: u64 },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunRecord {
    /// Positions at which a drift was signalled (strictly increasing).
    pub alarms: Vec<u64>,
    pub warnings: u64,
    pub correct: u64,
    pub processed: u64,
    /// Per-instance prediction outcomes, when requested.
    pub outcomes: Option<Vec<bool>>,
}

impl RunRecord {
    /// Fraction of correct predictions over every instance processed;
    /// predictions made by an untrained model count as wrong.
    pub fn accuracy(&self) -> f64 {
        if self.processed == 0 {
            0.0
        } else {
            self.correct as f64 / self.processed as f64
        }
    }
}

/// Incremental form of the test-then-train loop, one instance at a time.
pub struct Prequential<'a, C: Classifier> {
    model: &'a mut C,
    detector: Option<&'a mut dyn DriftDetector>,
    policy: AdaptationPolicy,
    record: RunRecord,
}

impl<'a, C: Classifier> Prequential<'a, C> {
    pub fn new(
        model: &'a mut C,
        detector: Option<&'a mut dyn DriftDetector>,
        policy: AdaptationPolicy,
    ) -> Result<Self> {
        if let AdaptationPolicy::Blind { period } = policy {
            if detector.is_some() {
                return Err(Error::Config("blind adaptation runs without a detector".into()));
            }
            if period == 0 {
                return Err(Error::Config("blind adaptation period must be positive".into()));
            }
        }
        Ok(Self {
            model,
            detector,
            policy,
            record: RunRecord::default(),
        })
    }

    pub fn record_outcomes(mut self) -> Self {
        self.record.outcomes = Some(Vec::new());
        self
    }

    /// Tests on `instance`, feeds the outcome to the detector, adapts, then
    /// trains on `instance`.
    pub fn process(&mut self, instance: &LabeledInstance) -> Result<Verdict> {
        let correct = match self.model.predict(&instance.attributes) {
            Ok(label) => label == instance.label,
            Err(Error::NotReady) => false,
            Err(e) => return Err(e),
        };
        self.record.processed += 1;
        self.record.correct += correct as u64;
        if let Some(out) = self.record.outcomes.as_mut() {
            out.push(correct);
        }

        let verdict = match (&mut self.detector, self.policy) {
            (_, AdaptationPolicy::Blind { period }) => {
                if instance.position.is_multiple_of(period) {
                    Verdict::Drift
                } else {
                    Verdict::NoChange
                }
            }
            (Some(det), _) => det.step(correct),
            (None, _) => Verdict::NoChange,
        };
        match verdict {
            Verdict::Drift => {
                self.record.alarms.push(instance.position);
                if self.policy != AdaptationPolicy::Keep {
                    self.model.reset();
                }
            }
            Verdict::Warning => self.record.warnings += 1,
            Verdict::NoChange => {}
        }
        self.model.train(instance)?;
        Ok(verdict)
    }

    pub fn finish(self) -> RunRecord {
        self.record
    }
}

/// Runs the whole stream through the test-then-train loop.
pub fn prequential_run<'a, C, I>(
    stream: I,
    model: &'a mut C,
    detector: Option<&'a mut dyn DriftDetector>,
    policy: AdaptationPolicy,
) -> Result<RunRecord>
where
    C: Classifier,
    I: IntoIterator<Item = LabeledInstance>,
{
    let mut run = Prequential::new(model, detector, policy)?;
    for instance in stream {
        run.process(&instance)?;
    }
    Ok(run.finish())
}
