//! Synthetic drifting streams and CSV ingestion.
//!
//! Every generator is a pure function of its [`StreamSpec`]: the same spec
//! (seed included) always yields the same instance sequence. Positions are
//! 1-based. Around each scheduled drift point `t0` the concept of instance
//! `t` is the post-drift one with probability
//! `1 / (1 + exp(-4 (t - t0) / zeta))`, where `zeta` is the transition
//! length.

mod circles;
mod csv_io;
mod led;
mod mixed;
mod sine1;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use circles::{circles_label, CIRCLES};
pub use csv_io::{load_csv_stream, write_csv_stream, ColumnKind, CsvSchema, CsvStream};
pub use led::{led_emit, LedLayout, LED_ATTRIBUTES, SEGMENTS};
pub use mixed::mixed_label;
pub use sine1::sine1_label;

/// Deterministic generator used for every stream: ChaCha with 8 rounds,
/// seeded through `SeedableRng::seed_from_u64`.
pub type StreamRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Attribute {
    Numeric(f64),
    Nominal(u32),
}

impl Attribute {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Attribute::Numeric(x) => x,
            Attribute::Nominal(c) => c as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledInstance {
    /// 1-based position in the stream.
    pub position: u64,
    pub attributes: Vec<Attribute>,
    pub label: u32,
    /// Concept that generated the instance (0 for real-world streams).
    pub true_concept: usize,
}

/// Drift points and the transition length around each of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptSchedule {
    positions: Vec<u64>,
    transition: u64,
}

impl ConceptSchedule {
    pub fn new(positions: Vec<u64>, transition: u64) -> Result<Self> {
        if transition == 0 {
            return Err(Error::Config("transition length must be at least 1".into()));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "drift positions must be strictly increasing: {positions:?}"
            )));
        }
        Ok(Self {
            positions,
            transition,
        })
    }

    /// Evenly spaced drifts every `every` instances, strictly inside `length`.
    pub fn every(every: u64, length: u64, transition: u64) -> Result<Self> {
        if every == 0 {
            return Err(Error::Config("drift spacing must be positive".into()));
        }
        let positions = (1..).map(|k| k * every).take_while(|&p| p < length).collect();
        Self::new(positions, transition)
    }

    pub fn none() -> Self {
        Self {
            positions: Vec::new(),
            transition: 1,
        }
    }

    pub fn positions(&self) -> &[u64] {
        &self.positions
    }

    pub fn transition(&self) -> u64 {
        self.transition
    }

    pub fn concepts(&self) -> usize {
        self.positions.len() + 1
    }

    /// Midpoint of the transition that starts at drift `j`.
    ///
    /// A drift position marks where the new concept starts to appear: the
    /// sigmoid is centred half a transition later, so before the drift the
    /// old concept holds with probability at least `1 - 1/(1 + e^2)`.
    pub fn midpoint(&self, j: usize) -> u64 {
        self.positions[j] + self.transition / 2
    }

    /// Samples the active concept at position `t`.
    fn sample_concept(&self, t: u64, rng: &mut StreamRng) -> usize {
        let u: f64 = rng.gen();
        if self.positions.is_empty() {
            return 0;
        }
        // nearest transition midpoint: the last one at or before t, or the next
        let half = self.transition / 2;
        let next = self.positions.partition_point(|&p| p + half <= t);
        let j = if next == 0 {
            0
        } else if next == self.positions.len()
            || t - self.midpoint(next - 1) <= self.midpoint(next) - t
        {
            next - 1
        } else {
            next
        };
        if u < drift_probability(t, self.midpoint(j), self.transition) {
            j + 1
        } else {
            j
        }
    }
}

/// Probability that instance `t` belongs to the concept after drift `t0`.
pub fn drift_probability(t: u64, t0: u64, transition: u64) -> f64 {
    let offset = t as f64 - t0 as f64;
    1.0 / (1.0 + (-4.0 * offset / transition.max(1) as f64).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sine1,
    Mixed,
    Circles,
    Led,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Sine1, Family::Mixed, Family::Circles, Family::Led];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Sine1 => "sine1",
            Family::Mixed => "mixed",
            Family::Circles => "circles",
            Family::Led => "led",
        }
    }

    /// Name used in reports.
    pub fn display_name(&self) -> &'static str {
        match self {
            Family::Sine1 => "Sine1",
            Family::Mixed => "Mixed",
            Family::Circles => "Circles",
            Family::Led => "LED",
        }
    }

    /// Abrupt streams drift every 20 000 instances with `zeta = 50`,
    /// gradual ones every 25 000 with `zeta = 500`.
    pub fn default_schedule(&self, length: u64) -> Result<ConceptSchedule> {
        match self {
            Family::Sine1 | Family::Mixed => ConceptSchedule::every(20_000, length, 50),
            Family::Circles | Family::Led => ConceptSchedule::every(25_000, length, 500),
        }
    }

    pub fn is_gradual(&self) -> bool {
        matches!(self, Family::Circles | Family::Led)
    }

    pub fn attribute_names(&self) -> Vec<String> {
        match self {
            Family::Sine1 | Family::Circles => vec!["x".into(), "y".into()],
            Family::Mixed => vec!["v".into(), "w".into(), "x".into(), "y".into()],
            Family::Led => (1..=LED_ATTRIBUTES).map(|i| format!("a{i}")).collect(),
        }
    }

    /// Declared CSV schema matching what [`write_csv_stream`] produces.
    pub fn csv_schema(&self) -> CsvSchema {
        let kinds = match self {
            Family::Sine1 | Family::Circles => vec![ColumnKind::Numeric; 2],
            Family::Mixed => vec![
                ColumnKind::Code,
                ColumnKind::Code,
                ColumnKind::Numeric,
                ColumnKind::Numeric,
            ],
            Family::Led => vec![ColumnKind::Code; LED_ATTRIBUTES],
        };
        CsvSchema::declared(kinds, ColumnKind::Code)
    }

    pub fn classes(&self) -> u32 {
        match self {
            Family::Led => 10,
            _ => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sine1" => Ok(Family::Sine1),
            "mixed" => Ok(Family::Mixed),
            "circles" => Ok(Family::Circles),
            "led" => Ok(Family::Led),
            other => Err(Error::Config(format!(
                "unknown stream `{other}` (expected one of sine1, mixed, circles, led)"
            ))),
        }
    }
}

pub const DEFAULT_LENGTH: u64 = 100_000;
pub const DEFAULT_NOISE: f64 = 0.10;

#[derive(Debug, Clone, PartialEq)]
pub struct StreamSpec {
    pub family: Family,
    pub length: u64,
    /// Probability of corrupting each label.
    pub noise: f64,
    pub schedule: ConceptSchedule,
    pub seed: u64,
    /// LED only: relevant/irrelevant attribute swaps applied at each drift.
    pub led_swaps: Vec<usize>,
}

impl StreamSpec {
    /// 100 000 instances, 10% class noise, the family's default schedule.
    pub fn new(family: Family, seed: u64) -> Self {
        Self {
            family,
            length: DEFAULT_LENGTH,
            noise: DEFAULT_NOISE,
            schedule: family
                .default_schedule(DEFAULT_LENGTH)
                .expect("default schedule is valid"),
            seed,
            led_swaps: vec![3, 1, 3],
        }
    }

    /// Changes the length; a schedule that is still the family default is
    /// re-derived for the new length, any other schedule is kept.
    pub fn with_length(mut self, length: u64) -> Self {
        if self.family.default_schedule(self.length).ok().as_ref() == Some(&self.schedule) {
            if let Ok(schedule) = self.family.default_schedule(length) {
                self.schedule = schedule;
            }
        }
        self.length = length;
        self
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_schedule(mut self, schedule: ConceptSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.noise) {
            return Err(Error::Config(format!("noise rate must lie in [0, 1), got {}", self.noise)));
        }
        if let Some(&last) = self.schedule.positions().last() {
            if last > self.length {
                return Err(Error::Config(format!(
                    "drift position {last} lies beyond the stream length {}",
                    self.length
                )));
            }
        }
        if self.family == Family::Circles && self.schedule.concepts() > CIRCLES.len() {
            return Err(Error::Config(format!(
                "circles supports at most {} concepts, schedule needs {}",
                CIRCLES.len(),
                self.schedule.concepts()
            )));
        }
        if self.family == Family::Led {
            LedLayout::for_schedule(&self.led_swaps, self.schedule.concepts())?;
        }
        Ok(())
    }
}

/// Lazily generates the instances described by a [`StreamSpec`].
#[derive(Debug, Clone)]
pub struct StreamGenerator {
    spec: StreamSpec,
    rng: StreamRng,
    position: u64,
    layouts: Vec<LedLayout>,
}

/// Validates `spec` and returns its instance iterator.
pub fn generate_stream(spec: &StreamSpec) -> Result<StreamGenerator> {
    spec.validate()?;
    let layouts = if spec.family == Family::Led {
        LedLayout::for_schedule(&spec.led_swaps, spec.schedule.concepts())?
    } else {
        Vec::new()
    };
    Ok(StreamGenerator {
        rng: seeded_rng(spec.seed),
        spec: spec.clone(),
        position: 0,
        layouts,
    })
}

impl StreamGenerator {
    pub fn spec(&self) -> &StreamSpec {
        &self.spec
    }

    /// Per-concept LED layouts (empty for other families).
    pub fn led_layouts(&self) -> &[LedLayout] {
        &self.layouts
    }
}

impl Iterator for StreamGenerator {
    type Item = LabeledInstance;

    fn next(&mut self) -> Option<LabeledInstance> {
        if self.position >= self.spec.length {
            return None;
        }
        self.position += 1;
        let t = self.position;
        let rng = &mut self.rng;
        let concept = self.spec.schedule.sample_concept(t, rng);
        let (attributes, label) = match self.spec.family {
            Family::Sine1 => {
                let (x, y): (f64, f64) = (rng.gen(), rng.gen());
                let label = sine1_label(x, y, concept);
                (vec![Attribute::Numeric(x), Attribute::Numeric(y)], label as u32)
            }
            Family::Mixed => {
                let v: bool = rng.gen();
                let w: bool = rng.gen();
                let (x, y): (f64, f64) = (rng.gen(), rng.gen());
                let label = mixed_label(v, w, x, y, concept);
                let attrs = vec![
                    Attribute::Nominal(v as u32),
                    Attribute::Nominal(w as u32),
                    Attribute::Numeric(x),
                    Attribute::Numeric(y),
                ];
                (attrs, label as u32)
            }
            Family::Circles => {
                let (x, y): (f64, f64) = (rng.gen(), rng.gen());
                let label = circles_label(x, y, concept).expect("validated concept count");
                (vec![Attribute::Numeric(x), Attribute::Numeric(y)], label as u32)
            }
            Family::Led => {
                let (attrs, digit) = led_emit(rng, &self.layouts[concept]);
                (attrs, digit)
            }
        };
        let flip: f64 = rng.gen();
        let label = if flip < self.spec.noise {
            corrupt_label(label, self.spec.family.classes(), rng)
        } else {
            label
        };
        Some(LabeledInstance {
            position: t,
            attributes,
            label,
            true_concept: concept,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.spec.length - self.position) as usize;
        (left, Some(left))
    }
}

/// Replaces `label` with a uniformly chosen different class.
fn corrupt_label(label: u32, classes: u32, rng: &mut StreamRng) -> u32 {
    if classes == 2 {
        return 1 - label;
    }
    let other = rng.gen_range(0..classes - 1);
    if other >= label {
        other + 1
    } else {
        other
    }
}

/// Noise-free label of an instance under a given concept; `None` for LED
/// when the attributes do not spell a digit under that concept's layout.
pub fn clean_label(
    family: Family,
    attributes: &[Attribute],
    concept: usize,
    layouts: &[LedLayout],
) -> Option<u32> {
    let num = |i: usize| attributes[i].as_f64();
    let bit = |i: usize| attributes[i].as_f64() != 0.0;
    match family {
        Family::Sine1 => Some(sine1_label(num(0), num(1), concept) as u32),
        Family::Mixed => Some(mixed_label(bit(0), bit(1), num(2), num(3), concept) as u32),
        Family::Circles => circles_label(num(0), num(1), concept).ok().map(u32::from),
        Family::Led => layouts.get(concept)?.decode(attributes),
    }
}
