use std::f64::consts::PI;

use super::Classifier;
use crate::error::{Error, Result};
use crate::stream::{Attribute, LabeledInstance};

/// Lower bound on per-class variances of numeric attributes.
pub const VARIANCE_FLOOR: f64 = 1e-6;

/// Running mean and sum of squared deviations (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Gaussian {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Gaussian {
    pub fn update(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance (`n - 1` denominator), 0 below two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    fn log_density(&self, x: f64) -> f64 {
        let var = self.variance().max(VARIANCE_FLOOR);
        -0.5 * (2.0 * PI * var).ln() - (x - self.mean).powi(2) / (2.0 * var)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum AttributeModel {
    /// One Gaussian per class.
    Numeric(Vec<Gaussian>),
    /// Value counts per class, plus the number of distinct values seen.
    Nominal { counts: Vec<Vec<u64>>, values: usize },
}

impl AttributeModel {
    fn for_value(value: &Attribute) -> Self {
        match value {
            Attribute::Numeric(_) => AttributeModel::Numeric(Vec::new()),
            Attribute::Nominal(_) => AttributeModel::Nominal {
                counts: Vec::new(),
                values: 0,
            },
        }
    }
}

/// Incremental Naive Bayes.
///
/// Predicts `argmax_c log p(c) + sum_j log p(x_j | c)` over the classes
/// seen so far. Nominal likelihoods are Laplace-smoothed,
/// `(count + 1) / (class_count + values)`; numeric likelihoods are
/// Gaussian with the class's running mean and variance. Ties go to the
/// lowest class code.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NaiveBayes {
    class_counts: Vec<u64>,
    total: u64,
    attributes: Vec<AttributeModel>,
}

impl NaiveBayes {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_trained(&self) -> bool {
        self.total > 0
    }

    pub fn class_count(&self, class: u32) -> u64 {
        self.class_counts.get(class as usize).copied().unwrap_or(0)
    }

    /// Running statistics of a numeric attribute within one class.
    pub fn gaussian(&self, attribute: usize, class: u32) -> Option<&Gaussian> {
        match self.attributes.get(attribute)? {
            AttributeModel::Numeric(per_class) => per_class.get(class as usize),
            AttributeModel::Nominal { .. } => None,
        }
    }

    /// Unnormalised log posterior of `class`.
    pub fn log_score(&self, attributes: &[Attribute], class: u32) -> Result<f64> {
        self.check_arity(attributes)?;
        let c = class as usize;
        let n_c = self.class_count(class);
        if n_c == 0 {
            return Ok(f64::NEG_INFINITY);
        }
        let mut score = (n_c as f64 / self.total as f64).ln();
        for (model, value) in self.attributes.iter().zip(attributes) {
            score += match (model, value) {
                (AttributeModel::Numeric(per_class), Attribute::Numeric(x)) => {
                    per_class.get(c).copied().unwrap_or_default().log_density(*x)
                }
                (AttributeModel::Nominal { counts, values }, Attribute::Nominal(v)) => {
                    let hits = counts
                        .get(c)
                        .and_then(|row| row.get(*v as usize))
                        .copied()
                        .unwrap_or(0);
                    ((hits + 1) as f64 / (n_c + (*values).max(1) as u64) as f64).ln()
                }
                _ => return Err(Error::Schema("attribute kind changed".into())),
            };
        }
        Ok(score)
    }

    fn check_arity(&self, attributes: &[Attribute]) -> Result<()> {
        if self.total > 0 && attributes.len() != self.attributes.len() {
            return Err(Error::Schema(format!(
                "expected {} attributes, got {}",
                self.attributes.len(),
                attributes.len()
            )));
        }
        Ok(())
    }
}

impl Classifier for NaiveBayes {
    fn predict(&self, attributes: &[Attribute]) -> Result<u32> {
        if !self.is_trained() {
            return Err(Error::NotReady);
        }
        let mut best = None;
        for class in 0..self.class_counts.len() as u32 {
            if self.class_count(class) == 0 {
                continue;
            }
            let score = self.log_score(attributes, class)?;
            match best {
                Some((_, top)) if score <= top => {}
                _ => best = Some((class, score)),
            }
        }
        Ok(best.map(|(c, _)| c).expect("trained model has a class"))
    }

    fn train(&mut self, instance: &LabeledInstance) -> Result<()> {
        let attrs = &instance.attributes;
        if self.total == 0 && self.attributes.is_empty() {
            self.attributes = attrs.iter().map(AttributeModel::for_value).collect();
        }
        self.check_arity(attrs)?;
        for (model, value) in self.attributes.iter().zip(attrs) {
            match (model, value) {
                (AttributeModel::Numeric(_), Attribute::Numeric(_))
                | (AttributeModel::Nominal { .. }, Attribute::Nominal(_)) => {}
                _ => return Err(Error::Schema("attribute kind changed".into())),
            }
        }

        let c = instance.label as usize;
        if self.class_counts.len() <= c {
            self.class_counts.resize(c + 1, 0);
        }
        self.class_counts[c] += 1;
        self.total += 1;
        for (model, value) in self.attributes.iter_mut().zip(attrs) {
            match (model, value) {
                (AttributeModel::Numeric(per_class), Attribute::Numeric(x)) => {
                    if per_class.len() <= c {
                        per_class.resize(c + 1, Gaussian::default());
                    }
                    per_class[c].update(*x);
                }
                (AttributeModel::Nominal { counts, values }, Attribute::Nominal(v)) => {
                    let v = *v as usize;
                    if counts.len() <= c {
                        counts.resize(c + 1, Vec::new());
                    }
                    if counts[c].len() <= v {
                        counts[c].resize(v + 1, 0);
                    }
                    counts[c][v] += 1;
                    *values = (*values).max(v + 1);
                }
                _ => unreachable!("kinds checked above"),
            }
        }
        Ok(())
    }

    fn reset(&mut self) {
        *self = Self::default();
    }
}
