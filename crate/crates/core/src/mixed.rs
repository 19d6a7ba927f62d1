use std::collections::HashSet;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probabilities below this are dropped from a support.
pub const SUPPORT_PRUNE: f64 = 1e-9;
/// Allowed deviation of a probability vector's sum from one.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A finite-support distribution over pure strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawMixed<T>",
    bound(deserialize = "T: Deserialize<'de> + Eq + Hash + Clone")
)]
pub struct MixedStrategy<T> {
    support: Vec<T>,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMixed<T> {
    support: Vec<T>,
    probs: Vec<f64>,
}

impl<T: Eq + Hash + Clone> TryFrom<RawMixed<T>> for MixedStrategy<T> {
    type Error = Error;

    fn try_from(raw: RawMixed<T>) -> Result<Self> {
        MixedStrategy::new(raw.support, raw.probs)
    }
}

impl<T: Eq + Hash + Clone> MixedStrategy<T> {
    /// Validates and prunes. Entries below [`SUPPORT_PRUNE`] are removed and,
    /// if any were, the remainder renormalised.
    pub fn new(support: Vec<T>, probs: Vec<f64>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::contract(format!(
                "mixed strategy has {} strategies but {} probabilities",
                support.len(),
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::contract(format!("invalid probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::contract(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        let mut seen = HashSet::with_capacity(support.len());
        if support.iter().any(|s| !seen.insert(s)) {
            return Err(Error::contract("mixed strategy support has duplicates"));
        }
        Ok(Self::pruned(support, probs))
    }

    /// Normalises nonnegative weights into a distribution, then prunes.
    pub(crate) fn from_weights(support: Vec<T>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::contract("weights must have a positive finite sum"));
        }
        let probs = weights.iter().map(|w| w.max(0.0) / total).collect();
        Ok(Self::pruned(support, probs))
    }

    fn pruned(support: Vec<T>, probs: Vec<f64>) -> Self {
        if probs.iter().all(|&p| p > SUPPORT_PRUNE) {
            return MixedStrategy { support, probs };
        }
        let (support, probs): (Vec<T>, Vec<f64>) = support
            .into_iter()
            .zip(probs)
            .filter(|(_, p)| *p > SUPPORT_PRUNE)
            .unzip();
        let total: f64 = probs.iter().sum();
        let probs = probs.into_iter().map(|p| p / total).collect();
        MixedStrategy { support, probs }
    }

    pub fn pure(strategy: T) -> Self {
        MixedStrategy {
            support: vec![strategy],
            probs: vec![1.0],
        }
    }

    pub fn probability_of(&self, strategy: &T) -> f64 {
        self.iter()
            .find(|(s, _)| *s == strategy)
            .map_or(0.0, |(_, p)| p)
    }
}

impl<T> MixedStrategy<T> {
    pub fn support(&self) -> &[T] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> {
        self.support.iter().zip(self.probs.iter().copied())
    }
}
