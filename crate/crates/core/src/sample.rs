//! Validated lifetime samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-empty sequence of positive, finite lifetimes with a cached sorted copy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSample("sample is empty".into()));
        }
        if let Some((i, x)) = values.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidSample(format!(
                "observation {} is {x}; lifetimes must be positive and finite",
                i + 1
            )));
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { values, sorted })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Observations in their original order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Observations in ascending order.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn harmonic_mean(&self) -> f64 {
        self.len() as f64 / self.values.iter().map(|x| 1.0 / x).sum::<f64>()
    }

    pub fn median(&self) -> f64 {
        let n = self.sorted.len();
        if n % 2 == 1 {
            self.sorted[n / 2]
        } else {
            0.5 * (self.sorted[n / 2 - 1] + self.sorted[n / 2])
        }
    }

    /// True when every observation is the same value.
    pub fn is_degenerate(&self) -> bool {
        self.sorted[0] == self.sorted[self.sorted.len() - 1]
    }

    /// Modified-moment estimates of the BS parameters: `β₀ = √(s r)` and
    /// `α₀ = √(2(√(s/r) − 1))`, with `s` the arithmetic and `r` the harmonic mean.
    pub fn bs_moment_start(&self) -> (f64, f64) {
        let s = self.mean();
        let r = self.harmonic_mean();
        let alpha = (2.0 * ((s / r).sqrt() - 1.0)).max(0.0).sqrt();
        (alpha.max(1e-3), (s * r).sqrt())
    }
}
