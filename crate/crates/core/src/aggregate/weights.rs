use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Weights `c = (c1, …, cn)` applied to the descending order statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightScheme {
    raw: Vec<f64>,
    normalized: Vec<f64>,
    c_tilde: f64,
}

impl WeightScheme {
    /// Requires `n ≥ 2`, `c1 > 0`, `c2 > 0` and `cj ≥ 0` otherwise.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.len() < 2 {
            return domain(format!("need at least two weights, got {}", raw.len()));
        }
        if !(raw[1] > 0.0) {
            return domain(format!("c2 must be positive, got {}", raw[1]));
        }
        Self::lenient(raw)
    }

    /// Like [`Self::new`] but accepts `n = 1` and `c2 = 0`; meant for sampling sanity checks.
    pub fn lenient(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return domain("weight vector is empty");
        }
        if !(raw[0] > 0.0 && raw[0].is_finite()) {
            return domain(format!("c1 must be positive, got {}", raw[0]));
        }
        if let Some(bad) = raw.iter().find(|c| !(**c >= 0.0 && c.is_finite())) {
            return domain(format!("weights must be non-negative and finite, got {bad}"));
        }
        let c1 = raw[0];
        let normalized: Vec<f64> = raw.iter().map(|c| c / c1).collect();
        let c2 = normalized.get(1).copied().unwrap_or(0.0);
        Ok(Self {
            c_tilde: c2 / (1.0 + c2),
            raw,
            normalized,
        })
    }

    /// Equal weights `(1, …, 1)`, i.e. the plain sum.
    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn n(&self) -> usize {
        self.raw.len()
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn normalized(&self) -> &[f64] {
        &self.normalized
    }

    pub fn c1(&self) -> f64 {
        self.raw[0]
    }

    /// Normalized second weight `c2/c1`.
    pub fn c2(&self) -> f64 {
        self.normalized.get(1).copied().unwrap_or(0.0)
    }

    /// `ĉ = c2'/(1 + c2')` with `c2' = c2/c1`.
    pub fn c_tilde(&self) -> f64 {
        self.c_tilde
    }

    /// The same scheme divided by `c1`.
    pub fn to_normalized(&self) -> Self {
        Self {
            raw: self.normalized.clone(),
            normalized: self.normalized.clone(),
            c_tilde: self.c_tilde,
        }
    }

    /// Normalized weights `(c2', …, cn')` of `S_{n−1}(c)`.
    pub fn tail_weights(&self) -> &[f64] {
        &self.normalized[1..]
    }
}
