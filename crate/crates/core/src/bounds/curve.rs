//! Bound curves: a labeled tail bound evaluated on a threshold grid,
//! carrying its parameters for provenance and a clipped copy for plotting
//! against empirical probabilities.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Threshold grid description. `count >= 2`; log spacing needs `min > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log_spaced: bool,
}

impl GridSpec {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        GridSpec { min, max, count, log_spaced: false }
    }

    pub fn build(&self) -> Result<Vec<f64>> {
        if self.count < 2 {
            return Err(Error::Domain("grid needs at least 2 points".into()));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            return Err(Error::Domain("grid needs finite min <= max".into()));
        }
        if self.log_spaced && self.min <= 0.0 {
            return Err(Error::Domain("log grid needs min > 0".into()));
        }
        let n = self.count;
        let pts = if self.log_spaced {
            let ratio = (self.max / self.min).powf(1.0 / (n as f64 - 1.0));
            (0..n).map(|i| self.min * ratio.powi(i as i32)).collect()
        } else {
            let step = (self.max - self.min) / (n as f64 - 1.0);
            (0..n).map(|i| self.min + step * i as f64).collect()
        };
        Ok(pts)
    }
}

/// A tail bound evaluated pointwise on a grid. `values` are the raw bound
/// numbers (may exceed 1); `clipped` is `min(value, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub label: String,
    pub parameters: BTreeMap<String, f64>,
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub clipped: Vec<f64>,
}

impl BoundCurve {
    pub fn from_fn(
        label: impl Into<String>,
        parameters: BTreeMap<String, f64>,
        t_grid: Vec<f64>,
        f: impl Fn(f64) -> Result<f64>,
    ) -> Result<Self> {
        if t_grid.is_empty() {
            return Err(Error::Domain("bound curve needs a nonempty grid".into()));
        }
        if t_grid.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::Domain("grid must be ascending".into()));
        }
        let values: Vec<f64> = t_grid.iter().map(|&t| f(t)).collect::<Result<_>>()?;
        let clipped = values.iter().map(|&v| v.min(1.0)).collect();
        Ok(BoundCurve {
            label: label.into(),
            parameters,
            t_grid,
            values,
            clipped,
        })
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }
}

/// Convenience for the common parameter map literals.
pub fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}
