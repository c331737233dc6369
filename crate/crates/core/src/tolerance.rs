use serde::{Deserialize, Serialize};

/// Relative tolerance with an absolute floor, used for every real-valued
/// exactness and vanishing test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(rel: f64) -> Self {
        Tolerance { rel, ..Default::default() }
    }

    /// Threshold for a quantity whose natural magnitude is `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        (self.rel * scale.abs()).max(self.abs)
    }

    /// Threshold for residuals of the flatness equation, `rel * (1 + scale)`.
    pub fn affine_bound(&self, scale: f64) -> f64 {
        (self.rel * (1.0 + scale.abs())).max(self.abs)
    }
}

pub(crate) fn norm_inf(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}
