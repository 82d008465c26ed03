use serde::{Deserialize, Serialize};

use crate::VerifyError;

/// Sampling plan shared by every suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub seed: u64,
    pub draws_per_rule: usize,
    /// Half-width of the complex rectangle free parameters are drawn from.
    pub param_bound: f64,
    /// Points are drawn with |x| <= x_fraction * (radius of the series).
    pub x_fraction: f64,
    /// Replaces every suite tolerance when set.
    pub tol_override: Option<f64>,
}

impl Default for SamplePlan {
    fn default() -> Self {
        Self { seed: 0, draws_per_rule: 20, param_bound: 2.0, x_fraction: 0.2, tol_override: None }
    }
}

impl SamplePlan {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.draws_per_rule == 0 {
            return Err(VerifyError::InvalidPlan("draws must be at least 1".into()));
        }
        // below 0.5 most draws sit next to a pole and rejection sampling stalls
        if !(0.5..=10.0).contains(&self.param_bound) {
            return Err(VerifyError::InvalidPlan("parameter bound must lie in [0.5, 10]".into()));
        }
        if !(self.x_fraction > 0.0 && self.x_fraction < 1.0) {
            return Err(VerifyError::InvalidPlan("x fraction must lie in (0, 1)".into()));
        }
        if let Some(t) = self.tol_override {
            if !(t.is_finite() && t >= 0.0) {
                return Err(VerifyError::InvalidPlan("tolerance must be finite and nonnegative".into()));
            }
        }
        Ok(())
    }

    /// Draw count for checks with a fixed minimum sample size.
    pub fn at_least(&self, n: usize) -> usize {
        self.draws_per_rule.max(n)
    }

    pub fn tol(&self, default: f64) -> f64 {
        self.tol_override.unwrap_or(default)
    }
}
