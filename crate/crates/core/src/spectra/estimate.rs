use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Certified interval for a radius or norm, with the sequence of estimates
/// it was derived from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// `(n, estimate)` pairs with strictly increasing `n`.
    pub trace: Vec<(u64, f64)>,
    pub n_max: u64,
}

impl SpectralEstimate {
    /// Clamps `value` into `[lower, upper]`.
    pub(crate) fn new(value: f64, lower: f64, upper: f64, trace: Vec<(u64, f64)>, n_max: u64) -> Self {
        let lower = lower.max(0.0);
        let upper = upper.max(lower);
        SpectralEstimate { value: value.clamp(lower, upper), lower, upper, trace, n_max }
    }

    /// `upper - lower`.
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Intersection of two certified intervals for the same quantity.
    pub fn intersect(&self, other: &SpectralEstimate) -> SpectralEstimate {
        let lower = self.lower.max(other.lower);
        let upper = self.upper.min(other.upper).max(lower);
        let (value, trace, n_max) = if self.width() <= other.width() {
            (self.value, self.trace.clone(), self.n_max)
        } else {
            (other.value, other.trace.clone(), other.n_max)
        };
        SpectralEstimate::new(value, lower, upper, trace, n_max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("estimate serializes")
    }
}

/// Tuning shared by the estimators.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorOptions {
    /// Largest power reached by repeated squaring; a power of two.
    pub n_max: u64,
    /// Relative truncation threshold on exponential-growth groups.
    pub truncation: f64,
    /// Largest support a squared element may have.
    pub support_cap: usize,
    /// Largest number of term pairs a single squaring may multiply.
    pub pair_budget: usize,
    /// Grid points per axis for lattice Fourier bounds.
    pub grid: usize,
    /// Relative gap under which intervals count as agreeing.
    pub tol: f64,
}

pub const DEFAULT_N_MAX: u64 = 1024;
pub const DEFAULT_TRUNCATION: f64 = 1e-14;
pub const DEFAULT_SUPPORT_CAP: usize = 4_000_000;
pub const DEFAULT_PAIR_BUDGET: usize = 1 << 24;
pub const DEFAULT_GRID: usize = 1024;
pub const DEFAULT_TOL: f64 = 0.05;

impl Default for EstimatorOptions {
    fn default() -> Self {
        EstimatorOptions {
            n_max: DEFAULT_N_MAX,
            truncation: DEFAULT_TRUNCATION,
            support_cap: DEFAULT_SUPPORT_CAP,
            pair_budget: DEFAULT_PAIR_BUDGET,
            grid: DEFAULT_GRID,
            tol: DEFAULT_TOL,
        }
    }
}

impl EstimatorOptions {
    pub fn with_n_max(n_max: u64) -> Self {
        EstimatorOptions { n_max, ..Default::default() }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.n_max < 2 || !self.n_max.is_power_of_two() {
            return Err(Error::Domain(format!("n_max must be a power of two >= 2, got {}", self.n_max)));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be finite and nonnegative, got {}", self.tol)));
        }
        Ok(())
    }
}
