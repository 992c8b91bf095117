use serde::{Deserialize, Serialize};

/// Numerical knobs shared by every residual check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckConfig {
    /// Floor of every pass threshold; the effective threshold is
    /// `max(tolerance, tail_factor * tail_bound)`.
    pub tolerance: f64,
    pub tail_factor: f64,
    /// Target for the estimated truncation tail when choosing the padded
    /// inner dimension.
    pub padding_target: f64,
    /// Upper bound on the padded dimension as a multiple of the order.
    pub max_padding_factor: usize,
    pub power_iterations: usize,
    pub seed: u64,
    /// Values below this are treated as converged rounding noise by decay checks.
    pub decay_floor: f64,
    /// Coefficient comparison tolerance for unit-scale data.
    pub coefficient_tolerance: f64,
    /// Max coefficient deviation accepted for `phi ∘ phi = id`.
    pub involution_tolerance: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            tail_factor: 10.0,
            padding_target: 1e-12,
            max_padding_factor: 16,
            power_iterations: 100,
            seed: 0x5eed,
            decay_floor: 1e-13,
            coefficient_tolerance: 1e-10,
            involution_tolerance: 1e-9,
        }
    }
}

impl CheckConfig {
    pub fn with_tolerance(self, tolerance: f64) -> Self {
        Self { tolerance, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// `max(base, tail_factor * tail)`.
    pub fn threshold(&self, base: f64, tail: f64) -> f64 {
        base.max(self.tail_factor * tail)
    }
}
