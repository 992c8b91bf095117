use serde::{Deserialize, Serialize};

use crate::config::CheckConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// One measured defect with the threshold it was judged against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub name: String,
    /// Spectral-norm estimate (or absolute difference for scalar checks).
    pub value: f64,
    /// Frobenius norm of the same defect, an upper bound on `value`.
    pub frobenius: f64,
    pub order: usize,
    /// Inner dimension used for products; equals `order` when unpadded.
    pub padding: usize,
    pub tail_bound: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Largest threshold the tail allowance may raise a check to.
const TAIL_CEILING: f64 = 1e-6;

impl ResidualReport {
    /// Judged at `max(base, tail_factor * tail_bound)`, never above
    /// `max(base, 1e-6)` so that an unresolved tail cannot pass a check.
    #[allow(clippy::too_many_arguments)]
    pub fn judge(
        name: impl Into<String>,
        value: f64,
        frobenius: f64,
        order: usize,
        padding: usize,
        tail_bound: f64,
        base: f64,
        cfg: &CheckConfig,
    ) -> Self {
        let raised = cfg.threshold(base, tail_bound);
        let tolerance = if raised.is_finite() { raised.min(base.max(TAIL_CEILING)) } else { base };
        Self {
            name: name.into(),
            value,
            frobenius,
            order,
            padding,
            tail_bound,
            tolerance,
            verdict: Verdict::from_bool(value <= tolerance),
        }
    }

    /// A check with a fixed threshold and no truncation component.
    pub fn exact(name: impl Into<String>, value: f64, order: usize, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            frobenius: value,
            order,
            padding: order,
            tail_bound: 0.0,
            tolerance,
            verdict: Verdict::from_bool(value <= tolerance),
        }
    }

    /// A precondition that holds or not; `value` is the measured defect.
    pub fn condition(name: impl Into<String>, holds: bool, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            frobenius: value,
            order: 0,
            padding: 0,
            tail_bound: 0.0,
            tolerance,
            verdict: Verdict::from_bool(holds),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    /// Same measurement judged against a different floor.
    pub fn rejudged(&self, base: f64, cfg: &CheckConfig) -> Self {
        Self::judge(self.name.clone(), self.value, self.frobenius, self.order, self.padding, self.tail_bound, base, cfg)
    }
}
