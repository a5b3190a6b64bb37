//! Step-size schedules `gamma(t)`, defined on real `t >= 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    /// `c / sqrt(t)`
    InvSqrt { c: f64 },
    /// `c / t^(1/2 + alpha)`, `alpha` in (0, 1/2)
    Poly { c: f64, alpha: f64 },
    /// `D / (L_f sqrt(2 t))`
    BoundedDomain { d: f64, lipschitz: f64 },
}

impl StepSchedule {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            StepSchedule::InvSqrt { c } => c > 0.0 && c.is_finite(),
            StepSchedule::Poly { c, alpha } => c > 0.0 && c.is_finite() && alpha > 0.0 && alpha < 0.5,
            StepSchedule::BoundedDomain { d, lipschitz } => {
                d > 0.0 && lipschitz > 0.0 && d.is_finite() && lipschitz.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid step schedule {self:?}")))
        }
    }

    /// `gamma(t)`; errors for `t < 1`.
    pub fn gamma(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(Error::InvalidParameter(format!("step schedule needs t >= 1, got {t}")));
        }
        Ok(self.gamma_unchecked(t))
    }

    pub(crate) fn gamma_unchecked(&self, t: f64) -> f64 {
        match *self {
            StepSchedule::InvSqrt { c } => c / t.sqrt(),
            StepSchedule::Poly { c, alpha } => c / t.powf(0.5 + alpha),
            StepSchedule::BoundedDomain { d, lipschitz } => d / (lipschitz * (2.0 * t).sqrt()),
        }
    }

    /// `sum_{t=1}^{upto} gamma(t)`.
    pub fn partial_sum(&self, upto: usize) -> f64 {
        (1..=upto).map(|t| self.gamma_unchecked(t as f64)).sum()
    }
}
