//! A pairwise learning problem: data, loss, regularizer and step schedule.

use crate::error::{Error, Result};
use crate::loss::{Dataset, PairwiseLoss};
use crate::param::{Parameter, Shape};
use crate::regularizer::Regularizer;
use crate::schedule::StepSchedule;

#[derive(Debug, Clone)]
pub struct Problem {
    pub data: Dataset,
    pub loss: PairwiseLoss,
    pub reg: Regularizer,
    pub schedule: StepSchedule,
}

impl Problem {
    /// Validates each component and their compatibility. The metric hinge
    /// loss pairs with the zero or PSD regularizer; the AUC loss with the
    /// vector regularizers.
    pub fn new(data: Dataset, loss: PairwiseLoss, reg: Regularizer, schedule: StepSchedule) -> Result<Self> {
        loss.validate()?;
        reg.validate()?;
        schedule.validate()?;
        let ok = match loss {
            PairwiseLoss::AucLogistic => !matches!(reg, Regularizer::PsdIndicator),
            PairwiseLoss::MetricHinge { .. } => matches!(reg, Regularizer::Zero | Regularizer::PsdIndicator),
        };
        if !ok {
            return Err(Error::Config(format!("regularizer {reg:?} is not compatible with loss {loss:?}")));
        }
        Ok(Self {
            data,
            loss,
            reg,
            schedule,
        })
    }

    pub fn shape(&self) -> Shape {
        self.loss.param_shape(self.data.dim())
    }

    pub fn zero_param(&self) -> Parameter {
        Parameter::zeros(self.shape())
    }

    /// `R_n(theta)`.
    pub fn objective(&self, theta: &Parameter) -> Result<f64> {
        self.loss.full_objective(theta, &self.data, &self.reg)
    }

    pub fn lipschitz(&self) -> f64 {
        self.loss.lipschitz_bound(&self.data)
    }
}

/// A (near-)minimizer of `R_n` with its solver certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub theta: Parameter,
    pub objective: f64,
    pub certificate: f64,
    pub iterations: usize,
}

/// Iteration `t` is recorded when it is a multiple of `stride` or the last one.
pub(crate) fn is_checkpoint(t: usize, stride: usize, horizon: usize) -> bool {
    t == horizon || t % stride.max(1) == 0
}
