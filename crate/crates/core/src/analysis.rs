//! Measurements taken during a run: objective statistics across nodes, the
//! bias of the gossip gradient estimates, dual disagreement and the
//! theoretical bound constants.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::loss::{Dataset, PairwiseLoss};
use crate::param::Parameter;
use crate::regularizer::Regularizer;
use crate::schedule::StepSchedule;

/// Objective statistics over the nodes' averaged iterates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveStats {
    pub mean: f64,
    /// Population standard deviation across nodes.
    pub std: f64,
    pub max: f64,
}

pub fn objective_stats(
    thetas: &[Parameter],
    data: &Dataset,
    loss: &PairwiseLoss,
    reg: &Regularizer,
) -> Result<ObjectiveStats> {
    let values = thetas
        .par_iter()
        .map(|th| loss.full_objective(th, data, reg))
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarize(&values))
}

pub(crate) fn summarize(values: &[f64]) -> ObjectiveStats {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ObjectiveStats {
        mean,
        std: var.max(0.0).sqrt(),
        max,
    }
}

/// Node average of a set of parameters.
pub fn mean_parameter(params: &[Parameter]) -> Parameter {
    let mut acc = Parameter::zeros(params[0].shape());
    let w = 1.0 / params.len() as f64;
    for p in params {
        acc.axpy(w, p);
    }
    acc
}

/// `(1/n) sum_k |z_k - zbar|`.
pub fn dual_disagreement(duals: &[Parameter]) -> f64 {
    if duals.is_empty() {
        return 0.0;
    }
    let zbar = mean_parameter(duals);
    duals.iter().map(|z| z.distance(&zbar)).sum::<f64>() / duals.len() as f64
}

/// What one step actually applied at each node, for bias measurement.
#[derive(Debug, Clone, Copy)]
pub struct BiasInputs<'a> {
    /// Direction `d_k` added to each node's dual variable (zero for nodes
    /// that did not update).
    pub applied: &'a [Parameter],
    /// Primal point `theta_k` at which `d_k` was evaluated.
    pub evaluated_at: &'a [Parameter],
    /// Weight of the exact partial gradient each `d_k` estimates: 1 for every
    /// node in synchronous mode, `delta_k / p_k` in asynchronous mode.
    pub exact_weights: &'a [f64],
    /// Dual variables after the step.
    pub duals: &'a [Parameter],
    /// Time index of the smoothing operator used for `omega`.
    pub time_index: f64,
}

/// Bias of the update directions against the exact partial gradients.
///
/// `eps_k = d_k - w_k grad f_k(theta_k)`, `epsbar` is their node average and
/// `omega = Pi_t(-zbar)`. Returns `(epsbar' omega, (omega - theta*)' epsbar)`.
/// The centering uses the exact `grad f_k` rather than a single unbiased
/// sample; both have the same conditional expectation.
pub fn bias_sample(
    inputs: BiasInputs<'_>,
    data: &Dataset,
    loss: &PairwiseLoss,
    reg: &Regularizer,
    schedule: &StepSchedule,
    theta_star: &Parameter,
) -> Result<(f64, f64)> {
    let n = inputs.applied.len();
    if inputs.evaluated_at.len() != n || inputs.exact_weights.len() != n || inputs.duals.len() != n || n != data.len() {
        return Err(Error::InvalidParameter("bias inputs must have one entry per node".into()));
    }
    let exact: Vec<Parameter> = (0..n)
        .into_par_iter()
        .map(|k| {
            let w = inputs.exact_weights[k];
            if w == 0.0 {
                Parameter::zeros(theta_star.shape())
            } else {
                loss.partial_gradient_unchecked(&inputs.evaluated_at[k], k, data).scaled(w)
            }
        })
        .collect();
    let mut eps = Parameter::zeros(theta_star.shape());
    let inv_n = 1.0 / n as f64;
    for (d, g) in inputs.applied.iter().zip(&exact) {
        eps.axpy(inv_n, d);
        eps.axpy(-inv_n, g);
    }
    let zbar = mean_parameter(inputs.duals);
    let t = inputs.time_index.max(1.0);
    let omega = reg.smooth(&zbar.scaled(-1.0), t, schedule.gamma(t)?)?;
    let bias = eps.dot(&omega);
    let mut centered = omega;
    centered.axpy(-1.0, theta_star);
    Ok((bias, centered.dot(&eps)))
}

/// Inputs of the synchronous convergence bound.
#[derive(Debug, Clone, Copy)]
pub struct BoundInputs {
    pub theta_star_norm: f64,
    pub lipschitz: f64,
    pub schedule: StepSchedule,
    pub horizon: usize,
    /// `1 - lambda_2` of the expected gossip matrix.
    pub spectral_gap: f64,
}

/// `(C1(T), C2(T))` where
/// `C1 = |theta*|^2 / (2 T gamma(T)) + L^2/(2T) sum_{t<T} gamma(t)` and
/// `C2 = 3 L^2 / (T (1 - sqrt(lambda_2))) sum_{t<T} gamma(t)`.
pub fn bound_constants(b: &BoundInputs) -> Result<(f64, f64)> {
    if b.horizon < 2 {
        return Err(Error::InvalidParameter(format!("bound constants need T >= 2, got {}", b.horizon)));
    }
    if !(b.spectral_gap > 0.0 && b.spectral_gap <= 1.0) || b.lipschitz < 0.0 || b.theta_star_norm < 0.0 {
        return Err(Error::InvalidParameter(format!("invalid bound inputs {b:?}")));
    }
    let t = b.horizon as f64;
    let gamma_sum = b.schedule.partial_sum(b.horizon - 1);
    let l2 = b.lipschitz * b.lipschitz;
    let c1 = b.theta_star_norm.powi(2) / (2.0 * t * b.schedule.gamma(t)?) + l2 / (2.0 * t) * gamma_sum;
    let lambda2 = 1.0 - b.spectral_gap;
    let c2 = 3.0 * l2 / (t * (1.0 - lambda2.sqrt())) * gamma_sum;
    Ok((c1, c2))
}

/// Right-hand side of the dual-disagreement bound, `L / (1 - sqrt(lambda_2))`.
pub fn dual_disagreement_bound(lipschitz: f64, spectral_gap: f64) -> f64 {
    lipschitz / (1.0 - (1.0 - spectral_gap).sqrt())
}
