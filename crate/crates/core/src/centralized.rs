//! Centralized dual averaging, deterministic and stochastic, and the
//! reference solver that produces `theta*`.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::PairwiseLoss;
use crate::param::{Parameter, Shape};
use crate::problem::{is_checkpoint, Problem, Reference};
use crate::rng::{stream, Stream};
use crate::trace::{Trace, TraceRecord};

pub const REFERENCE_MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralizedMode {
    /// Exact full gradient every step.
    Deterministic,
    /// One ordered pair drawn uniformly from `[n]^2` per step.
    Stochastic,
}

/// Dual averaging state. After `T` steps `theta_bar` is the average of
/// `theta(1), ..., theta(T)`, where `theta(1) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralState {
    pub z: Parameter,
    pub theta: Parameter,
    pub theta_bar: Parameter,
    pub t: usize,
}

impl CentralState {
    pub fn new(shape: Shape) -> Self {
        Self {
            z: Parameter::zeros(shape),
            theta: Parameter::zeros(shape),
            theta_bar: Parameter::zeros(shape),
            t: 0,
        }
    }

    /// One iteration with `g` evaluated at the current `theta`.
    pub fn advance(&mut self, g: &Parameter, problem: &Problem) -> Result<()> {
        self.t += 1;
        let t = self.t as f64;
        self.theta_bar.blend(1.0 / t, &self.theta);
        self.z.axpy(1.0, g);
        let gamma = problem.schedule.gamma(t)?;
        self.theta.assign_scaled(-gamma, &self.z);
        problem.reg.smooth_scaled_in_place(&mut self.theta, t, gamma);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralCheckpoint {
    pub t: usize,
    pub grad_evals: u64,
    pub theta_bar: Parameter,
    pub objective: f64,
}

/// Runs `iterations` steps and records `(t, theta_bar, R_n(theta_bar))` at
/// `t = 0`, every multiple of `stride` and the final step.
pub fn run_centralized(
    problem: &Problem,
    mode: CentralizedMode,
    iterations: usize,
    seed: u64,
    stride: usize,
) -> Result<Vec<CentralCheckpoint>> {
    let n = problem.data.len();
    let mut rng = stream(seed, Stream::CentralizedPairs);
    let mut state = CentralState::new(problem.shape());
    let mut g = problem.zero_param();
    let per_step = match mode {
        CentralizedMode::Deterministic => (n * n) as u64,
        CentralizedMode::Stochastic => 1,
    };
    let mut out = vec![CentralCheckpoint {
        t: 0,
        grad_evals: 0,
        theta_bar: state.theta_bar.clone(),
        objective: problem.objective(&state.theta_bar)?,
    }];
    for t in 1..=iterations {
        match mode {
            CentralizedMode::Deterministic => g = problem.loss.full_gradient(&state.theta, &problem.data)?,
            CentralizedMode::Stochastic => {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                g.set_zero();
                problem
                    .loss
                    .accumulate_grad(&state.theta, problem.data.point(i), problem.data.point(j), 1.0, &mut g);
            }
        }
        state.advance(&g, problem)?;
        if is_checkpoint(t, stride, iterations) {
            out.push(CentralCheckpoint {
                t,
                grad_evals: per_step * t as u64,
                theta_bar: state.theta_bar.clone(),
                objective: problem.objective(&state.theta_bar)?,
            });
        }
    }
    Ok(out)
}

/// Trace rows for a centralized run. Bias and disagreement are zero.
pub fn centralized_trace(checkpoints: &[CentralCheckpoint], reference: Option<&Reference>) -> Trace {
    let records = checkpoints
        .iter()
        .map(|c| TraceRecord {
            t: c.t as u64,
            grad_evals: c.grad_evals,
            obj_mean: c.objective,
            obj_std: 0.0,
            obj_max: c.objective,
            gap_mean: reference.map(|r| c.objective - r.objective),
            bias_term: 0.0,
            bias_term_centered: reference.map(|_| 0.0),
            dual_disagreement: 0.0,
            time: None,
        })
        .collect();
    Trace {
        records,
        warnings: Vec::new(),
    }
}

/// `1e-8 (1 + R_n(0))`.
pub fn default_tolerance(problem: &Problem) -> Result<f64> {
    Ok(1e-8 * (1.0 + problem.objective(&problem.zero_param())?))
}

/// Minimizes `R_n` to the given certificate tolerance.
///
/// The logistic AUC objective is smooth, so it is solved by accelerated
/// proximal gradient with backtracking and gradient restarts; the certificate
/// is `|G| (1 + |y| + |x+|)`, with `G` the gradient mapping at the extrapolated
/// point `y`, which bounds the suboptimality whenever `|theta*| <= 1 + |x+|`.
/// The hinge objective is solved by deterministic dual averaging with the
/// observed-gradient form of the dual averaging bound as certificate,
/// using the largest iterate norm seen in place of `|theta*|`.
pub fn solve_reference(problem: &Problem, tolerance: Option<f64>, max_iterations: usize) -> Result<Reference> {
    let tol = match tolerance {
        Some(t) if t > 0.0 => t,
        Some(t) => return Err(Error::InvalidParameter(format!("tolerance must be positive, got {t}"))),
        None => default_tolerance(problem)?,
    };
    match problem.loss {
        PairwiseLoss::AucLogistic => solve_smooth(problem, tol, max_iterations),
        PairwiseLoss::MetricHinge { .. } => solve_dual_averaging(problem, tol, max_iterations),
    }
}

fn solve_smooth(problem: &Problem, tol: f64, max_iterations: usize) -> Result<Reference> {
    let (loss, data, reg) = (&problem.loss, &problem.data, &problem.reg);
    let mut x = problem.zero_param();
    let mut y = x.clone();
    let mut momentum = 1.0f64;
    let mut lip = 1.0f64;
    let mut cert = f64::INFINITY;
    for it in 1..=max_iterations {
        let gy = loss.full_gradient(&y, data)?;
        lip *= 0.8;
        // local smoothness test on gradients; function values lose precision
        // near the optimum long before gradients do
        let (next, diff) = loop {
            let mut cand = y.clone();
            cand.axpy(-1.0 / lip, &gy);
            reg.smooth_scaled_in_place(&mut cand, 1.0, 1.0 / lip);
            let mut diff = cand.clone();
            diff.axpy(-1.0, &y);
            let mut dg = loss.full_gradient(&cand, data)?;
            dg.axpy(-1.0, &gy);
            if dg.norm() <= lip * diff.norm() {
                break (cand, diff);
            }
            lip *= 2.0;
            if !lip.is_finite() {
                return Err(Error::NonFinite);
            }
        };
        cert = lip * diff.norm() * (1.0 + y.norm() + next.norm());
        if cert <= tol {
            let objective = problem.objective(&next)?;
            return Ok(Reference {
                theta: next,
                objective,
                certificate: cert,
                iterations: it,
            });
        }
        let mut step = next.clone();
        step.axpy(-1.0, &x);
        let restart = diff.dot(&step) < 0.0;
        let m_next = if restart {
            1.0
        } else {
            0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt())
        };
        y = next.clone();
        if !restart {
            y.axpy((momentum - 1.0) / m_next, &step);
        }
        momentum = m_next;
        x = next;
    }
    Err(Error::NotConverged {
        tolerance: tol,
        iterations: max_iterations,
        certificate: cert,
    })
}

fn solve_dual_averaging(problem: &Problem, tol: f64, max_iterations: usize) -> Result<Reference> {
    let mut state = CentralState::new(problem.shape());
    let mut weighted_sq = 0.0;
    let mut radius = 0.0f64;
    let mut cert = f64::INFINITY;
    for t in 1..=max_iterations {
        radius = radius.max(state.theta.norm());
        let g = problem.loss.full_gradient(&state.theta, &problem.data)?;
        state.advance(&g, problem)?;
        let tf = t as f64;
        let gamma = problem.schedule.gamma(tf)?;
        cert = radius * radius / (2.0 * tf * gamma) + weighted_sq / (2.0 * tf);
        if cert <= tol {
            let objective = problem.objective(&state.theta_bar)?;
            return Ok(Reference {
                theta: state.theta_bar,
                objective,
                certificate: cert,
                iterations: t,
            });
        }
        weighted_sq += gamma * g.norm_sq();
    }
    Err(Error::NotConverged {
        tolerance: tol,
        iterations: max_iterations,
        certificate: cert,
    })
}
