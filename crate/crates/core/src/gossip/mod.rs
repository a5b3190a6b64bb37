//! Gossip dual averaging over a communication graph, one data point per node.

mod asynchronous;
mod sync;

pub use asynchronous::{run_async, AsyncSimulation};
pub use sync::{run_sync, SyncSimulation};

use serde::{Deserialize, Serialize};

use crate::analysis::{bias_sample, dual_disagreement, objective_stats, BiasInputs};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::loss::DataPoint;
use crate::param::Parameter;
use crate::problem::{Problem, Reference};
use crate::trace::{TimeStats, TraceRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    /// Gradient against the auxiliary observation received through swaps.
    #[default]
    Gossip,
    /// Gradient against a fresh uniformly drawn data point (needs global
    /// data access, used as a baseline).
    UnbiasedBaseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GossipConfig {
    pub iterations: usize,
    pub seed: u64,
    pub checkpoint_stride: usize,
    #[serde(default)]
    pub gradient_mode: GradientMode,
}

/// Checks sizes and connectivity; returns warnings for conditions the
/// convergence theory excludes but the simulation tolerates.
fn check_inputs(problem: &Problem, graph: &Graph) -> Result<Vec<String>> {
    if graph.node_count() != problem.data.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} data points (one per node)", graph.node_count()),
            got: format!("{} data points", problem.data.len()),
        });
    }
    let mut warnings = Vec::new();
    match graph.check_gossip_preconditions() {
        Ok(()) => {}
        Err(Error::Bipartite) => {
            warnings.push("graph is bipartite; convergence guarantees assume a non-bipartite graph".into())
        }
        Err(e) => return Err(e),
    }
    Ok(warnings)
}

/// Per-node state in structure-of-arrays layout.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Nodes {
    pub y: Vec<DataPoint>,
    pub z: Vec<Parameter>,
    pub theta: Vec<Parameter>,
    pub theta_bar: Vec<Parameter>,
}

impl Nodes {
    fn new(problem: &Problem) -> Self {
        let n = problem.data.len();
        let zero = problem.zero_param();
        Self {
            y: problem.data.points().to_vec(),
            z: vec![zero.clone(); n],
            theta: vec![zero.clone(); n],
            theta_bar: vec![zero; n],
        }
    }

    /// `z_i, z_j <- (z_i + z_j) / 2`.
    fn average_duals(&mut self, i: usize, j: usize) {
        let (a, b) = pair_mut(&mut self.z, i, j);
        for (u, v) in a.as_mut_slice().iter_mut().zip(b.as_mut_slice()) {
            let m = 0.5 * (*u + *v);
            *u = m;
            *v = m;
        }
    }

    fn swap_observations(&mut self, i: usize, j: usize) {
        self.y.swap(i, j);
    }
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = v.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    }
}

/// Inputs for one trace row beyond the node state.
struct RowInputs {
    t: u64,
    grad_evals: u64,
    /// `(bias_term, bias_term_centered)` of the last step.
    bias: Option<(f64, f64)>,
    time: Option<TimeStats>,
}

fn bias_of(problem: &Problem, inputs: BiasInputs<'_>, reference: Option<&Reference>) -> Result<(f64, f64)> {
    let zero = problem.zero_param();
    let star = reference.map_or(&zero, |r| &r.theta);
    bias_sample(inputs, &problem.data, &problem.loss, &problem.reg, &problem.schedule, star)
}

fn trace_row(problem: &Problem, nodes: &Nodes, reference: Option<&Reference>, row: RowInputs) -> Result<TraceRecord> {
    let stats = objective_stats(&nodes.theta_bar, &problem.data, &problem.loss, &problem.reg)?;
    let (bias_term, centered) = match row.bias {
        Some((b, c)) => (b, reference.map(|_| c)),
        None => (0.0, reference.map(|_| 0.0)),
    };
    Ok(TraceRecord {
        t: row.t,
        grad_evals: row.grad_evals,
        obj_mean: stats.mean,
        obj_std: stats.std,
        obj_max: stats.max,
        gap_mean: reference.map(|r| stats.mean - r.objective),
        bias_term,
        bias_term_centered: centered,
        dual_disagreement: dual_disagreement(&nodes.z),
        time: row.time,
    })
}
