use rand::Rng as _;

use super::{bias_of, check_inputs, trace_row, GossipConfig, GradientMode, Nodes, RowInputs};
use crate::analysis::BiasInputs;
use crate::error::Result;
use crate::graph::Graph;
use crate::loss::DataPoint;
use crate::param::Parameter;
use crate::problem::{is_checkpoint, Problem, Reference};
use crate::rng::{stream, Rng, Stream};
use crate::trace::{Trace, TraceRecord};

/// Synchronous gossip dual averaging: every iteration one edge averages its
/// duals and swaps observations, then every node takes a gradient step.
pub struct SyncSimulation<'a> {
    problem: &'a Problem,
    graph: &'a Graph,
    mode: GradientMode,
    nodes: Nodes,
    /// `d_k` of the last step and the `theta_k` it was evaluated at.
    applied: Vec<Parameter>,
    evaluated_at: Vec<Parameter>,
    t: usize,
    edge_rng: Rng,
    baseline_rng: Rng,
    last_edge: Option<(usize, usize)>,
}

impl<'a> SyncSimulation<'a> {
    pub fn new(problem: &'a Problem, graph: &'a Graph, mode: GradientMode, seed: u64) -> Result<Self> {
        check_inputs(problem, graph)?;
        let nodes = Nodes::new(problem);
        Ok(Self {
            problem,
            graph,
            mode,
            applied: nodes.z.clone(),
            evaluated_at: nodes.z.clone(),
            nodes,
            t: 0,
            edge_rng: stream(seed, Stream::EdgeDraws),
            baseline_rng: stream(seed, Stream::BaselinePairs),
            last_edge: None,
        })
    }

    pub fn step(&mut self) -> Result<()> {
        self.t += 1;
        let t = self.t as f64;
        let n = self.nodes.z.len();
        let (i, j) = self.graph.sample_edge(&mut self.edge_rng);
        self.last_edge = Some((i, j));
        self.nodes.average_duals(i, j);
        self.nodes.swap_observations(i, j);
        let gamma = self.problem.schedule.gamma(t)?;
        let (loss, reg, data) = (&self.problem.loss, &self.problem.reg, &self.problem.data);
        for k in 0..n {
            std::mem::swap(&mut self.evaluated_at[k], &mut self.nodes.theta[k]);
            let other: &DataPoint = match self.mode {
                GradientMode::Gossip => &self.nodes.y[k],
                GradientMode::UnbiasedBaseline => data.point(self.baseline_rng.random_range(0..n)),
            };
            let d = &mut self.applied[k];
            d.set_zero();
            loss.accumulate_grad(&self.evaluated_at[k], data.point(k), other, 1.0, d);
            self.nodes.z[k].axpy(1.0, d);
            let theta = &mut self.nodes.theta[k];
            theta.assign_scaled(-gamma, &self.nodes.z[k]);
            reg.smooth_scaled_in_place(theta, t, gamma);
            self.nodes.theta_bar[k].blend(1.0 / t, theta);
        }
        Ok(())
    }

    pub fn iteration(&self) -> usize {
        self.t
    }

    pub fn last_edge(&self) -> Option<(usize, usize)> {
        self.last_edge
    }

    pub fn observations(&self) -> &[DataPoint] {
        &self.nodes.y
    }

    pub fn duals(&self) -> &[Parameter] {
        &self.nodes.z
    }

    pub fn primals(&self) -> &[Parameter] {
        &self.nodes.theta
    }

    pub fn averages(&self) -> &[Parameter] {
        &self.nodes.theta_bar
    }

    /// Directions `d_k` added to the duals in the last step.
    pub fn applied(&self) -> &[Parameter] {
        &self.applied
    }

    pub fn gradient_evaluations(&self) -> u64 {
        (self.t * self.nodes.z.len()) as u64
    }

    /// `(bias_term, bias_term_centered)` of the last step against the exact
    /// partial gradients, centered at the reference point (or 0 without one).
    /// `None` before the first step.
    pub fn bias(&self, reference: Option<&Reference>) -> Result<Option<(f64, f64)>> {
        if self.t == 0 {
            return Ok(None);
        }
        let weights = vec![1.0; self.nodes.z.len()];
        let inputs = BiasInputs {
            applied: &self.applied,
            evaluated_at: &self.evaluated_at,
            exact_weights: &weights,
            duals: &self.nodes.z,
            time_index: self.t as f64,
        };
        bias_of(self.problem, inputs, reference).map(Some)
    }

    fn record(&self, reference: Option<&Reference>) -> Result<TraceRecord> {
        trace_row(
            self.problem,
            &self.nodes,
            reference,
            RowInputs {
                t: self.t as u64,
                grad_evals: self.gradient_evaluations(),
                bias: self.bias(reference)?,
                time: None,
            },
        )
    }
}

/// Runs `cfg.iterations` synchronous steps, recording a trace row at
/// `t = 0`, every `cfg.checkpoint_stride` steps and the last step.
pub fn run_sync(problem: &Problem, graph: &Graph, cfg: &GossipConfig, reference: Option<&Reference>) -> Result<Trace> {
    let mut sim = SyncSimulation::new(problem, graph, cfg.gradient_mode, cfg.seed)?;
    let mut trace = Trace {
        records: vec![sim.record(reference)?],
        warnings: check_inputs(problem, graph)?,
    };
    for t in 1..=cfg.iterations {
        sim.step()?;
        if is_checkpoint(t, cfg.checkpoint_stride, cfg.iterations) {
            trace.records.push(sim.record(reference)?);
        }
    }
    Ok(trace)
}
