use rand::Rng as _;

use super::{bias_of, check_inputs, trace_row, GossipConfig, GradientMode, Nodes, RowInputs};
use crate::analysis::BiasInputs;
use crate::error::Result;
use crate::graph::Graph;
use crate::loss::DataPoint;
use crate::param::Parameter;
use crate::problem::{is_checkpoint, Problem, Reference};
use crate::rng::{stream, Rng, Stream};
use crate::trace::{Trace, TimeStats, TraceRecord};

/// Asynchronous gossip dual averaging: only the two endpoints of the drawn
/// edge act, weighting their gradients by `1/p_k` and indexing the smoothing
/// operator by their local time estimates `m_k`.
pub struct AsyncSimulation<'a> {
    problem: &'a Problem,
    graph: &'a Graph,
    mode: GradientMode,
    nodes: Nodes,
    p: Vec<f64>,
    m: Vec<f64>,
    activations: Vec<u64>,
    t: usize,
    edge_rng: Rng,
    baseline_rng: Rng,
    /// Activated pair of the last step with the applied directions and the
    /// points they were evaluated at, in the same order.
    last_pair: Option<(usize, usize)>,
    applied: [Parameter; 2],
    evaluated_at: [Parameter; 2],
}

impl<'a> AsyncSimulation<'a> {
    pub fn new(problem: &'a Problem, graph: &'a Graph, mode: GradientMode, seed: u64) -> Result<Self> {
        check_inputs(problem, graph)?;
        let nodes = Nodes::new(problem);
        let n = nodes.z.len();
        let zero = problem.zero_param();
        Ok(Self {
            problem,
            graph,
            mode,
            nodes,
            p: graph.activation_probabilities(),
            m: vec![0.0; n],
            activations: vec![0; n],
            t: 0,
            edge_rng: stream(seed, Stream::EdgeDraws),
            baseline_rng: stream(seed, Stream::BaselinePairs),
            last_pair: None,
            applied: [zero.clone(), zero.clone()],
            evaluated_at: [zero.clone(), zero],
        })
    }

    pub fn step(&mut self) -> Result<()> {
        self.t += 1;
        let n = self.nodes.z.len();
        let (i, j) = self.graph.sample_edge(&mut self.edge_rng);
        self.last_pair = Some((i, j));
        self.nodes.swap_observations(i, j);
        self.nodes.average_duals(i, j);
        let (loss, reg, data, schedule) = (
            &self.problem.loss,
            &self.problem.reg,
            &self.problem.data,
            &self.problem.schedule,
        );
        for (slot, k) in [i, j].into_iter().enumerate() {
            let inv_p = 1.0 / self.p[k];
            std::mem::swap(&mut self.evaluated_at[slot], &mut self.nodes.theta[k]);
            let other: &DataPoint = match self.mode {
                GradientMode::Gossip => &self.nodes.y[k],
                GradientMode::UnbiasedBaseline => data.point(self.baseline_rng.random_range(0..n)),
            };
            let d = &mut self.applied[slot];
            d.set_zero();
            loss.accumulate_grad(&self.evaluated_at[slot], data.point(k), other, inv_p, d);
            self.nodes.z[k].axpy(1.0, d);
            self.m[k] += inv_p;
            self.activations[k] += 1;
            let mk = self.m[k];
            let gamma = schedule.gamma(mk)?;
            let theta = &mut self.nodes.theta[k];
            theta.assign_scaled(-gamma, &self.nodes.z[k]);
            reg.smooth_scaled_in_place(theta, mk, gamma);
            self.nodes.theta_bar[k].blend(1.0 / (mk * self.p[k]), theta);
        }
        Ok(())
    }

    pub fn iteration(&self) -> usize {
        self.t
    }

    pub fn last_pair(&self) -> Option<(usize, usize)> {
        self.last_pair
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

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    /// Local time estimates `m_k`.
    pub fn local_times(&self) -> &[f64] {
        &self.m
    }

    pub fn activations(&self) -> &[u64] {
        &self.activations
    }

    pub fn gradient_evaluations(&self) -> u64 {
        2 * self.t as u64
    }

    pub fn time_stats(&self) -> TimeStats {
        let n = self.m.len() as f64;
        let t = self.t as f64;
        let dev = if self.t == 0 {
            0.0
        } else {
            self.m.iter().map(|m| (m - t).abs()).fold(0.0, f64::max) / t.powf(0.6)
        };
        TimeStats {
            m_min: self.m.iter().copied().fold(f64::INFINITY, f64::min),
            m_max: self.m.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            m_mean: self.m.iter().sum::<f64>() / n,
            m_dev_scaled: dev,
        }
    }

    /// Bias of the last step, as for the synchronous runner, with exact
    /// gradients weighted by `delta_k / p_k` and `omega` indexed by the first
    /// activated node's local time.
    pub fn bias(&self, reference: Option<&Reference>) -> Result<Option<(f64, f64)>> {
        let Some((i, j)) = self.last_pair else {
            return Ok(None);
        };
        let n = self.nodes.z.len();
        let mut applied = vec![self.problem.zero_param(); n];
        let mut evaluated_at = applied.clone();
        let mut weights = vec![0.0; n];
        for (slot, k) in [i, j].into_iter().enumerate() {
            applied[k] = self.applied[slot].clone();
            evaluated_at[k] = self.evaluated_at[slot].clone();
            weights[k] = 1.0 / self.p[k];
        }
        let inputs = BiasInputs {
            applied: &applied,
            evaluated_at: &evaluated_at,
            exact_weights: &weights,
            duals: &self.nodes.z,
            time_index: self.m[i],
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
                time: Some(self.time_stats()),
            },
        )
    }
}

/// Runs `cfg.iterations` asynchronous steps (two gradient evaluations each),
/// recording rows like [`super::run_sync`] plus local time statistics.
pub fn run_async(problem: &Problem, graph: &Graph, cfg: &GossipConfig, reference: Option<&Reference>) -> Result<Trace> {
    let mut sim = AsyncSimulation::new(problem, graph, cfg.gradient_mode, cfg.seed)?;
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
