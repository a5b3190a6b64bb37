//! JSON-configured experiments: build the problem and graph, run one or more
//! seeds, write trace CSVs and a JSON summary.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{bound_constants, BoundInputs};
use crate::centralized::{centralized_trace, run_centralized, solve_reference, CentralizedMode, REFERENCE_MAX_ITERATIONS};
use crate::data::{dataset_from_csv, gen_gaussian_mixture, gen_toy_auc, load_breast_cancer, MixtureSpec, ToySpec};
use crate::error::{Error, Result};
use crate::gossip::{run_async, run_sync, GossipConfig, GradientMode};
use crate::graph::{Graph, Topology, DEFAULT_EIGEN_CAP};
use crate::loss::{Dataset, PairwiseLoss};
use crate::problem::{Problem, Reference};
use crate::regularizer::Regularizer;
use crate::rng::{stream, Stream};
use crate::schedule::StepSchedule;
use crate::trace::Trace;

/// Environment variable capping the number of concurrently running seeds.
pub const THREADS_ENV: &str = "PAIRGOSSIP_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    CentralizedDet,
    CentralizedSto,
    Sync,
    Async,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TopologySpec {
    Complete,
    Cycle,
    WattsStrogatz { k: usize, p: f64 },
    /// Edge-list file; the node count comes from its header.
    EdgeList { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    BreastCancer { path: PathBuf },
    /// File written by `gen-synthetic` (`label,x0,...`).
    Csv { path: PathBuf },
    GaussianMixture(MixtureSpec),
    ToyAuc(ToySpec),
}

impl DatasetSpec {
    pub fn load(&self) -> Result<Dataset> {
        match self {
            DatasetSpec::BreastCancer { path } => load_breast_cancer(path),
            DatasetSpec::Csv { path } => dataset_from_csv(&std::fs::read_to_string(path)?),
            DatasetSpec::GaussianMixture(spec) => gen_gaussian_mixture(spec),
            DatasetSpec::ToyAuc(spec) => gen_toy_auc(spec),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceSpec {
    /// Defaults to `1e-8 (1 + R_n(0))`.
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
}

fn default_max_iterations() -> usize {
    REFERENCE_MAX_ITERATIONS
}

impl Default for ReferenceSpec {
    fn default() -> Self {
        Self {
            tolerance: None,
            max_iterations: REFERENCE_MAX_ITERATIONS,
        }
    }
}

fn default_reference() -> Option<ReferenceSpec> {
    Some(ReferenceSpec::default())
}

fn one() -> usize {
    1
}

/// A run configuration. `reference: null` skips the reference solve, which
/// leaves the gap and centered bias columns empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub topology: Option<TopologySpec>,
    pub dataset: DatasetSpec,
    pub loss: PairwiseLoss,
    #[serde(default = "zero_regularizer")]
    pub regularizer: Regularizer,
    pub schedule: StepSchedule,
    #[serde(default)]
    pub gradient_mode: GradientMode,
    pub iterations: usize,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to `max(1, iterations / 100)`.
    #[serde(default)]
    pub checkpoint_stride: Option<usize>,
    /// Number of seeds, `seed, seed + 1, ...`, run concurrently.
    #[serde(default = "one")]
    pub repeats: usize,
    #[serde(default = "default_reference")]
    pub reference: Option<ReferenceSpec>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn zero_regularizer() -> Regularizer {
    Regularizer::Zero
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Field checks that do not need the dataset.
    pub fn validate(&self) -> Result<()> {
        self.loss.validate()?;
        self.regularizer.validate()?;
        self.schedule.validate()?;
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if self.checkpoint_stride == Some(0) {
            return Err(Error::Config("checkpoint_stride must be at least 1".into()));
        }
        let gossip = matches!(self.algorithm, Algorithm::Sync | Algorithm::Async);
        if gossip && self.topology.is_none() {
            return Err(Error::Config("sync and async runs need a topology".into()));
        }
        if !gossip && self.gradient_mode != GradientMode::Gossip {
            return Err(Error::Config("gradient_mode applies to sync and async runs only".into()));
        }
        if let Some(TopologySpec::WattsStrogatz { k, p }) = self.topology {
            if k < 2 || k % 2 != 0 || !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("watts_strogatz needs an even k >= 2 and p in [0, 1], got k = {k}, p = {p}")));
            }
        }
        match (self.loss, self.regularizer) {
            (PairwiseLoss::AucLogistic, Regularizer::PsdIndicator) => {
                Err(Error::Config("psd_indicator needs the metric_hinge loss".into()))
            }
            (PairwiseLoss::MetricHinge { .. }, Regularizer::SquaredL2 { .. } | Regularizer::L1 { .. }) => {
                Err(Error::Config("metric_hinge takes the zero or psd_indicator regularizer".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn stride(&self) -> usize {
        self.checkpoint_stride.unwrap_or((self.iterations / 100).max(1))
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.repeats as u64).map(|k| self.seed.wrapping_add(k)).collect()
    }

    pub fn problem(&self) -> Result<Problem> {
        Problem::new(self.dataset.load()?, self.loss, self.regularizer, self.schedule)
    }

    /// Warnings about settings outside the convergence theory.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.algorithm == Algorithm::Async && !matches!(self.schedule, StepSchedule::Poly { .. }) {
            w.push("asynchronous guarantees assume a poly schedule with alpha in (0, 1/2)".into());
        }
        w
    }
}

/// Builds the graph for one seed. Random topologies draw from the seed's
/// topology stream.
pub fn build_graph(spec: &TopologySpec, n: usize, seed: u64) -> Result<Graph> {
    let graph = match spec {
        TopologySpec::Complete => Graph::build(Topology::Complete, n, &mut stream(seed, Stream::Topology))?,
        TopologySpec::Cycle => Graph::build(Topology::Cycle, n, &mut stream(seed, Stream::Topology))?,
        TopologySpec::WattsStrogatz { k, p } => Graph::build(
            Topology::WattsStrogatz { k: *k, p: *p },
            n,
            &mut stream(seed, Stream::Topology),
        )?,
        TopologySpec::EdgeList { path } => Graph::parse_edge_list(&std::fs::read_to_string(path)?)?,
    };
    if graph.node_count() != n {
        return Err(Error::Config(format!(
            "graph has {} nodes but the dataset has {n} points",
            graph.node_count()
        )));
    }
    Ok(graph)
}

/// Thread pool sized by [`THREADS_ENV`] when set, else by rayon's default.
pub fn job_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let threads: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(threads);
    }
    builder
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceSummary {
    pub objective: f64,
    pub theta_norm: f64,
    pub certificate: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub c1: f64,
    pub c2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub trace_file: String,
    pub edges: Option<usize>,
    pub spectral_gap: Option<f64>,
    pub bounds: Option<Bounds>,
    pub final_t: u64,
    pub final_grad_evals: u64,
    pub final_obj_mean: f64,
    pub final_obj_std: f64,
    pub final_obj_max: f64,
    pub final_gap_mean: Option<f64>,
    /// Mean of `bias_term` over checkpoints in the last 10% of iterations.
    pub bias_mean_tail: f64,
    pub bias_abs_mean_tail: f64,
    /// Mean of `bias_term_centered` over all checkpoints after `t = 0`.
    pub c3_empirical: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub algorithm: Algorithm,
    pub gradient_mode: GradientMode,
    pub iterations: usize,
    pub n: usize,
    pub dim: usize,
    pub lipschitz: f64,
    pub initial_objective: f64,
    pub reference: Option<ReferenceSummary>,
    pub runs: Vec<RunSummary>,
    pub mean_final_obj: f64,
    pub mean_final_gap: Option<f64>,
    pub warnings: Vec<String>,
    pub wall_time_s: f64,
}

/// One seed's output before it is written to disk.
pub struct RunOutput {
    pub trace: Trace,
    pub summary: RunSummary,
}

fn summarize_run(
    cfg: &RunConfig,
    problem: &Problem,
    reference: Option<&Reference>,
    graph: Option<&Graph>,
    seed: u64,
    trace: &Trace,
    trace_file: String,
) -> Result<RunSummary> {
    let last = trace.last().ok_or_else(|| Error::Degenerate("empty trace".into()))?;
    let spectral_gap = match graph {
        Some(g) if g.node_count() <= DEFAULT_EIGEN_CAP => Some(g.spectral_gap()?),
        _ => None,
    };
    let bounds = match (reference, cfg.iterations >= 2) {
        (Some(r), true) => {
            let gap = match cfg.algorithm {
                Algorithm::CentralizedDet | Algorithm::CentralizedSto => Some(1.0),
                _ => spectral_gap,
            };
            match gap {
                Some(g) if g > 0.0 => {
                    let (c1, c2) = bound_constants(&BoundInputs {
                        theta_star_norm: r.theta.norm(),
                        lipschitz: problem.lipschitz(),
                        schedule: problem.schedule,
                        horizon: cfg.iterations,
                        spectral_gap: g,
                    })?;
                    let c2 = if graph.is_some() { c2 } else { 0.0 };
                    Some(Bounds { c1, c2 })
                }
                _ => None,
            }
        }
        _ => None,
    };
    let tail: Vec<f64> = trace
        .records
        .iter()
        .filter(|r| r.t > 0 && 10 * r.t as u128 > 9 * cfg.iterations as u128)
        .map(|r| r.bias_term)
        .collect();
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    let centered: Vec<f64> = trace
        .records
        .iter()
        .filter(|r| r.t > 0)
        .filter_map(|r| r.bias_term_centered)
        .collect();
    let mut warnings = trace.warnings.clone();
    warnings.extend(cfg.warnings());
    Ok(RunSummary {
        seed,
        trace_file,
        edges: graph.map(Graph::edge_count),
        spectral_gap,
        bounds,
        final_t: last.t,
        final_grad_evals: last.grad_evals,
        final_obj_mean: last.obj_mean,
        final_obj_std: last.obj_std,
        final_obj_max: last.obj_max,
        final_gap_mean: last.gap_mean,
        bias_mean_tail: mean(&tail),
        bias_abs_mean_tail: mean(&tail.iter().map(|b| b.abs()).collect::<Vec<_>>()),
        c3_empirical: reference.map(|_| mean(&centered)),
        warnings,
    })
}

/// Runs one seed of `cfg` in memory.
pub fn run_seed(
    cfg: &RunConfig,
    problem: &Problem,
    reference: Option<&Reference>,
    seed: u64,
    trace_file: String,
) -> Result<RunOutput> {
    let graph = match &cfg.topology {
        Some(spec) if matches!(cfg.algorithm, Algorithm::Sync | Algorithm::Async) => {
            Some(build_graph(spec, problem.data.len(), seed)?)
        }
        _ => None,
    };
    let gossip = GossipConfig {
        iterations: cfg.iterations,
        seed,
        checkpoint_stride: cfg.stride(),
        gradient_mode: cfg.gradient_mode,
    };
    let trace = match (cfg.algorithm, &graph) {
        (Algorithm::CentralizedDet, _) => centralized_trace(
            &run_centralized(problem, CentralizedMode::Deterministic, cfg.iterations, seed, cfg.stride())?,
            reference,
        ),
        (Algorithm::CentralizedSto, _) => centralized_trace(
            &run_centralized(problem, CentralizedMode::Stochastic, cfg.iterations, seed, cfg.stride())?,
            reference,
        ),
        (Algorithm::Sync, Some(g)) => run_sync(problem, g, &gossip, reference)?,
        (Algorithm::Async, Some(g)) => run_async(problem, g, &gossip, reference)?,
        _ => return Err(Error::Config("sync and async runs need a topology".into())),
    };
    let summary = summarize_run(cfg, problem, reference, graph.as_ref(), seed, &trace, trace_file)?;
    Ok(RunOutput { trace, summary })
}

pub fn solve_configured_reference(cfg: &RunConfig, problem: &Problem) -> Result<Option<Reference>> {
    cfg.reference
        .map(|spec| solve_reference(problem, spec.tolerance, spec.max_iterations))
        .transpose()
}

fn trace_name(prefix: &str, cfg: &RunConfig, seed: u64) -> String {
    if cfg.repeats == 1 {
        format!("{prefix}trace.csv")
    } else {
        format!("{prefix}trace_seed{seed}.csv")
    }
}

fn run_all(
    cfg: &RunConfig,
    problem: &Problem,
    reference: Option<&Reference>,
    out_dir: &Path,
    prefix: &str,
) -> Result<Vec<RunSummary>> {
    let pool = job_pool()?;
    let outputs = pool.install(|| {
        cfg.seeds()
            .into_par_iter()
            .map(|seed| run_seed(cfg, problem, reference, seed, trace_name(prefix, cfg, seed)))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut summaries = Vec::with_capacity(outputs.len());
    for out in outputs {
        let file = std::fs::File::create(out_dir.join(&out.summary.trace_file))?;
        out.trace.write_csv(std::io::BufWriter::new(file))?;
        summaries.push(out.summary);
    }
    Ok(summaries)
}

fn build_summary(
    cfg: &RunConfig,
    problem: &Problem,
    reference: Option<&Reference>,
    runs: Vec<RunSummary>,
    started: Instant,
) -> Result<Summary> {
    let k = runs.len() as f64;
    let mean_final_obj = runs.iter().map(|r| r.final_obj_mean).sum::<f64>() / k;
    let mean_final_gap = reference.map(|_| runs.iter().filter_map(|r| r.final_gap_mean).sum::<f64>() / k);
    Ok(Summary {
        algorithm: cfg.algorithm,
        gradient_mode: cfg.gradient_mode,
        iterations: cfg.iterations,
        n: problem.data.len(),
        dim: problem.data.dim(),
        lipschitz: problem.lipschitz(),
        initial_objective: problem.objective(&problem.zero_param())?,
        reference: reference.map(|r| ReferenceSummary {
            objective: r.objective,
            theta_norm: r.theta.norm(),
            certificate: r.certificate,
            iterations: r.iterations,
        }),
        runs,
        mean_final_obj,
        mean_final_gap,
        warnings: cfg.warnings(),
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Runs every seed of `cfg`, writing `trace.csv` (or `trace_seed<s>.csv`
/// per seed) and `summary.json` into `out_dir`.
pub fn run_experiment(cfg: &RunConfig, out_dir: &Path) -> Result<Summary> {
    let started = Instant::now();
    std::fs::create_dir_all(out_dir)?;
    let problem = cfg.problem()?;
    let reference = solve_configured_reference(cfg, &problem)?;
    let runs = run_all(cfg, &problem, reference.as_ref(), out_dir, "")?;
    let summary = build_summary(cfg, &problem, reference.as_ref(), runs, started)?;
    write_json(&out_dir.join("summary.json"), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub gossip: Summary,
    pub baseline: Summary,
    /// `|gossip - baseline| / |baseline|` of the seed-averaged final objective.
    pub relative_difference: f64,
}

/// Runs `cfg` in gossip and unbiased-baseline mode with the same seeds,
/// writing `gossip_*.csv`, `baseline_*.csv` and `comparison.json`.
pub fn compare_baseline(cfg: &RunConfig, out_dir: &Path) -> Result<Comparison> {
    if !matches!(cfg.algorithm, Algorithm::Sync | Algorithm::Async) {
        return Err(Error::Config("compare-baseline needs a sync or async config".into()));
    }
    std::fs::create_dir_all(out_dir)?;
    let problem = cfg.problem()?;
    let reference = solve_configured_reference(cfg, &problem)?;
    let mut summaries = Vec::new();
    for (mode, prefix) in [(GradientMode::Gossip, "gossip_"), (GradientMode::UnbiasedBaseline, "baseline_")] {
        let started = Instant::now();
        let c = RunConfig {
            gradient_mode: mode,
            ..cfg.clone()
        };
        let runs = run_all(&c, &problem, reference.as_ref(), out_dir, prefix)?;
        summaries.push(build_summary(&c, &problem, reference.as_ref(), runs, started)?);
    }
    let baseline = summaries.pop().expect("two summaries");
    let gossip = summaries.pop().expect("two summaries");
    let relative_difference = (gossip.mean_final_obj - baseline.mean_final_obj).abs() / baseline.mean_final_obj.abs();
    let cmp = Comparison {
        gossip,
        baseline,
        relative_difference,
    };
    write_json(&out_dir.join("comparison.json"), &cmp)?;
    Ok(cmp)
}
