//! Browser bindings for three small demos: graph spectral gaps, a short
//! gossip run on a toy AUC problem, and one-dimensional smoothing operators.
//! The `*_json` functions hold the logic and are plain Rust; the exported
//! wrappers only convert errors.

use pairgossip::analysis::objective_stats;
use pairgossip::centralized::{solve_reference, REFERENCE_MAX_ITERATIONS};
use pairgossip::data::{gen_toy_auc, ToySpec};
use pairgossip::experiment::{build_graph, TopologySpec};
use pairgossip::gossip::{AsyncSimulation, GradientMode, SyncSimulation};
use pairgossip::{Graph, PairwiseLoss, Parameter, Problem, Regularizer, Shape, StepSchedule};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest graph the page will build.
pub const MAX_NODES: usize = 400;
/// Longest gossip run the page will simulate.
pub const MAX_ITERATIONS: usize = 200_000;

fn topology(kind: &str, k: usize, p: f64) -> Result<TopologySpec, String> {
    match kind {
        "complete" => Ok(TopologySpec::Complete),
        "cycle" => Ok(TopologySpec::Cycle),
        "watts_strogatz" => Ok(TopologySpec::WattsStrogatz { k, p }),
        other => Err(format!("unknown topology {other:?}")),
    }
}

fn graph(kind: &str, n: usize, k: usize, p: f64, seed: u64) -> Result<Graph, String> {
    if n > MAX_NODES {
        return Err(format!("at most {MAX_NODES} nodes"));
    }
    build_graph(&topology(kind, k, p)?, n, seed).map_err(|e| e.to_string())
}

/// `{gap, n, edges: [[i, j], ...]}`.
pub fn graph_json(kind: &str, n: usize, k: usize, p: f64, seed: u64) -> Result<Value, String> {
    let g = graph(kind, n, k, p, seed)?;
    let gap = g.spectral_gap().map_err(|e| e.to_string())?;
    Ok(json!({ "gap": gap, "n": n, "edges": g.edges() }))
}

/// Node-mean objective curve of a sync or async run on a toy AUC problem,
/// sampled at 100 checkpoints: `{t, obj_mean, obj_std, optimum}`.
pub fn gossip_json(kind: &str, n: usize, iterations: usize, seed: u64, asynchronous: bool) -> Result<Value, String> {
    if iterations > MAX_ITERATIONS {
        return Err(format!("at most {MAX_ITERATIONS} iterations"));
    }
    let e = |e: pairgossip::Error| e.to_string();
    let g = graph(kind, n, 4, 0.3, seed)?;
    let data = gen_toy_auc(&ToySpec {
        n,
        dim: 5,
        separation: 2.0,
        seed: 0,
    })
    .map_err(e)?;
    let problem = Problem::new(
        data,
        PairwiseLoss::AucLogistic,
        Regularizer::SquaredL2 { lambda: 0.01 },
        StepSchedule::InvSqrt { c: 1.0 },
    )
    .map_err(e)?;
    let optimum = solve_reference(&problem, None, REFERENCE_MAX_ITERATIONS).map_err(e)?.objective;
    let stride = (iterations / 100).max(1);
    let (mut ts, mut means, mut stds) = (Vec::new(), Vec::new(), Vec::new());
    let mut record = |t: usize, avgs: &[Parameter]| -> Result<(), String> {
        let s = objective_stats(avgs, &problem.data, &problem.loss, &problem.reg).map_err(e)?;
        ts.push(t);
        means.push(s.mean);
        stds.push(s.std);
        Ok(())
    };
    if asynchronous {
        let mut sim = AsyncSimulation::new(&problem, &g, GradientMode::Gossip, seed).map_err(e)?;
        record(0, sim.averages())?;
        for t in 1..=iterations {
            sim.step().map_err(e)?;
            if t % stride == 0 {
                record(t, sim.averages())?;
            }
        }
    } else {
        let mut sim = SyncSimulation::new(&problem, &g, GradientMode::Gossip, seed).map_err(e)?;
        record(0, sim.averages())?;
        for t in 1..=iterations {
            sim.step().map_err(e)?;
            if t % stride == 0 {
                record(t, sim.averages())?;
            }
        }
    }
    Ok(json!({ "t": ts, "obj_mean": means, "obj_std": stds, "optimum": optimum }))
}

/// `Pi_t(z)` on a grid of scalar `z` in `[-zmax, zmax]`: `{z, theta}`.
pub fn smoothing_json(kind: &str, lambda: f64, t: f64, gamma: f64, zmax: f64, points: usize) -> Result<Value, String> {
    let (reg, shape) = match kind {
        "zero" => (Regularizer::Zero, Shape::Vector(1)),
        "squared_l2" => (Regularizer::SquaredL2 { lambda }, Shape::Vector(1)),
        "l1" => (Regularizer::L1 { lambda }, Shape::Vector(1)),
        "psd_indicator" => (Regularizer::PsdIndicator, Shape::SymMatrix(1)),
        other => return Err(format!("unknown regularizer {other:?}")),
    };
    reg.validate().map_err(|e| e.to_string())?;
    let points = points.clamp(2, 2000);
    let mut zs = Vec::with_capacity(points);
    let mut thetas = Vec::with_capacity(points);
    for k in 0..points {
        let z = -zmax + 2.0 * zmax * k as f64 / (points - 1) as f64;
        let mut v = Parameter::zeros(shape);
        v.as_mut_slice()[0] = z;
        let theta = reg.smooth(&v, t, gamma).map_err(|e| e.to_string())?;
        zs.push(z);
        thetas.push(theta.as_slice()[0]);
    }
    Ok(json!({ "z": zs, "theta": thetas }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn spectral_gap(kind: &str, n: usize, k: usize, p: f64, seed: u32) -> Result<String, JsError> {
    to_js(graph_json(kind, n, k, p, seed.into()))
}

#[wasm_bindgen]
pub fn gossip_run(kind: &str, n: usize, iterations: usize, seed: u32, asynchronous: bool) -> Result<String, JsError> {
    to_js(gossip_json(kind, n, iterations, seed.into(), asynchronous))
}

#[wasm_bindgen]
pub fn smoothing_curve(kind: &str, lambda: f64, t: f64, gamma: f64, zmax: f64, points: usize) -> Result<String, JsError> {
    to_js(smoothing_json(kind, lambda, t, gamma, zmax, points))
}
