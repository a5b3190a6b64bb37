use pairgossip::gossip::{run_async, run_sync, AsyncSimulation, GossipConfig, GradientMode, SyncSimulation};
use pairgossip::{DataPoint, Dataset, Graph, PairwiseLoss, Parameter, Problem, Regularizer, StepSchedule};

fn toy(n: usize, seed: u64) -> Dataset {
    pairgossip::data::gen_toy_auc(&pairgossip::data::ToySpec {
        n,
        dim: 3,
        separation: 2.0,
        seed,
    })
    .unwrap()
}

fn auc_problem(data: Dataset) -> Problem {
    Problem::new(
        data,
        PairwiseLoss::AucLogistic,
        Regularizer::SquaredL2 { lambda: 0.01 },
        StepSchedule::InvSqrt { c: 1.0 },
    )
    .unwrap()
}

fn mean(ps: &[Parameter]) -> Parameter {
    let mut m = Parameter::zeros(ps[0].shape());
    for p in ps {
        m.axpy(1.0 / ps.len() as f64, p);
    }
    m
}

#[test]
fn two_node_step_by_hand() {
    let data = Dataset::new(vec![
        DataPoint::new(vec![1.0, 0.5], 1).unwrap(),
        DataPoint::new(vec![-0.5, 2.0], -1).unwrap(),
    ])
    .unwrap();
    let problem = auc_problem(data.clone());
    let graph = Graph::from_edges(2, [(0, 1)]).unwrap();
    let mut sim = SyncSimulation::new(&problem, &graph, GradientMode::Gossip, 0).unwrap();
    sim.step().unwrap();
    let zero = Parameter::zeros(problem.shape());
    let loss = PairwiseLoss::AucLogistic;
    assert_eq!(sim.duals()[0], loss.grad(&zero, data.point(0), data.point(1)).unwrap());
    assert_eq!(sim.duals()[1], loss.grad(&zero, data.point(1), data.point(0)).unwrap());
    assert_eq!(sim.observations()[0], *data.point(1));
    assert_eq!(sim.last_edge(), Some((0, 1)));
}

#[test]
fn identical_data_keeps_duals_equal() {
    let p = DataPoint::new(vec![0.3, -1.0, 2.0], 1).unwrap();
    let q = DataPoint::new(vec![0.3, -1.0, 2.0], -1).unwrap();
    // identical features everywhere: every gradient vanishes or coincides
    let data = Dataset::new(vec![p.clone(), p.clone(), p, q.clone(), q]).unwrap();
    let problem = auc_problem(data);
    let graph = Graph::complete(5).unwrap();
    let cfg = GossipConfig {
        iterations: 200,
        seed: 4,
        checkpoint_stride: 20,
        gradient_mode: GradientMode::Gossip,
    };
    let trace = run_sync(&problem, &graph, &cfg, None).unwrap();
    assert!(trace.records.iter().all(|r| r.dual_disagreement == 0.0));
}

#[test]
fn runs_replay_bit_identically() {
    let problem = auc_problem(toy(5, 1));
    let graph = Graph::cycle(5).unwrap();
    let cfg = GossipConfig {
        iterations: 300,
        seed: 11,
        checkpoint_stride: 10,
        gradient_mode: GradientMode::Gossip,
    };
    let a = run_sync(&problem, &graph, &cfg, None).unwrap();
    let b = run_sync(&problem, &graph, &cfg, None).unwrap();
    assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
    let a = run_async(&problem, &graph, &cfg, None).unwrap();
    let b = run_async(&problem, &graph, &cfg, None).unwrap();
    assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
    let other = run_async(&problem, &graph, &GossipConfig { seed: 12, ..cfg }, None).unwrap();
    assert_ne!(a.to_csv_string().unwrap(), other.to_csv_string().unwrap());
}

#[test]
fn observations_stay_a_permutation() {
    let data = toy(4, 2);
    let problem = auc_problem(data.clone());
    let graph = Graph::complete(4).unwrap();
    for seed in 0..5 {
        let mut sim = SyncSimulation::new(&problem, &graph, GradientMode::Gossip, seed).unwrap();
        for _ in 0..100 {
            sim.step().unwrap();
        }
        let mut seen: Vec<usize> = sim
            .observations()
            .iter()
            .map(|y| data.points().iter().position(|x| x == y).unwrap())
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3]);
    }
}

#[test]
fn averaging_conserves_the_dual_mean() {
    let problem = auc_problem(toy(8, 3));
    let graph = Graph::watts_strogatz(8, 2, 0.3, &mut pairgossip::rng::stream(0, pairgossip::rng::Stream::Topology))
        .unwrap_or_else(|_| Graph::cycle(8).unwrap());
    let mut sim = SyncSimulation::new(&problem, &graph, GradientMode::Gossip, 5).unwrap();
    for _ in 0..200 {
        let mut expected = mean(sim.duals());
        sim.step().unwrap();
        expected.axpy(1.0, &mean(sim.applied()));
        assert!(mean(sim.duals()).distance(&expected) < 1e-12);
    }
}

#[test]
fn zero_iterations_give_the_initial_row() {
    let problem = auc_problem(toy(6, 0));
    let graph = Graph::complete(6).unwrap();
    let cfg = GossipConfig {
        iterations: 0,
        seed: 0,
        checkpoint_stride: 1,
        gradient_mode: GradientMode::Gossip,
    };
    let trace = run_sync(&problem, &graph, &cfg, None).unwrap();
    assert_eq!(trace.records.len(), 1);
    let r0 = problem.objective(&problem.zero_param()).unwrap();
    assert_eq!(trace.records[0].t, 0);
    assert_eq!(trace.records[0].obj_mean, r0);
    assert_eq!(trace.records[0].obj_max, r0);
}

#[test]
fn mismatched_or_disconnected_inputs_fail() {
    let problem = auc_problem(toy(6, 0));
    assert!(SyncSimulation::new(&problem, &Graph::complete(5).unwrap(), GradientMode::Gossip, 0).is_err());
    let split = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
    assert!(AsyncSimulation::new(&problem, &split, GradientMode::Gossip, 0).is_err());
    let cfg = GossipConfig {
        iterations: 5,
        seed: 0,
        checkpoint_stride: 1,
        gradient_mode: GradientMode::Gossip,
    };
    let bipartite = run_sync(&problem, &Graph::cycle(6).unwrap(), &cfg, None).unwrap();
    assert_eq!(bipartite.warnings.len(), 1);
}

#[test]
fn async_counts_two_activations_per_step() {
    let problem = auc_problem(toy(7, 1));
    let graph = Graph::cycle(7).unwrap();
    let mut sim = AsyncSimulation::new(&problem, &graph, GradientMode::Gossip, 9).unwrap();
    for _ in 0..150 {
        sim.step().unwrap();
    }
    assert_eq!(sim.activations().iter().sum::<u64>(), 300);
    assert_eq!(sim.gradient_evaluations(), 300);
    for ((&m, &a), &p) in sim.local_times().iter().zip(sim.activations()).zip(sim.probabilities()) {
        assert!((m - a as f64 / p).abs() < 1e-9);
    }
}

#[test]
fn async_average_matches_explicit_sum() {
    let problem = auc_problem(toy(6, 2));
    let graph = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
    let mut sim = AsyncSimulation::new(&problem, &graph, GradientMode::Gossip, 3).unwrap();
    let mut history: Vec<Vec<Parameter>> = vec![Vec::new(); 6];
    for _ in 0..200 {
        sim.step().unwrap();
        let (i, j) = sim.last_pair().unwrap();
        for k in [i, j] {
            history[k].push(sim.primals()[k].clone());
        }
    }
    for (k, h) in history.iter().enumerate() {
        if h.is_empty() {
            assert_eq!(sim.averages()[k].norm(), 0.0);
            continue;
        }
        assert!(sim.averages()[k].distance(&mean(h)) < 1e-10, "node {k}");
    }
}

#[test]
fn sync_average_matches_explicit_sum() {
    let problem = auc_problem(toy(5, 2));
    let graph = Graph::complete(5).unwrap();
    let mut sim = SyncSimulation::new(&problem, &graph, GradientMode::Gossip, 3).unwrap();
    let mut history: Vec<Vec<Parameter>> = vec![Vec::new(); 5];
    for _ in 0..200 {
        sim.step().unwrap();
        for (k, h) in history.iter_mut().enumerate() {
            h.push(sim.primals()[k].clone());
        }
    }
    for (k, h) in history.iter().enumerate() {
        assert!(sim.averages()[k].distance(&mean(h)) < 1e-10);
    }
}

#[test]
fn single_edge_async_step_equals_sync_step() {
    // with one edge both nodes are always active, p_k = 1 and m_k = t
    let problem = auc_problem(toy(2, 5));
    let graph = Graph::from_edges(2, [(0, 1)]).unwrap();
    let mut s = SyncSimulation::new(&problem, &graph, GradientMode::Gossip, 1).unwrap();
    let mut a = AsyncSimulation::new(&problem, &graph, GradientMode::Gossip, 1).unwrap();
    assert_eq!(a.probabilities(), &[1.0, 1.0]);
    for _ in 0..50 {
        s.step().unwrap();
        a.step().unwrap();
        for k in 0..2 {
            assert!(s.duals()[k].distance(&a.duals()[k]) < 1e-14);
            assert!(s.primals()[k].distance(&a.primals()[k]) < 1e-14);
            assert!(s.averages()[k].distance(&a.averages()[k]) < 1e-14);
        }
    }
}

#[test]
fn baseline_mode_runs_and_differs() {
    let problem = auc_problem(toy(10, 0));
    let graph = Graph::complete(10).unwrap();
    let cfg = GossipConfig {
        iterations: 500,
        seed: 2,
        checkpoint_stride: 100,
        gradient_mode: GradientMode::Gossip,
    };
    let g = run_sync(&problem, &graph, &cfg, None).unwrap();
    let b = run_sync(
        &problem,
        &graph,
        &GossipConfig {
            gradient_mode: GradientMode::UnbiasedBaseline,
            ..cfg
        },
        None,
    )
    .unwrap();
    let (gl, bl) = (g.last().unwrap(), b.last().unwrap());
    assert_ne!(gl.obj_mean, bl.obj_mean);
    assert!((gl.obj_mean - bl.obj_mean).abs() < 0.1 * bl.obj_mean);
}

#[test]
fn async_trace_has_time_columns() {
    let problem = auc_problem(toy(6, 0));
    let graph = Graph::complete(6).unwrap();
    let cfg = GossipConfig {
        iterations: 40,
        seed: 0,
        checkpoint_stride: 10,
        gradient_mode: GradientMode::Gossip,
    };
    let csv = run_async(&problem, &graph, &cfg, None).unwrap().to_csv_string().unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "t,obj_mean,obj_std,obj_max,gap_mean,bias_term,bias_term_centered,dual_disagreement,m_min,m_max,m_mean,m_dev_scaled,grad_evals"
    );
    assert_eq!(csv.lines().count(), 6);
}
