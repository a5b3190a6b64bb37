//! Checks shared by the property tests and the acceptance suite. Each
//! returns how far an inequality is violated (`<= 0` means it holds).
#![allow(dead_code)]

use pairgossip::{DataPoint, Dataset, PairwiseLoss, Parameter, Regularizer, Shape, StepSchedule};

pub const REGULARIZERS: [Regularizer; 4] = [
    Regularizer::Zero,
    Regularizer::SquaredL2 { lambda: 0.3 },
    Regularizer::L1 { lambda: 0.2 },
    Regularizer::PsdIndicator,
];

pub fn shape_for(reg: &Regularizer, d: usize) -> Shape {
    match reg {
        Regularizer::PsdIndicator => Shape::SymMatrix(d),
        _ => Shape::Vector(d),
    }
}

/// Symmetrizes matrix-shaped parameters built from raw values.
pub fn param(shape: Shape, values: &[f64]) -> Parameter {
    let mut p = Parameter::zeros(shape);
    p.as_mut_slice().copy_from_slice(&values[..shape.len()]);
    if let Shape::SymMatrix(_) = shape {
        p.symmetrize();
    }
    p
}

/// `|Pi_t(z1) - Pi_t(z2)| - gamma |z1 - z2|`.
pub fn lipschitz_violation(reg: &Regularizer, z1: &Parameter, z2: &Parameter, t: f64, gamma: f64) -> f64 {
    let a = reg.smooth(z1, t, gamma).unwrap();
    let b = reg.smooth(z2, t, gamma).unwrap();
    a.distance(&b) - gamma * z1.distance(z2) * (1.0 + 1e-12) - 1e-14
}

/// Distance bound between smoothing operators at two time indices.
pub fn time_shift_violation(reg: &Regularizer, sched: &StepSchedule, z: &Parameter, t1: f64, t2: f64) -> f64 {
    let (g1, g2) = (sched.gamma(t1).unwrap(), sched.gamma(t2).unwrap());
    let lhs = reg.smooth(z, t2, g2).unwrap().distance(&reg.smooth(z, t1, g1).unwrap());
    let ratio = (g1 / g2).max(g2 / g1);
    let rhs = z.norm() * ((g2 - g1).abs() + (1.5 + ratio) * (1.0 / t1 + 1.0 / t2) * (t1 * g1 - t2 * g2).abs());
    lhs - rhs * (1.0 + 1e-12) - 1e-14
}

/// Runs dual averaging on the directions `us` (`theta(1) = 0`,
/// `theta(t+1) = Pi_t(-sum_{s<=t} u(s))`) and returns
/// `lhs - rhs` of the regret inequality against `theta`. The first step is
/// weighted by `gamma(0) := gamma(1)`; with `gamma(0) = 0` the inequality
/// already fails at `T = 1`.
pub fn regret_violation(reg: &Regularizer, sched: &StepSchedule, us: &[Parameter], theta: &Parameter) -> f64 {
    let big_t = us.len() as f64;
    let psi_theta = reg.value(theta).unwrap();
    let mut z = Parameter::zeros(theta.shape());
    let mut current = Parameter::zeros(theta.shape());
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for (k, u) in us.iter().enumerate() {
        let t = (k + 1) as f64;
        let mut diff = current.clone();
        diff.axpy(-1.0, theta);
        lhs += u.dot(&diff) + reg.value(&current).unwrap() - psi_theta;
        let gamma_prev = sched.gamma((t - 1.0).max(1.0)).unwrap();
        rhs += gamma_prev * u.norm_sq() / 2.0;
        z.axpy(1.0, u);
        current = reg.smooth(&z.scaled(-1.0), t, sched.gamma(t).unwrap()).unwrap();
    }
    rhs += theta.norm_sq() / (2.0 * sched.gamma(big_t).unwrap());
    (lhs - rhs) / big_t - 1e-12 * (1.0 + rhs.abs() / big_t)
}

/// `h(Pi_t(z)) - h(candidate)` for the smoothing objective `h`, with the
/// candidate made feasible for the PSD cone.
pub fn optimality_violation(reg: &Regularizer, z: &Parameter, t: f64, gamma: f64, offset: &Parameter) -> f64 {
    let best = reg.smooth(z, t, gamma).unwrap();
    let mut cand = best.clone();
    cand.axpy(1.0, offset);
    if matches!(reg, Regularizer::PsdIndicator) {
        cand = Regularizer::PsdIndicator.smooth(&cand, 1.0, 1.0).unwrap();
    }
    reg.smoothing_objective(z, t, gamma, &best).unwrap() - reg.smoothing_objective(z, t, gamma, &cand).unwrap() - 1e-9
}

pub fn dataset(features: &[Vec<f64>], labels: &[i8]) -> Dataset {
    Dataset::new(
        features
            .iter()
            .zip(labels)
            .map(|(f, &l)| DataPoint::new(f.clone(), l).unwrap())
            .collect(),
    )
    .unwrap()
}

/// Largest central-difference error relative to `max(1, |g|)` over all
/// coordinates, or `None` when the hinge argument is within `1e-4` of its kink.
pub fn finite_difference_error(loss: &PairwiseLoss, theta: &Parameter, a: &DataPoint, b: &DataPoint) -> Option<f64> {
    if let PairwiseLoss::MetricHinge { b: margin } = loss {
        let diff: Vec<f64> = a.features.iter().zip(&b.features).map(|(x, y)| x - y).collect();
        let d = diff.len();
        let mut q = 0.0;
        for r in 0..d {
            for c in 0..d {
                q += diff[r] * theta.get(r, c) * diff[c];
            }
        }
        let arg = 1.0 - f64::from(a.label * b.label) * (margin - q);
        if arg.abs() < 1e-4 {
            return None;
        }
    }
    let h = 1e-6;
    let g = loss.grad(theta, a, b).unwrap();
    let mut worst = 0.0f64;
    for k in 0..theta.as_slice().len() {
        let mut up = theta.clone();
        up.as_mut_slice()[k] += h;
        let mut down = theta.clone();
        down.as_mut_slice()[k] -= h;
        let fd = (loss.value(&up, a, b).unwrap() - loss.value(&down, a, b).unwrap()) / (2.0 * h);
        let exact = g.as_slice()[k];
        worst = worst.max((fd - exact).abs() / exact.abs().max(1.0));
    }
    Some(worst)
}

/// Relative error of the vectorized objective against a plain double loop.
pub fn objective_relative_error(loss: &PairwiseLoss, reg: &Regularizer, theta: &Parameter, data: &Dataset) -> f64 {
    let n = data.len() as f64;
    let mut acc = 0.0;
    for a in data.points() {
        for b in data.points() {
            acc += loss.value(theta, a, b).unwrap();
        }
    }
    let slow = acc / (n * n) + reg.value(theta).unwrap();
    let fast = loss.full_objective(theta, data, reg).unwrap();
    if slow == 0.0 {
        fast.abs()
    } else {
        (fast - slow).abs() / slow.abs()
    }
}
