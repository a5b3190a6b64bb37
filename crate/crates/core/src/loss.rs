//! Pairwise losses, whole-dataset objectives and the AUC metric.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::param::{Parameter, Shape};
use crate::regularizer::Regularizer;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub features: Vec<f64>,
    /// +1 or -1.
    pub label: i8,
}

impl DataPoint {
    pub fn new(features: Vec<f64>, label: i8) -> Result<Self> {
        if label != 1 && label != -1 {
            return Err(Error::InvalidParameter(format!("label must be +1 or -1, got {label}")));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { features, label })
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }
}

/// One data point per network node, all of the same dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<DataPoint>,
    dim: usize,
}

impl Dataset {
    pub fn new(points: Vec<DataPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Degenerate(format!("need at least 2 points, got {}", points.len())));
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::ShapeMismatch {
                    expected: format!("dimension {dim}"),
                    got: format!("dimension {}", p.dim()),
                });
            }
            if p.label != 1 && p.label != -1 {
                return Err(Error::InvalidParameter(format!("label must be +1 or -1, got {}", p.label)));
            }
            if p.features.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { points, dim })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &DataPoint {
        &self.points[i]
    }

    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.points.iter().filter(|p| p.label > 0).count();
        (pos, self.points.len() - pos)
    }

    fn feature_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.len(), self.dim, |i, k| self.points[i].features[k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairwiseLoss {
    /// `1{l_i > l_j} log(1 + exp((x_j - x_i)' theta))`
    AucLogistic,
    /// `max(0, 1 - l_i l_j (b - (x_i - x_j)' Theta (x_i - x_j)))`
    MetricHinge { b: f64 },
}

/// `log(1 + exp(u))` without overflow.
fn softplus(u: f64) -> f64 {
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl PairwiseLoss {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PairwiseLoss::MetricHinge { b } if !(b > 0.0 && b.is_finite()) => {
                Err(Error::InvalidParameter(format!("hinge margin b must be positive, got {b}")))
            }
            _ => Ok(()),
        }
    }

    /// Parameter shape for feature dimension `d`.
    pub fn param_shape(&self, d: usize) -> Shape {
        match self {
            PairwiseLoss::AucLogistic => Shape::Vector(d),
            PairwiseLoss::MetricHinge { .. } => Shape::SymMatrix(d),
        }
    }

    fn check(&self, theta: &Parameter, a: &DataPoint, b: &DataPoint) -> Result<()> {
        let want = self.param_shape(a.dim());
        if theta.shape() != want || b.dim() != a.dim() {
            return Err(Error::ShapeMismatch {
                expected: want.to_string(),
                got: format!("{} with points of dimension {} and {}", theta.shape(), a.dim(), b.dim()),
            });
        }
        Ok(())
    }

    /// `(x_i - x_j)' Theta (x_i - x_j)`.
    fn mahalanobis(theta: &Parameter, a: &DataPoint, b: &DataPoint) -> f64 {
        let d = a.dim();
        let m = theta.as_slice();
        let mut acc = 0.0;
        for r in 0..d {
            let dr = a.features[r] - b.features[r];
            if dr == 0.0 {
                continue;
            }
            let row = &m[r * d..(r + 1) * d];
            let mut inner = 0.0;
            for c in 0..d {
                inner += row[c] * (a.features[c] - b.features[c]);
            }
            acc += dr * inner;
        }
        acc
    }

    pub fn value(&self, theta: &Parameter, a: &DataPoint, b: &DataPoint) -> Result<f64> {
        self.check(theta, a, b)?;
        Ok(self.value_unchecked(theta, a, b))
    }

    pub(crate) fn value_unchecked(&self, theta: &Parameter, a: &DataPoint, b: &DataPoint) -> f64 {
        match *self {
            PairwiseLoss::AucLogistic => {
                if a.label > b.label {
                    let u = dot(&b.features, theta.as_slice()) - dot(&a.features, theta.as_slice());
                    softplus(u)
                } else {
                    0.0
                }
            }
            PairwiseLoss::MetricHinge { b: margin } => {
                let sign = f64::from(a.label * b.label);
                (1.0 - sign * (margin - Self::mahalanobis(theta, a, b))).max(0.0)
            }
        }
    }

    pub fn grad(&self, theta: &Parameter, a: &DataPoint, b: &DataPoint) -> Result<Parameter> {
        self.check(theta, a, b)?;
        let mut out = Parameter::zeros(theta.shape());
        self.accumulate_grad(theta, a, b, 1.0, &mut out);
        Ok(out)
    }

    /// `out += weight * grad_theta f(theta; a, b)`.
    pub(crate) fn accumulate_grad(&self, theta: &Parameter, a: &DataPoint, b: &DataPoint, weight: f64, out: &mut Parameter) {
        match *self {
            PairwiseLoss::AucLogistic => {
                if a.label <= b.label {
                    return;
                }
                let u = dot(&b.features, theta.as_slice()) - dot(&a.features, theta.as_slice());
                let s = weight * sigmoid(u);
                for ((o, xb), xa) in out.as_mut_slice().iter_mut().zip(&b.features).zip(&a.features) {
                    *o += s * (xb - xa);
                }
            }
            PairwiseLoss::MetricHinge { b: margin } => {
                let sign = f64::from(a.label * b.label);
                if 1.0 - sign * (margin - Self::mahalanobis(theta, a, b)) <= 0.0 {
                    return;
                }
                let d = a.dim();
                let w = weight * sign;
                let o = out.as_mut_slice();
                for r in 0..d {
                    let dr = a.features[r] - b.features[r];
                    if dr == 0.0 {
                        continue;
                    }
                    for c in 0..d {
                        o[r * d + c] += w * dr * (a.features[c] - b.features[c]);
                    }
                }
            }
        }
    }

    fn check_dataset(&self, theta: &Parameter, data: &Dataset) -> Result<()> {
        let want = self.param_shape(data.dim());
        if theta.shape() != want {
            return Err(Error::ShapeMismatch {
                expected: want.to_string(),
                got: theta.shape().to_string(),
            });
        }
        Ok(())
    }

    /// `(1/n^2) sum_{i,j} f(theta; x_i, x_j)`, including `i = j` and both orders.
    pub fn empirical_risk(&self, theta: &Parameter, data: &Dataset) -> Result<f64> {
        self.check_dataset(theta, data)?;
        let n = data.len();
        let sum = match *self {
            PairwiseLoss::AucLogistic => {
                let scores: Vec<f64> = data.points().iter().map(|p| dot(&p.features, theta.as_slice())).collect();
                let mut acc = 0.0;
                for (i, pi) in data.points().iter().enumerate() {
                    if pi.label < 0 {
                        continue;
                    }
                    for (j, pj) in data.points().iter().enumerate() {
                        if pj.label < 0 {
                            acc += softplus(scores[j] - scores[i]);
                        }
                    }
                }
                acc
            }
            PairwiseLoss::MetricHinge { b } => {
                let dist = pairwise_mahalanobis(theta, data);
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let sign = f64::from(data.point(i).label * data.point(j).label);
                        acc += (1.0 - sign * (b - dist[(i, j)])).max(0.0);
                    }
                }
                acc
            }
        };
        Ok(sum / (n * n) as f64)
    }

    /// `R_n(theta) = (1/n^2) sum_{i,j} f(theta; x_i, x_j) + psi(theta)`.
    pub fn full_objective(&self, theta: &Parameter, data: &Dataset, reg: &Regularizer) -> Result<f64> {
        let risk = self.empirical_risk(theta, data)?;
        Ok(risk + reg.value(theta)?)
    }

    /// `(1/n^2) sum_{i,j} grad f(theta; x_i, x_j)`.
    pub fn full_gradient(&self, theta: &Parameter, data: &Dataset) -> Result<Parameter> {
        self.check_dataset(theta, data)?;
        let n = data.len();
        let mut out = Parameter::zeros(theta.shape());
        match *self {
            PairwiseLoss::AucLogistic => {
                // sum over (pos i, neg j) of s_ij (x_j - x_i): collect per-point weights first
                let scores: Vec<f64> = data.points().iter().map(|p| dot(&p.features, theta.as_slice())).collect();
                let mut weights = vec![0.0; n];
                for (i, pi) in data.points().iter().enumerate() {
                    if pi.label < 0 {
                        continue;
                    }
                    for (j, pj) in data.points().iter().enumerate() {
                        if pj.label < 0 {
                            let s = sigmoid(scores[j] - scores[i]);
                            weights[i] -= s;
                            weights[j] += s;
                        }
                    }
                }
                let o = out.as_mut_slice();
                for (p, w) in data.points().iter().zip(&weights) {
                    for (ok, xk) in o.iter_mut().zip(&p.features) {
                        *ok += w * xk;
                    }
                }
            }
            PairwiseLoss::MetricHinge { b } => {
                // sum_ij c_ij (x_i - x_j)(x_i - x_j)' = 2 X' (diag(C 1) - C) X for symmetric C
                let dist = pairwise_mahalanobis(theta, data);
                let c = DMatrix::from_fn(n, n, |i, j| {
                    let sign = f64::from(data.point(i).label * data.point(j).label);
                    if 1.0 - sign * (b - dist[(i, j)]) > 0.0 {
                        sign
                    } else {
                        0.0
                    }
                });
                let mut lap = -c.clone();
                for i in 0..n {
                    lap[(i, i)] += c.row(i).sum();
                }
                let x = data.feature_matrix();
                let g = x.transpose() * lap * &x * 2.0;
                let d = data.dim();
                let o = out.as_mut_slice();
                for r in 0..d {
                    for s in 0..d {
                        o[r * d + s] = g[(r, s)];
                    }
                }
                out.symmetrize();
            }
        }
        out.scale(1.0 / (n * n) as f64);
        Ok(out)
    }

    /// Exact partial gradient `grad f_i(theta) = (1/n) sum_j grad f(theta; x_i, x_j)`.
    pub fn partial_gradient(&self, theta: &Parameter, i: usize, data: &Dataset) -> Result<Parameter> {
        if i >= data.len() {
            return Err(Error::IndexOutOfRange { index: i, len: data.len() });
        }
        self.check_dataset(theta, data)?;
        Ok(self.partial_gradient_unchecked(theta, i, data))
    }

    pub(crate) fn partial_gradient_unchecked(&self, theta: &Parameter, i: usize, data: &Dataset) -> Parameter {
        let mut out = Parameter::zeros(theta.shape());
        let w = 1.0 / data.len() as f64;
        let xi = data.point(i);
        for xj in data.points() {
            self.accumulate_grad(theta, xi, xj, w, &mut out);
        }
        out
    }

    /// Upper bound on `|grad f(theta; x_i, x_j)|` over all pairs and all `theta`
    /// (over any `theta` for the logistic loss; the hinge gradient norm is
    /// `|x_i - x_j|^2` whenever it is active).
    pub fn lipschitz_bound(&self, data: &Dataset) -> f64 {
        let mut worst = 0.0f64;
        for a in data.points() {
            for b in data.points() {
                let d2: f64 = a.features.iter().zip(&b.features).map(|(x, y)| (x - y) * (x - y)).sum();
                worst = worst.max(match self {
                    PairwiseLoss::AucLogistic => d2.sqrt(),
                    PairwiseLoss::MetricHinge { .. } => d2,
                });
            }
        }
        worst
    }
}

/// Matrix of `(x_i - x_j)' Theta (x_i - x_j)` via `q_i + q_j - 2 x_i' Theta x_j`.
fn pairwise_mahalanobis(theta: &Parameter, data: &Dataset) -> DMatrix<f64> {
    let x = data.feature_matrix();
    let xt = &x * theta.to_dmatrix();
    let gram = &xt * x.transpose();
    let n = data.len();
    DMatrix::from_fn(n, n, |i, j| gram[(i, i)] + gram[(j, j)] - gram[(i, j)] - gram[(j, i)])
}

/// Fraction of (positive, negative) pairs ranked strictly correctly by the
/// linear score `x' theta`. Ties count as misranked.
pub fn auc_score(theta: &Parameter, data: &Dataset) -> Result<f64> {
    if theta.shape() != Shape::Vector(data.dim()) {
        return Err(Error::ShapeMismatch {
            expected: Shape::Vector(data.dim()).to_string(),
            got: theta.shape().to_string(),
        });
    }
    let (pos, neg) = data.class_counts();
    if pos == 0 || neg == 0 {
        return Err(Error::Degenerate("AUC needs both positive and negative labels".into()));
    }
    let scores: Vec<f64> = data.points().iter().map(|p| dot(&p.features, theta.as_slice())).collect();
    let mut hits = 0usize;
    for (i, pi) in data.points().iter().enumerate() {
        if pi.label < 0 {
            continue;
        }
        for (j, pj) in data.points().iter().enumerate() {
            if pj.label < 0 && scores[i] > scores[j] {
                hits += 1;
            }
        }
    }
    Ok(hits as f64 / (pos * neg) as f64)
}

#[cfg(test)]
mod tests {
    use rand::Rng as _;
    use rand_distr::StandardNormal;

    use super::*;
    use crate::rng::{stream, Stream};

    fn pt(f: &[f64], label: i8) -> DataPoint {
        DataPoint::new(f.to_vec(), label).unwrap()
    }

    fn random_data(n: usize, d: usize, seed: u64) -> Dataset {
        let mut rng = stream(seed, Stream::DataGeneration);
        let points = (0..n)
            .map(|i| {
                let f = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                DataPoint::new(f, if i % 3 == 0 { -1 } else { 1 }).unwrap()
            })
            .collect();
        Dataset::new(points).unwrap()
    }

    fn random_param(shape: Shape, seed: u64) -> Parameter {
        let mut rng = stream(seed, Stream::Topology);
        let mut p = Parameter::zeros(shape);
        for v in p.as_mut_slice() {
            *v = rng.sample::<f64, _>(StandardNormal) * 0.3;
        }
        if let Shape::SymMatrix(_) = shape {
            p.symmetrize();
        }
        p
    }

    #[test]
    fn pair_values() {
        let auc = PairwiseLoss::AucLogistic;
        let zero = Parameter::zeros(Shape::Vector(2));
        let (pos, neg) = (pt(&[1.0, 2.0], 1), pt(&[-1.0, 0.5], -1));
        assert!((auc.value(&zero, &pos, &neg).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(auc.value(&zero, &neg, &pos).unwrap(), 0.0);
        assert_eq!(auc.value(&zero, &pos, &pos).unwrap(), 0.0);
        let hinge = PairwiseLoss::MetricHinge { b: 1.0 };
        let m = Parameter::zeros(Shape::SymMatrix(2));
        let other = pt(&[3.0, 0.0], 1);
        assert_eq!(hinge.value(&m, &pos, &other).unwrap(), 0.0);
    }

    #[test]
    fn pair_gradients() {
        let auc = PairwiseLoss::AucLogistic;
        let zero = Parameter::zeros(Shape::Vector(2));
        let (pos, neg) = (pt(&[1.0, 2.0], 1), pt(&[-1.0, 0.5], -1));
        assert_eq!(auc.grad(&zero, &pos, &neg).unwrap().as_slice(), &[-1.0, -0.75]);
        let hinge = PairwiseLoss::MetricHinge { b: 1.0 };
        let m = Parameter::zeros(Shape::SymMatrix(2));
        let g = hinge.grad(&m, &pos, &pt(&[3.0, 0.0], 1)).unwrap();
        assert_eq!(g.norm(), 0.0);
        // active dissimilar pair: gradient -(x_i - x_j)(x_i - x_j)'
        let g = hinge.grad(&m, &pos, &neg).unwrap();
        assert_eq!(g.as_slice(), &[-4.0, -3.0, -3.0, -2.25]);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let auc = PairwiseLoss::AucLogistic;
        let wrong = Parameter::zeros(Shape::Vector(3));
        assert!(auc.value(&wrong, &pt(&[1.0, 2.0], 1), &pt(&[0.0, 0.0], -1)).is_err());
        let hinge = PairwiseLoss::MetricHinge { b: 1.0 };
        assert!(hinge.grad(&Parameter::zeros(Shape::Vector(2)), &pt(&[1.0, 2.0], 1), &pt(&[0.0, 0.0], -1)).is_err());
        assert!(PairwiseLoss::MetricHinge { b: 0.0 }.validate().is_err());
    }

    #[test]
    fn gradients_match_central_differences() {
        let h = 1e-6;
        for (case, loss) in [PairwiseLoss::AucLogistic, PairwiseLoss::MetricHinge { b: 1.0 }]
            .into_iter()
            .cycle()
            .take(60)
            .enumerate()
        {
            let data = random_data(2, 3, case as u64);
            let (a, b) = (data.point(0), data.point(1));
            let theta = random_param(loss.param_shape(3), case as u64);
            if let PairwiseLoss::MetricHinge { b: margin } = loss {
                let sign = f64::from(a.label * b.label);
                let arg = 1.0 - sign * (margin - PairwiseLoss::mahalanobis(&theta, a, b));
                if arg.abs() < 1e-4 {
                    continue;
                }
            }
            let g = loss.grad(&theta, a, b).unwrap();
            for k in 0..theta.as_slice().len() {
                let mut up = theta.clone();
                up.as_mut_slice()[k] += h;
                let mut down = theta.clone();
                down.as_mut_slice()[k] -= h;
                let fd = (loss.value(&up, a, b).unwrap() - loss.value(&down, a, b).unwrap()) / (2.0 * h);
                let exact = g.as_slice()[k];
                assert!((fd - exact).abs() <= 1e-4 * exact.abs().max(1.0), "case {case} k {k}: {fd} vs {exact}");
            }
        }
    }

    fn brute_risk(loss: &PairwiseLoss, theta: &Parameter, data: &Dataset) -> f64 {
        let n = data.len();
        let mut acc = 0.0;
        for a in data.points() {
            for b in data.points() {
                acc += loss.value(theta, a, b).unwrap();
            }
        }
        acc / (n * n) as f64
    }

    #[test]
    fn objective_matches_double_loop() {
        for seed in 0..20 {
            for loss in [PairwiseLoss::AucLogistic, PairwiseLoss::MetricHinge { b: 2.0 }] {
                let data = random_data(5, 3, seed);
                let theta = random_param(loss.param_shape(3), seed + 100);
                let fast = loss.empirical_risk(&theta, &data).unwrap();
                let slow = brute_risk(&loss, &theta, &data);
                assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1e-300), "{fast} vs {slow}");
            }
        }
    }

    #[test]
    fn objective_at_zero_counts_ordered_pairs() {
        let data = random_data(9, 2, 4);
        let (pos, neg) = data.class_counts();
        let r = PairwiseLoss::AucLogistic
            .full_objective(&Parameter::zeros(Shape::Vector(2)), &data, &Regularizer::Zero)
            .unwrap();
        assert!((r - (pos * neg) as f64 / 81.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn single_class_objective_is_regularizer_only() {
        let data = Dataset::new(vec![pt(&[1.0, 0.0], 1), pt(&[0.0, 2.0], 1), pt(&[3.0, 1.0], 1)]).unwrap();
        let theta = Parameter::vector(vec![0.5, -1.0]);
        let reg = Regularizer::SquaredL2 { lambda: 0.1 };
        let r = PairwiseLoss::AucLogistic.full_objective(&theta, &data, &reg).unwrap();
        assert!((r - 0.125).abs() < 1e-15);
        let g = PairwiseLoss::AucLogistic.partial_gradient(&theta, 1, &data).unwrap();
        assert_eq!(g.norm(), 0.0);
    }

    #[test]
    fn full_and_partial_gradients_match_loops() {
        for seed in 0..10 {
            for loss in [PairwiseLoss::AucLogistic, PairwiseLoss::MetricHinge { b: 1.5 }] {
                let data = random_data(4, 3, seed);
                let theta = random_param(loss.param_shape(3), seed + 7);
                let mut mean = Parameter::zeros(theta.shape());
                for i in 0..4 {
                    let mut direct = Parameter::zeros(theta.shape());
                    for b in data.points() {
                        direct.axpy(0.25, &loss.grad(&theta, data.point(i), b).unwrap());
                    }
                    let partial = loss.partial_gradient(&theta, i, &data).unwrap();
                    assert!(partial.distance(&direct) < 1e-14);
                    mean.axpy(0.25, &direct);
                }
                let full = loss.full_gradient(&theta, &data).unwrap();
                assert!(full.distance(&mean) < 1e-13 * (1.0 + mean.norm()));
            }
        }
        assert!(PairwiseLoss::AucLogistic
            .partial_gradient(&Parameter::zeros(Shape::Vector(3)), 9, &random_data(4, 3, 0))
            .is_err());
    }

    #[test]
    fn mirrored_data_gradient_cancels_at_zero() {
        let data = Dataset::new(vec![pt(&[1.0, 2.0], 1), pt(&[-1.0, -2.0], -1), pt(&[-1.0, -2.0], 1), pt(&[1.0, 2.0], -1)])
            .unwrap();
        let g = PairwiseLoss::AucLogistic.full_gradient(&Parameter::zeros(Shape::Vector(2)), &data).unwrap();
        assert!(g.norm() < 1e-15);
    }

    #[test]
    fn risk_is_convex_along_segments() {
        for seed in 0..20 {
            for loss in [PairwiseLoss::AucLogistic, PairwiseLoss::MetricHinge { b: 1.0 }] {
                let data = random_data(6, 3, seed);
                let a = random_param(loss.param_shape(3), seed);
                let b = random_param(loss.param_shape(3), seed + 50);
                let mut mid = a.clone();
                mid.blend(0.5, &b);
                let r = |p: &Parameter| loss.empirical_risk(p, &data).unwrap();
                assert!(r(&mid) <= 0.5 * (r(&a) + r(&b)) + 1e-12);
            }
        }
    }

    #[test]
    fn lipschitz_bound_dominates_gradients() {
        let data = random_data(6, 3, 2);
        for loss in [PairwiseLoss::AucLogistic, PairwiseLoss::MetricHinge { b: 1.0 }] {
            let bound = loss.lipschitz_bound(&data);
            for seed in 0..10 {
                let theta = random_param(loss.param_shape(3), seed);
                for a in data.points() {
                    for b in data.points() {
                        assert!(loss.grad(&theta, a, b).unwrap().norm() <= bound + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn auc_examples() {
        let data = Dataset::new(vec![pt(&[2.0], 1), pt(&[1.0], 1), pt(&[-1.0], -1), pt(&[0.0], -1)]).unwrap();
        assert_eq!(auc_score(&Parameter::vector(vec![1.0]), &data).unwrap(), 1.0);
        assert_eq!(auc_score(&Parameter::vector(vec![0.0]), &data).unwrap(), 0.0);
        assert_eq!(auc_score(&Parameter::vector(vec![-1.0]), &data).unwrap(), 0.0);
        let one_class = Dataset::new(vec![pt(&[1.0], 1), pt(&[2.0], 1)]).unwrap();
        assert!(auc_score(&Parameter::vector(vec![1.0]), &one_class).is_err());
    }

    #[test]
    fn auc_matches_double_loop() {
        for seed in 0..10 {
            let data = random_data(6, 2, seed);
            let theta = random_param(Shape::Vector(2), seed);
            let score = |p: &DataPoint| dot(&p.features, theta.as_slice());
            let (mut hits, mut total) = (0, 0);
            for a in data.points().iter().filter(|p| p.label > 0) {
                for b in data.points().iter().filter(|p| p.label < 0) {
                    total += 1;
                    hits += usize::from(score(a) > score(b));
                }
            }
            assert_eq!(auc_score(&theta, &data).unwrap(), hits as f64 / total as f64);
        }
    }
}
