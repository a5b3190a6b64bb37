mod common;

use common::*;
use pairgossip::{DataPoint, PairwiseLoss, Regularizer, Shape, StepSchedule};
use proptest::prelude::*;

fn reg_strategy() -> impl Strategy<Value = Regularizer> {
    prop::sample::select(REGULARIZERS.to_vec())
}

fn sched_strategy() -> impl Strategy<Value = StepSchedule> {
    prop_oneof![
        (0.05..3.0f64).prop_map(|c| StepSchedule::InvSqrt { c }),
        (0.05..3.0f64, 0.01..0.49f64).prop_map(|(c, alpha)| StepSchedule::Poly { c, alpha }),
        (0.1..3.0f64, 0.1..3.0f64).prop_map(|(d, lipschitz)| StepSchedule::BoundedDomain { d, lipschitz }),
    ]
}

fn values(len: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-scale..scale, len)
}

proptest! {
    #[test]
    fn smoothing_is_gamma_lipschitz(
        reg in reg_strategy(),
        a in values(9, 10.0),
        b in values(9, 10.0),
        t in 1.0..500.0f64,
        gamma in 0.01..2.0f64,
    ) {
        let shape = shape_for(&reg, 3);
        prop_assert!(lipschitz_violation(&reg, &param(shape, &a), &param(shape, &b), t, gamma) <= 0.0);
    }

    #[test]
    fn smoothing_minimizes_its_objective(
        reg in reg_strategy(),
        z in values(9, 10.0),
        offset in values(9, 0.5),
        t in 1.0..100.0f64,
        gamma in 0.01..2.0f64,
    ) {
        let shape = shape_for(&reg, 3);
        prop_assert!(optimality_violation(&reg, &param(shape, &z), t, gamma, &param(shape, &offset)) <= 0.0);
    }

    #[test]
    fn smoothing_moves_slowly_in_time(
        reg in reg_strategy(),
        sched in sched_strategy(),
        z in values(9, 10.0),
        t1 in 1.0..1000.0f64,
        t2 in 1.0..1000.0f64,
    ) {
        let shape = shape_for(&reg, 3);
        prop_assert!(time_shift_violation(&reg, &sched, &param(shape, &z), t1, t2) <= 0.0);
    }

    #[test]
    fn dual_averaging_regret_bound(
        reg in reg_strategy(),
        sched in sched_strategy(),
        raw in prop::collection::vec(values(9, 3.0), 1..50),
        target in values(9, 3.0),
    ) {
        let shape = shape_for(&reg, 3);
        let us: Vec<_> = raw.iter().map(|v| param(shape, v)).collect();
        let mut theta = param(shape, &target);
        if matches!(reg, Regularizer::PsdIndicator) {
            theta = reg.smooth(&theta, 1.0, 1.0).unwrap();
        }
        prop_assert!(regret_violation(&reg, &sched, &us, &theta) <= 0.0);
    }

    #[test]
    fn loss_gradients_match_finite_differences(
        hinge in any::<bool>(),
        fa in values(3, 2.0),
        fb in values(3, 2.0),
        la in any::<bool>(),
        lb in any::<bool>(),
        th in values(9, 1.0),
    ) {
        let loss = if hinge { PairwiseLoss::MetricHinge { b: 1.0 } } else { PairwiseLoss::AucLogistic };
        let label = |p: bool| if p { 1 } else { -1 };
        let a = DataPoint::new(fa, label(la)).unwrap();
        let b = DataPoint::new(fb, label(lb)).unwrap();
        let theta = param(loss.param_shape(3), &th);
        if let Some(err) = finite_difference_error(&loss, &theta, &a, &b) {
            prop_assert!(err <= 1e-4, "error {}", err);
        }
    }

    #[test]
    fn objective_matches_double_loop(
        hinge in any::<bool>(),
        feats in prop::collection::vec(values(3, 2.0), 2..7),
        th in values(9, 1.0),
        seed in any::<u8>(),
    ) {
        let (loss, reg) = if hinge {
            (PairwiseLoss::MetricHinge { b: 1.0 }, Regularizer::Zero)
        } else {
            (PairwiseLoss::AucLogistic, Regularizer::L1 { lambda: 0.1 })
        };
        let labels: Vec<i8> = (0..feats.len()).map(|i| if (i + seed as usize) % 3 == 0 { -1 } else { 1 }).collect();
        let data = dataset(&feats, &labels);
        let mut theta = param(loss.param_shape(3), &th);
        if let Shape::SymMatrix(_) = theta.shape() {
            theta = Regularizer::PsdIndicator.smooth(&theta, 1.0, 1.0).unwrap();
        }
        prop_assert!(objective_relative_error(&loss, &reg, &theta, &data) <= 1e-12);
    }
}
