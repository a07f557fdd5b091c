use cckp::bounds::{cantelli, cantelli_uniform_additive, cantelli_uniform_relative, chernoff_uniform_additive};
use cckp::oracle::{exhaustive_optimum, mc_violation};
use cckp::*;
use proptest::prelude::*;

/// Exact `Pr(W >= B)` for a sum of independent two-point weights
/// `a_i +- d_i`, by enumerating all sign patterns.
fn two_point_tail(centres: &[f64], spreads: &[f64], capacity: f64) -> f64 {
    let n = centres.len();
    let mut hits = 0u64;
    for mask in 0u64..1 << n {
        let w: f64 = (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    centres[i] + spreads[i]
                } else {
                    centres[i] - spreads[i]
                }
            })
            .sum();
        if w >= capacity {
            hits += 1;
        }
    }
    hits as f64 / (1u64 << n) as f64
}

proptest! {
    #[test]
    fn cantelli_dominates_exact_two_point_tail(
        items in prop::collection::vec((10.0f64..500.0, 0.0f64..40.0), 1..=10),
        slack in 0.0f64..200.0,
    ) {
        let centres: Vec<f64> = items.iter().map(|p| p.0).collect();
        let spreads: Vec<f64> = items.iter().map(|p| p.1).collect();
        let expected: f64 = centres.iter().sum();
        let variance: f64 = spreads.iter().map(|d| d * d).sum();
        let stats = WeightStats { expected, variance, count: items.len() };
        let capacity = expected + slack;
        let exact = two_point_tail(&centres, &spreads, capacity);
        prop_assert!(exact <= cantelli(&stats, capacity).value() + 1e-12);
    }

    #[test]
    fn cantelli_is_affine_invariant(
        expected in 0.0f64..1e4,
        variance in 0.1f64..1e4,
        gap in 0.0f64..500.0,
        scale in 0.01f64..100.0,
        shift in -1e4f64..1e4,
    ) {
        let a = cantelli(&WeightStats { expected, variance, count: 1 }, expected + gap).value();
        let mapped = WeightStats { expected: scale * expected + shift, variance: scale * scale * variance, count: 1 };
        let b = cantelli(&mapped, scale * (expected + gap) + shift).value();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-300));
    }

    #[test]
    fn bounds_decrease_with_capacity(
        delta in 1.0f64..100.0,
        count in 1usize..100,
        expected in 100.0f64..1e5,
        g1 in 0.0f64..1.0,
        g2 in 0.0f64..1.0,
    ) {
        let width = delta * count as f64;
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        let (b1, b2) = (expected + lo * width, expected + hi * width);
        prop_assert!(cantelli_uniform_additive(delta, count, expected, b2).value()
            <= cantelli_uniform_additive(delta, count, expected, b1).value());
        prop_assert!(chernoff_uniform_additive(delta, count, expected, b2).unwrap().value()
            <= chernoff_uniform_additive(delta, count, expected, b1).unwrap().value());
        prop_assert!(cantelli_uniform_relative(0.2, expected, b2).value()
            <= cantelli_uniform_relative(0.2, expected, b1).value());
    }

    #[test]
    fn additive_closed_form_matches_general_cantelli(
        delta in 0.5f64..100.0,
        count in 1usize..200,
        expected in 1.0f64..1e5,
        gap in 0.0f64..1e3,
    ) {
        let stats = WeightStats { expected, variance: delta * delta * count as f64 / 3.0, count };
        let general = cantelli(&stats, expected + gap).value();
        let closed = cantelli_uniform_additive(delta, count, expected, expected + gap).value();
        prop_assert!((general - closed).abs() <= 1e-12 * general.max(1e-300));
    }
}

#[test]
fn sampled_violation_stays_under_chernoff() {
    let n = 8;
    let inst = CCInstance::new(
        vec![1; n],
        vec![100.0; n],
        WeightModel::UniformAdditive { delta: 40.0 },
        860.0,
        0.1,
    )
    .unwrap();
    let x = Solution::ones(n);
    let mc = mc_violation(&inst, &x, 200_000, 5).unwrap();
    let bound = violation_bound(&inst, &x, BoundMethod::Chernoff).unwrap().value();
    assert!(mc.p_hat > 0.0);
    assert!(mc.p_hat <= bound + 3.0 * mc.std_error);
}

#[test]
fn exhaustive_optimum_grows_with_alpha() {
    let det = generate_instance(InstanceKind::BoundedStronglyCorrelated, 10, 77, 100).unwrap();
    for method in [BoundMethod::Cantelli, BoundMethod::Chernoff] {
        let mut last = 0;
        for alpha in [0.0001, 0.001, 0.01, 0.1] {
            let (inst, _) = adapt_instance(&det, 100, WeightModel::UniformAdditive { delta: 25.0 }, alpha).unwrap();
            let (x, opt) = exhaustive_optimum(&inst, method).unwrap();
            assert!(violation_bound(&inst, &x, method).unwrap().value() <= alpha);
            assert!(opt >= last, "{method} at alpha {alpha}");
            last = opt;
        }
    }
}
