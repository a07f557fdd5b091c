//! Solution evaluation for the single- and bi-objective formulations.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::bounds::{below_capacity, bound_from_stats, BoundMethod};
use crate::error::Result;
use crate::instance::{profit, weight_stats, CCInstance, Solution};

/// Lexicographic fitness `(u, v, p)`: minimise `u`, then `v`, then maximise `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoFitness {
    /// Expected-weight excess `max(E - B, 0)`.
    pub u: f64,
    /// Probability excess `max(bound - alpha, 0)`.
    pub v: f64,
    pub p: u64,
}

impl SoFitness {
    pub fn is_feasible(&self) -> bool {
        self.u == 0.0 && self.v == 0.0
    }
}

pub fn so_fitness(inst: &CCInstance, x: &Solution, method: BoundMethod) -> Result<SoFitness> {
    let stats = weight_stats(inst, x)?;
    let bound = bound_from_stats(inst, &stats, method)?;
    Ok(SoFitness {
        u: (stats.expected - inst.capacity()).max(0.0),
        v: (bound.value() - inst.alpha()).max(0.0),
        p: profit(inst, x)?,
    })
}

/// `Greater` means `a` is strictly better than `b`.
pub fn so_compare(a: &SoFitness, b: &SoFitness) -> Ordering {
    b.u.total_cmp(&a.u)
        .then_with(|| b.v.total_cmp(&a.v))
        .then_with(|| a.p.cmp(&b.p))
}

/// Bi-objective fitness: maximise `g1`, minimise `g2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoFitness {
    /// Profit when `g2 <= alpha`, otherwise `-1`.
    pub g1: f64,
    /// Violation bound while below capacity, otherwise `1 + (E - B)`.
    pub g2: f64,
}

impl MoFitness {
    pub fn is_feasible(&self, alpha: f64) -> bool {
        self.g2 <= alpha
    }
}

pub fn mo_fitness(inst: &CCInstance, x: &Solution, method: BoundMethod) -> Result<MoFitness> {
    let stats = weight_stats(inst, x)?;
    let bound = bound_from_stats(inst, &stats, method)?;
    let g2 = if below_capacity(inst.model(), stats.expected, inst.capacity()) {
        bound.value()
    } else {
        1.0 + (stats.expected - inst.capacity())
    };
    let g1 = if g2 <= inst.alpha() {
        profit(inst, x)? as f64
    } else {
        -1.0
    };
    Ok(MoFitness { g1, g2 })
}

/// Weak dominance: `a` is at least as good as `b` in both objectives.
pub fn mo_dominates(a: &MoFitness, b: &MoFitness) -> bool {
    a.g1 >= b.g1 && a.g2 <= b.g2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::violation_bound;
    use crate::instance::WeightModel;
    use proptest::prelude::*;

    fn additive(capacity: f64, alpha: f64) -> CCInstance {
        // four items of expected weight 50 and a light fifth one
        CCInstance::new(
            vec![10, 20, 30, 40, 5],
            vec![50.0, 50.0, 50.0, 50.0, 20.0],
            WeightModel::UniformAdditive { delta: 10.0 },
            capacity,
            alpha,
        )
        .unwrap()
    }

    #[test]
    fn so_feasible_case() {
        let inst = additive(400.0, 0.01);
        let x: Solution = "11000".parse().unwrap();
        let bound = violation_bound(&inst, &x, BoundMethod::Cantelli).unwrap().value();
        assert!(bound < 0.01);
        let f = so_fitness(&inst, &x, BoundMethod::Cantelli).unwrap();
        assert_eq!(f, SoFitness { u: 0.0, v: 0.0, p: 30 });
        assert!(f.is_feasible());
    }

    #[test]
    fn so_expected_weight_infeasible() {
        let inst = additive(100.0, 0.01);
        let x: Solution = "11001".parse().unwrap();
        let f = so_fitness(&inst, &x, BoundMethod::Cantelli).unwrap();
        assert_eq!(f.u, 20.0);
        assert!((f.v - 0.99).abs() < 1e-12);
        assert_eq!(f.p, 35);
    }

    #[test]
    fn so_probability_excess() {
        let inst = CCInstance::new(
            vec![1; 4],
            vec![50.0; 4],
            WeightModel::UniformAdditive { delta: 25.0 },
            250.0,
            0.01,
        )
        .unwrap();
        let f = so_fitness(&inst, &Solution::ones(4), BoundMethod::Cantelli).unwrap();
        assert_eq!(f.u, 0.0);
        assert!((f.v - 0.24).abs() < 1e-12);
    }

    #[test]
    fn so_order_examples() {
        let f = |u, v, p| SoFitness { u, v, p };
        assert_eq!(so_compare(&f(0.0, 0.0, 50), &f(0.0, 0.0, 40)), Ordering::Greater);
        assert_eq!(so_compare(&f(0.0, 0.2, 99), &f(0.0, 0.1, 10)), Ordering::Less);
        assert_eq!(so_compare(&f(5.0, 0.0, 99), &f(0.0, 0.9, 0)), Ordering::Less);
        assert_eq!(so_compare(&f(1.0, 0.5, 3), &f(1.0, 0.5, 3)), Ordering::Equal);
    }

    #[test]
    fn mo_examples() {
        let inst = additive(100.0, 0.01);
        let x: Solution = "11001".parse().unwrap();
        let f = mo_fitness(&inst, &x, BoundMethod::Cantelli).unwrap();
        assert_eq!(f, MoFitness { g1: -1.0, g2: 21.0 });

        let inst = CCInstance::new(
            vec![7; 4],
            vec![50.0; 4],
            WeightModel::UniformAdditive { delta: 25.0 },
            250.0,
            0.01,
        )
        .unwrap();
        let f = mo_fitness(&inst, &Solution::ones(4), BoundMethod::Cantelli).unwrap();
        assert_eq!(f.g1, -1.0);
        assert!((f.g2 - 0.25).abs() < 1e-12);

        let inst = additive(400.0, 0.01);
        let x: Solution = "11000".parse().unwrap();
        let f = mo_fitness(&inst, &x, BoundMethod::Cantelli).unwrap();
        assert!(f.g2 <= 0.01);
        assert_eq!(f.g1, 30.0);
    }

    #[test]
    fn mo_expected_weight_at_capacity() {
        let inst = additive(100.0, 0.01);
        let x: Solution = "11000".parse().unwrap();
        assert_eq!(mo_fitness(&inst, &x, BoundMethod::Cantelli).unwrap().g2, 1.0);
    }

    #[test]
    fn deterministic_capacity_is_inclusive() {
        let inst = CCInstance::new(vec![3, 4], vec![40.0, 60.0], WeightModel::Deterministic, 100.0, 0.01).unwrap();
        let all = Solution::ones(2);
        assert!(so_fitness(&inst, &all, BoundMethod::Cantelli).unwrap().is_feasible());
        assert_eq!(
            mo_fitness(&inst, &all, BoundMethod::Cantelli).unwrap(),
            MoFitness { g1: 7.0, g2: 0.0 }
        );
    }

    #[test]
    fn dominance_examples() {
        let m = |g1, g2| MoFitness { g1, g2 };
        assert!(mo_dominates(&m(50.0, 0.003), &m(50.0, 0.003)));
        assert!(mo_dominates(&m(50.0, 0.003), &m(40.0, 0.005)));
        assert!(!mo_dominates(&m(50.0, 0.005), &m(40.0, 0.003)));
        assert!(!mo_dominates(&m(40.0, 0.003), &m(50.0, 0.005)));
    }

    fn so_strategy() -> impl Strategy<Value = SoFitness> {
        (0u8..3, 0u8..3, 0u64..4).prop_map(|(u, v, p)| SoFitness {
            u: u as f64,
            v: v as f64 / 4.0,
            p,
        })
    }

    fn mo_strategy() -> impl Strategy<Value = MoFitness> {
        (-1i8..3, 0u8..4).prop_map(|(g1, g2)| MoFitness {
            g1: g1 as f64,
            g2: g2 as f64 / 8.0,
        })
    }

    proptest! {
        #[test]
        fn so_compare_is_a_total_preorder(a in so_strategy(), b in so_strategy(), c in so_strategy()) {
            prop_assert_eq!(so_compare(&a, &b), so_compare(&b, &a).reverse());
            if so_compare(&a, &b) != Ordering::Less && so_compare(&b, &c) != Ordering::Less {
                prop_assert_ne!(so_compare(&a, &c), Ordering::Less);
            }
            prop_assert_eq!(so_compare(&a, &b) == Ordering::Equal, a == b);
        }

        #[test]
        fn feasible_beats_infeasible(p in 0u64..1000, q in 0u64..1000, u in 0.0f64..10.0, v in 0.0f64..1.0) {
            prop_assume!(u > 0.0 || v > 0.0);
            let good = SoFitness { u: 0.0, v: 0.0, p };
            let bad = SoFitness { u, v, p: q };
            prop_assert_eq!(so_compare(&good, &bad), Ordering::Greater);
        }

        #[test]
        fn dominance_is_a_preorder(a in mo_strategy(), b in mo_strategy(), c in mo_strategy()) {
            prop_assert!(mo_dominates(&a, &a));
            if mo_dominates(&a, &b) && mo_dominates(&b, &c) {
                prop_assert!(mo_dominates(&a, &c));
            }
            let strict = |x: &MoFitness, y: &MoFitness| mo_dominates(x, y) && !mo_dominates(y, x);
            prop_assert!(!strict(&a, &a));
        }

        #[test]
        fn fitness_shares_one_bound(mask in 0u64..32, cap in 60.0f64..300.0, alpha in 0.001f64..0.5) {
            let inst = additive(cap, alpha);
            let x = Solution::from_mask(mask, 5);
            for method in [BoundMethod::Cantelli, BoundMethod::Chernoff] {
                let bound = violation_bound(&inst, &x, method).unwrap().value();
                let so = so_fitness(&inst, &x, method).unwrap();
                prop_assert_eq!(so.v, (bound - alpha).max(0.0));
                let mo = mo_fitness(&inst, &x, method).unwrap();
                if mo.g2 <= alpha {
                    prop_assert!(mo.g1 >= 0.0);
                } else {
                    prop_assert_eq!(mo.g1, -1.0);
                }
                prop_assert_eq!(mo.g2 > 1.0, so.u > 0.0);
            }
        }
    }
}
