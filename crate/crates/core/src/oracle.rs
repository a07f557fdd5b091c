//! Ground truth for checking the estimators and the search algorithms:
//! Monte-Carlo violation probabilities and exhaustive optima.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_from_stats, check_admissible, BoundMethod};
use crate::error::{Error, Result};
use crate::instance::{CCInstance, Solution, WeightModel, WeightStats};
use crate::rng::rng_from_seed;

pub const DEFAULT_MC_SAMPLES: u64 = 100_000;
pub const EXHAUSTIVE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub p_hat: f64,
    pub samples: u64,
    /// `sqrt(p_hat (1 - p_hat) / samples)`.
    pub std_error: f64,
}

impl McEstimate {
    fn new(hits: u64, samples: u64) -> Self {
        let p_hat = hits as f64 / samples as f64;
        McEstimate {
            p_hat,
            samples,
            std_error: (p_hat * (1.0 - p_hat) / samples as f64).sqrt(),
        }
    }
}

/// Estimates `Pr(W(x) >= B)` by sampling the item weights.
///
/// Deterministic weights count a violation only when `W > B`, matching the
/// inclusive capacity used for that model elsewhere.
pub fn mc_violation(inst: &CCInstance, x: &Solution, samples: u64, seed: u64) -> Result<McEstimate> {
    if x.len() != inst.n() {
        return Err(Error::LengthMismatch {
            expected: inst.n(),
            found: x.len(),
        });
    }
    if samples == 0 {
        return Err(Error::Config("Monte-Carlo needs at least one sample".into()));
    }
    let items: Vec<usize> = x.selected().collect();
    let a = inst.expected_weights();
    let capacity = inst.capacity();
    let mut rng = rng_from_seed(seed);

    let hits = match inst.model() {
        WeightModel::Deterministic => {
            let w: f64 = items.iter().map(|&i| a[i]).sum();
            if w > capacity {
                samples
            } else {
                0
            }
        }
        WeightModel::UniformAdditive { delta } => count_hits(samples, capacity, || {
            items.iter().map(|&i| a[i] + delta * rng.random_range(-1.0..=1.0)).sum()
        }),
        WeightModel::UniformRelative { beta } => count_hits(samples, capacity, || {
            items
                .iter()
                .map(|&i| a[i] * (1.0 + beta * rng.random_range(-1.0..=1.0)))
                .sum()
        }),
        WeightModel::Normal { variances } => {
            let dists: Vec<Normal<f64>> = items
                .iter()
                .map(|&i| Normal::new(a[i], variances[i].sqrt()).expect("variance validated"))
                .collect();
            count_hits(samples, capacity, || dists.iter().map(|d| d.sample(&mut rng)).sum())
        }
    };
    Ok(McEstimate::new(hits, samples))
}

fn count_hits(samples: u64, capacity: f64, mut draw: impl FnMut() -> f64) -> u64 {
    (0..samples).filter(|_| draw() >= capacity).count() as u64
}

/// Best solution with `violation_bound <= alpha`, by enumerating `{0,1}^n`.
///
/// Among equally profitable solutions the lexicographically smallest bit
/// string wins, so the result does not depend on enumeration order.
pub fn exhaustive_optimum(inst: &CCInstance, method: BoundMethod) -> Result<(Solution, u64)> {
    let n = inst.n();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooManyItems {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    check_admissible(inst.model(), method)?;
    let a = inst.expected_weights();
    let var = inst.variances();
    let p = inst.profits();
    let alpha = inst.alpha();

    // key orders masks like their bit strings (item 0 is the most significant)
    let key = |mask: u64| mask.reverse_bits() >> (64 - n);

    let best = (0u64..1 << n)
        .into_par_iter()
        .filter_map(|mask| {
            let mut stats = WeightStats::default();
            let mut profit = 0u64;
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    stats.expected += a[i];
                    stats.variance += var[i];
                    stats.count += 1;
                    profit += p[i];
                }
            }
            let bound = bound_from_stats(inst, &stats, method).ok()?;
            (bound.value() <= alpha).then_some((profit, mask))
        })
        .reduce_with(|x, y| {
            if x.0 > y.0 || (x.0 == y.0 && key(x.1) < key(y.1)) {
                x
            } else {
                y
            }
        })
        .expect("the empty solution is always feasible");
    Ok((Solution::from_mask(best.1, n), best.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::dp_optimum;
    use crate::generator::{adapt_instance, generate_instance, InstanceKind};
    use crate::instance::{profit, DetInstance};

    #[test]
    fn deterministic_below_capacity_never_violates() {
        let inst = CCInstance::new(vec![1, 1], vec![30.0, 50.0], WeightModel::Deterministic, 100.0, 0.01).unwrap();
        let est = mc_violation(&inst, &Solution::ones(2), 1000, 1).unwrap();
        assert_eq!(est.p_hat, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn symmetric_single_item() {
        let inst = CCInstance::new(
            vec![1],
            vec![100.0],
            WeightModel::UniformAdditive { delta: 25.0 },
            100.0,
            0.01,
        )
        .unwrap();
        let est = mc_violation(&inst, &Solution::ones(1), 100_000, 7).unwrap();
        assert!((est.p_hat - 0.5).abs() <= 4.0 * est.std_error, "{est:?}");
        let expect_se = (est.p_hat * (1.0 - est.p_hat) / 100_000.0).sqrt();
        assert_eq!(est.std_error, expect_se);
    }

    #[test]
    fn capacity_below_support_always_violates() {
        let inst = CCInstance::new(
            vec![1, 1],
            vec![100.0, 200.0],
            WeightModel::UniformAdditive { delta: 25.0 },
            250.0,
            0.01,
        )
        .unwrap();
        assert_eq!(mc_violation(&inst, &Solution::ones(2), 5000, 3).unwrap().p_hat, 1.0);
    }

    #[test]
    fn sampling_is_seeded() {
        let inst = CCInstance::new(
            vec![1, 1],
            vec![100.0, 90.0],
            WeightModel::Normal {
                variances: vec![100.0, 400.0],
            },
            200.0,
            0.1,
        )
        .unwrap();
        let x = Solution::ones(2);
        assert_eq!(
            mc_violation(&inst, &x, 1000, 5).unwrap(),
            mc_violation(&inst, &x, 1000, 5).unwrap()
        );
    }

    #[test]
    fn deterministic_exhaustive_matches_dp() {
        for seed in 0..10 {
            let det = generate_instance(InstanceKind::Uncorrelated, 14, seed, 100).unwrap();
            let inst = CCInstance::deterministic(&det, 0.01).unwrap();
            let (x, p) = exhaustive_optimum(&inst, BoundMethod::Cantelli).unwrap();
            assert_eq!(p, dp_optimum(&det).unwrap());
            assert_eq!(profit(&inst, &x).unwrap(), p);
        }
    }

    #[test]
    fn vacuous_and_impossible_constraints() {
        let det = generate_instance(InstanceKind::Uncorrelated, 10, 4, 100).unwrap();
        let (inst, _) = adapt_instance(&det, 100, WeightModel::UniformAdditive { delta: 25.0 }, 1.0).unwrap();
        let (x, p) = exhaustive_optimum(&inst, BoundMethod::Cantelli).unwrap();
        assert_eq!(x, Solution::ones(10));
        assert_eq!(p, det.profits().iter().sum::<u64>());

        let tiny = CCInstance::new(
            vec![5, 6],
            vec![100.0, 100.0],
            WeightModel::UniformAdditive { delta: 50.0 },
            150.0,
            1e-6,
        )
        .unwrap();
        let (x, p) = exhaustive_optimum(&tiny, BoundMethod::Cantelli).unwrap();
        assert_eq!((x, p), (Solution::zeros(2), 0));
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let det = DetInstance::new(vec![5, 5, 5], vec![10, 10, 10], 10).unwrap();
        let inst = CCInstance::deterministic(&det, 0.5).unwrap();
        let (x, p) = exhaustive_optimum(&inst, BoundMethod::Cantelli).unwrap();
        assert_eq!(p, 5);
        assert_eq!(x.to_string(), "001");
    }

    #[test]
    fn refuses_large_instances() {
        let det = generate_instance(InstanceKind::Uncorrelated, 25, 4, 100).unwrap();
        let inst = CCInstance::deterministic(&det, 0.5).unwrap();
        assert!(matches!(
            exhaustive_optimum(&inst, BoundMethod::Cantelli),
            Err(Error::TooManyItems { .. })
        ));
    }
}
