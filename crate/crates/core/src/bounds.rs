//! Upper bounds on the probability `Pr(W(x) >= B)` that a solution overloads
//! the knapsack.
//!
//! Two estimators are provided. The one-sided Chebyshev (Cantelli) bound only
//! needs the mean and variance of the total weight and works for every weight
//! model. The Chernoff bound needs independent weights on intervals of equal
//! width, so it is admissible only for [`WeightModel::UniformAdditive`].
//!
//! Both bounds describe deviations above the mean; whenever the expected
//! weight already reaches the capacity they return the sentinel `1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{weight_stats, CCInstance, Solution, WeightModel, WeightStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    Cantelli,
    Chernoff,
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMethod::Cantelli => "cantelli",
            BoundMethod::Chernoff => "chernoff",
        })
    }
}

impl FromStr for BoundMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cantelli" | "chebyshev" => Ok(BoundMethod::Cantelli),
            "chernoff" => Ok(BoundMethod::Chernoff),
            other => Err(Error::Config(format!("unknown bound method `{other}`"))),
        }
    }
}

/// A probability bound, always in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundValue(f64);

impl BoundValue {
    pub const ZERO: BoundValue = BoundValue(0.0);
    pub const ONE: BoundValue = BoundValue(1.0);

    pub fn new(value: f64) -> Self {
        if value.is_nan() {
            return BoundValue::ONE;
        }
        BoundValue(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Fails unless `method` may be used with `model`.
///
/// The deterministic model is evaluated exactly, so every method is accepted
/// for it.
pub fn check_admissible(model: &WeightModel, method: BoundMethod) -> Result<()> {
    match (method, model) {
        (BoundMethod::Cantelli, _) | (_, WeightModel::Deterministic) => Ok(()),
        (BoundMethod::Chernoff, WeightModel::UniformAdditive { delta }) if *delta > 0.0 => Ok(()),
        (BoundMethod::Chernoff, WeightModel::UniformAdditive { .. }) => Err(Error::ZeroIntervalWidth),
        (BoundMethod::Chernoff, other) => Err(Error::InadmissibleMethod(format!(
            "Chernoff needs a shared additive interval width, got {}",
            other.label()
        ))),
    }
}

/// Whether the tail bound is the relevant measure of violation for a
/// solution with expected weight `expected`.
///
/// For random weights that means `E < B`. Deterministic weights use the
/// classic `W <= B` capacity.
pub fn below_capacity(model: &WeightModel, expected: f64, capacity: f64) -> bool {
    match model {
        WeightModel::Deterministic => expected <= capacity,
        _ => expected < capacity,
    }
}

/// `Var / (Var + (B - E)^2)`.
pub fn cantelli(stats: &WeightStats, capacity: f64) -> BoundValue {
    if stats.expected >= capacity {
        return BoundValue::ONE;
    }
    if stats.variance == 0.0 {
        return BoundValue::ZERO;
    }
    let gap = capacity - stats.expected;
    BoundValue::new(stats.variance / (stats.variance + gap * gap))
}

/// Cantelli specialised to weights uniform on `[a_i - delta, a_i + delta]`.
pub fn cantelli_uniform_additive(delta: f64, count: usize, expected: f64, capacity: f64) -> BoundValue {
    if expected >= capacity {
        return BoundValue::ONE;
    }
    let spread = delta * delta * count as f64;
    if spread == 0.0 {
        return BoundValue::ZERO;
    }
    let gap = capacity - expected;
    BoundValue::new(spread / (spread + 3.0 * gap * gap))
}

/// Cantelli specialised to weights uniform on `[(1 - beta) a_i, (1 + beta) a_i]`.
///
/// Uses `(sum a_i)^2` in place of `sum a_i^2`, so it is never tighter than
/// [`cantelli`] with the exact variance.
pub fn cantelli_uniform_relative(beta: f64, expected: f64, capacity: f64) -> BoundValue {
    if expected >= capacity {
        return BoundValue::ONE;
    }
    let spread = beta * beta * expected * expected;
    if spread == 0.0 {
        return BoundValue::ZERO;
    }
    let gap = capacity - expected;
    BoundValue::new(spread / (spread + 3.0 * gap * gap))
}

/// `ln(e^eps / (1 + eps)^(1 + eps))`, which is `<= 0` for `eps >= 0`.
fn chernoff_log_factor(eps: f64) -> f64 {
    eps - (1.0 + eps) * eps.ln_1p()
}

/// Chernoff bound for weights uniform on `[a_i - delta, a_i + delta]`.
///
/// With `eps = (B - E) / (delta * count)` the bound is
/// `(e^eps / (1 + eps)^(1 + eps))^(count / 2)`. It is `0` once `B` reaches
/// the largest attainable weight `E + delta * count`.
pub fn chernoff_uniform_additive(delta: f64, count: usize, expected: f64, capacity: f64) -> Result<BoundValue> {
    if count == 0 {
        return Ok(if expected >= capacity {
            BoundValue::ONE
        } else {
            BoundValue::ZERO
        });
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::ZeroIntervalWidth);
    }
    if expected >= capacity {
        return Ok(BoundValue::ONE);
    }
    let width = delta * count as f64;
    let eps = (capacity - expected) / width;
    if eps >= 1.0 {
        return Ok(BoundValue::ZERO);
    }
    let log_bound = 0.5 * count as f64 * chernoff_log_factor(eps);
    Ok(BoundValue::new(log_bound.exp()))
}

/// Which bound is at least as tight, and whether the decision was degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundPreference {
    pub method: BoundMethod,
    /// Set when the Chernoff factor rounds to 1 and no comparison is possible.
    pub degenerate: bool,
}

/// `C = (e^eps / (1 + eps)^(1 + eps))^E` and `1 - C`, both computed from logs.
fn chernoff_factor(eps: f64, expected: f64) -> (f64, f64) {
    let log_c = expected * chernoff_log_factor(eps);
    (log_c.exp(), -log_c.exp_m1())
}

/// Prefers Chernoff iff `C (eps E)^2 / (1 - C) <= Var`.
pub fn preferred_bound(eps: f64, expected: f64, variance: f64) -> BoundPreference {
    let (c, one_minus_c) = chernoff_factor(eps, expected);
    if one_minus_c <= 0.0 {
        return BoundPreference {
            method: BoundMethod::Cantelli,
            degenerate: true,
        };
    }
    let dev = eps * expected;
    let threshold = c * dev * dev / one_minus_c;
    BoundPreference {
        method: if threshold <= variance {
            BoundMethod::Chernoff
        } else {
            BoundMethod::Cantelli
        },
        degenerate: false,
    }
}

/// [`preferred_bound`] for the additive uniform model.
///
/// Weights are mapped to `[0, 1]` by `(w_i - a_i + delta) / (2 delta)`, which
/// gives mean `count / 2` and variance `count / 12`. Cantelli is invariant
/// under that affine map, so the answer matches a direct comparison of
/// [`chernoff_uniform_additive`] and [`cantelli_uniform_additive`].
pub fn preferred_bound_uniform_additive(delta: f64, count: usize, expected: f64, capacity: f64) -> BoundPreference {
    let c = count as f64;
    let eps = (capacity - expected) / (delta * c);
    preferred_bound(eps, c / 2.0, c / 12.0)
}

/// Variance at which the Chernoff and Cantelli bounds coincide.
pub fn crossover_variance(eps: f64, expected: f64) -> Result<f64> {
    let (c, one_minus_c) = chernoff_factor(eps, expected);
    if [one_minus_c, eps, expected].iter().any(|v| v.is_nan() || *v <= 0.0) {
        return Err(Error::DegenerateCrossover { eps, expected });
    }
    let dev = eps * expected;
    Ok(c * dev * dev / one_minus_c)
}

/// Bound for a solution's statistics under the instance's model.
pub fn bound_from_stats(inst: &CCInstance, stats: &WeightStats, method: BoundMethod) -> Result<BoundValue> {
    check_admissible(inst.model(), method)?;
    let capacity = inst.capacity();
    match (inst.model(), method) {
        (WeightModel::Deterministic, _) => Ok(if stats.expected <= capacity {
            BoundValue::ZERO
        } else {
            BoundValue::ONE
        }),
        (_, BoundMethod::Cantelli) => Ok(cantelli(stats, capacity)),
        (WeightModel::UniformAdditive { delta }, BoundMethod::Chernoff) => {
            chernoff_uniform_additive(*delta, stats.count, stats.expected, capacity)
        }
        (model, BoundMethod::Chernoff) => Err(Error::InadmissibleMethod(model.label())),
    }
}

/// Upper bound on `Pr(W(x) >= B)` for solution `x`.
pub fn violation_bound(inst: &CCInstance, x: &Solution, method: BoundMethod) -> Result<BoundValue> {
    let stats = weight_stats(inst, x)?;
    bound_from_stats(inst, &stats, method)
}
