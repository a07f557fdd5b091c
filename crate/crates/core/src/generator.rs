//! Benchmark instance generation and the gamma-shift adaptation that turns a
//! deterministic instance into a chance-constrained one.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{CCInstance, DetInstance, WeightModel};
use crate::rng::stream;

/// Largest profit/weight drawn by the generator.
pub const MAX_ITEM_VALUE: u64 = 1000;
pub const DEFAULT_PROFIT_SHIFT: u64 = 100;
pub const DEFAULT_GAMMA: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InstanceKind {
    /// Profits and weights drawn independently.
    #[serde(rename = "uncorr")]
    Uncorrelated,
    /// Profit equals weight plus a fixed shift.
    #[serde(rename = "bou-s-c")]
    BoundedStronglyCorrelated,
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceKind::Uncorrelated => "uncorr",
            InstanceKind::BoundedStronglyCorrelated => "bou-s-c",
        })
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uncorr" => Ok(InstanceKind::Uncorrelated),
            "bou-s-c" => Ok(InstanceKind::BoundedStronglyCorrelated),
            other => Err(Error::Config(format!("unknown instance kind `{other}`"))),
        }
    }
}

/// Generates an instance with weights uniform in `[1, 1000]`.
///
/// Capacity is `floor(sum(w) / 2)`; use [`DetInstance::with_capacity`] to
/// override it. The same `(kind, n, seed, profit_shift)` always yields the
/// same instance.
pub fn generate_instance(kind: InstanceKind, n: usize, seed: u64, profit_shift: u64) -> Result<DetInstance> {
    if n == 0 {
        return Err(Error::InvalidInstance("item count must be positive".into()));
    }
    if kind == InstanceKind::BoundedStronglyCorrelated && profit_shift == 0 {
        return Err(Error::InvalidInstance("profit shift must be positive".into()));
    }
    let mut rng = stream(seed, &format!("generate/{kind}/{n}"), 0);
    let mut profits = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for _ in 0..n {
        let w = rng.random_range(1..=MAX_ITEM_VALUE);
        let p = match kind {
            InstanceKind::Uncorrelated => rng.random_range(1..=MAX_ITEM_VALUE),
            InstanceKind::BoundedStronglyCorrelated => w + profit_shift,
        };
        profits.push(p);
        weights.push(w);
    }
    let capacity = (weights.iter().sum::<u64>() / 2).max(1);
    DetInstance::new(profits, weights, capacity)
}

/// Outcome of [`adapt_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptationReport {
    pub gamma: u64,
    /// Longest prefix of the ascending weight order that fits in `B`.
    pub k: usize,
    pub original_capacity: u64,
    pub adapted_capacity: f64,
}

/// Number of smallest items that fit together within the capacity.
pub fn max_item_count(det: &DetInstance) -> usize {
    let mut order: Vec<usize> = (0..det.n()).collect();
    order.sort_by_key(|&i| det.weights()[i]);
    let mut total = 0u64;
    let mut k = 0;
    for i in order {
        total += det.weights()[i];
        if total > det.capacity() {
            break;
        }
        k += 1;
    }
    k
}

/// Shifts every weight by `gamma` and the capacity by `k * gamma`.
pub fn adapt_instance(
    det: &DetInstance,
    gamma: u64,
    model: WeightModel,
    alpha: f64,
) -> Result<(CCInstance, AdaptationReport)> {
    let k = max_item_count(det);
    let adapted_capacity = (det.capacity() + k as u64 * gamma) as f64;
    let expected: Vec<f64> = det.weights().iter().map(|&w| (w + gamma) as f64).collect();
    let inst = CCInstance::new(det.profits().to_vec(), expected, model, adapted_capacity, alpha)?;
    Ok((
        inst,
        AdaptationReport {
            gamma,
            k,
            original_capacity: det.capacity(),
            adapted_capacity,
        },
    ))
}
