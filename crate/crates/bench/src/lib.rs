//! Fixtures shared by the criterion benches.

use cckp::generator::{adapt_instance, generate_instance, InstanceKind, DEFAULT_GAMMA};
use cckp::{CCInstance, WeightModel};

/// A gamma-adapted bou-s-c instance with the additive uniform model.
pub fn bench_instance(n: usize, delta: f64, alpha: f64) -> CCInstance {
    let det = generate_instance(InstanceKind::BoundedStronglyCorrelated, n, 1, 100).expect("valid generator input");
    adapt_instance(&det, DEFAULT_GAMMA, WeightModel::UniformAdditive { delta }, alpha)
        .expect("delta below shifted weights")
        .0
}
