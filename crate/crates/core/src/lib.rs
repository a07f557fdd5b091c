//! Chance-constrained 0/1 knapsack optimisation.
//!
//! Item weights are independent random variables and a solution must
//! overload the knapsack with probability at most `alpha`. The crate
//! provides:
//!
//! - instance types, generators and the gamma-shift adaptation ([`instance`],
//!   [`generator`]) plus an exact DP for the deterministic problem ([`dp`]);
//! - Cantelli and Chernoff upper bounds on the violation probability
//!   ([`bounds`]);
//! - lexicographic and bi-objective fitness functions ([`fitness`]);
//! - the (1+1) EA and GSEMO ([`ea`]);
//! - Monte-Carlo and exhaustive oracles ([`oracle`]);
//! - rank statistics and the experiment runner ([`stats`], [`harness`]).

pub mod bounds;
pub mod dp;
pub mod ea;
pub mod error;
pub mod fitness;
pub mod generator;
pub mod harness;
pub mod instance;
pub mod oracle;
pub mod rng;
pub mod stats;

pub use bounds::{violation_bound, BoundMethod, BoundValue};
pub use ea::{run, run_gsemo, run_one_plus_one, Objective, RunConfig, RunResult};
pub use error::{Error, Result};
pub use fitness::{mo_fitness, so_fitness, MoFitness, SoFitness};
pub use generator::{adapt_instance, generate_instance, AdaptationReport, InstanceKind};
pub use instance::{profit, weight_stats, CCInstance, DetInstance, Solution, WeightModel, WeightStats};
