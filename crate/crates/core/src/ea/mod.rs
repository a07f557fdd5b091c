//! Evolutionary search: the (1+1) EA on the lexicographic fitness and GSEMO
//! on the bi-objective fitness.
//!
//! Both algorithms count one fitness evaluation for the initial solution and
//! one per offspring, and stop after exactly `budget` evaluations. Each run
//! draws from a single ChaCha8 stream seeded by `RunConfig::seed`, so a
//! `(instance, config)` pair always reproduces the same result.

mod gsemo;
mod mutation;
mod one_plus_one;

pub use gsemo::{best_feasible, is_antichain, run_gsemo, run_gsemo_observed};
pub use mutation::{mutate, random_solution};
pub use one_plus_one::{run_one_plus_one, run_one_plus_one_observed};

use serde::{Deserialize, Serialize};

use crate::bounds::{check_admissible, BoundMethod};
use crate::error::{Error, Result};
use crate::fitness::{MoFitness, SoFitness};
use crate::instance::{CCInstance, Solution};

pub const DEFAULT_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// (1+1) EA with the lexicographic fitness.
    Single,
    /// GSEMO with the bi-objective fitness.
    Multi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub budget: u64,
    pub seed: u64,
    pub method: BoundMethod,
    pub objective: Objective,
    /// Evaluations between trace samples.
    pub trace_stride: u64,
}

impl RunConfig {
    pub fn new(objective: Objective, method: BoundMethod, budget: u64, seed: u64) -> Self {
        RunConfig {
            budget,
            seed,
            method,
            objective,
            trace_stride: (budget / 100).max(1),
        }
    }

    pub fn validate(&self, inst: &CCInstance) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Config("budget must be at least 1".into()));
        }
        if self.trace_stride == 0 {
            return Err(Error::Config("trace stride must be at least 1".into()));
        }
        check_admissible(inst.model(), self.method)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evaluation: u64,
    pub best_feasible_profit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub solution: Solution,
    pub fitness: MoFitness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub config: RunConfig,
    /// Final parent of the (1+1) EA.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best: Option<Solution>,
    pub best_feasible_profit: Option<u64>,
    pub evaluations: u64,
    pub trace: Vec<TracePoint>,
    /// Final GSEMO population.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub archive: Vec<ArchiveEntry>,
}

impl RunResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run result serializes")
    }
}

/// State reported to observers after every evaluation.
#[derive(Debug)]
pub enum StepEvent<'a> {
    OnePlusOne {
        evaluation: u64,
        parent: &'a Solution,
        fitness: &'a SoFitness,
        accepted: bool,
    },
    Gsemo {
        evaluation: u64,
        archive: &'a [ArchiveEntry],
        accepted: bool,
    },
}

/// Runs the algorithm selected by `cfg.objective`.
pub fn run(inst: &CCInstance, cfg: &RunConfig) -> Result<RunResult> {
    match cfg.objective {
        Objective::Single => run_one_plus_one(inst, cfg),
        Objective::Multi => run_gsemo(inst, cfg),
    }
}

struct Tracer {
    stride: u64,
    budget: u64,
    points: Vec<TracePoint>,
}

impl Tracer {
    fn new(cfg: &RunConfig) -> Self {
        Tracer {
            stride: cfg.trace_stride,
            budget: cfg.budget,
            points: Vec::new(),
        }
    }

    fn record(&mut self, evaluation: u64, best: Option<u64>) {
        if evaluation == 1 || evaluation.is_multiple_of(self.stride) || evaluation == self.budget {
            self.points.push(TracePoint {
                evaluation,
                best_feasible_profit: best,
            });
        }
    }
}
