use std::cmp::Ordering;

use super::{mutate, random_solution, Objective, RunConfig, RunResult, StepEvent, Tracer};
use crate::error::{Error, Result};
use crate::fitness::{so_compare, so_fitness};
use crate::instance::CCInstance;
use crate::rng::rng_from_seed;

pub fn run_one_plus_one(inst: &CCInstance, cfg: &RunConfig) -> Result<RunResult> {
    run_one_plus_one_observed(inst, cfg, |_| {})
}

/// (1+1) EA; `observer` sees the parent after every evaluation.
pub fn run_one_plus_one_observed<F>(inst: &CCInstance, cfg: &RunConfig, mut observer: F) -> Result<RunResult>
where
    F: FnMut(&StepEvent<'_>),
{
    if cfg.objective != Objective::Single {
        return Err(Error::Config("(1+1) EA needs the single objective".into()));
    }
    cfg.validate(inst)?;
    let mut rng = rng_from_seed(cfg.seed);
    let mut tracer = Tracer::new(cfg);

    let mut parent = random_solution(inst.n(), &mut rng);
    let mut fitness = so_fitness(inst, &parent, cfg.method)?;
    let mut evaluations = 1;
    let best_of = |f: &crate::fitness::SoFitness| f.is_feasible().then_some(f.p);
    tracer.record(evaluations, best_of(&fitness));
    observer(&StepEvent::OnePlusOne {
        evaluation: evaluations,
        parent: &parent,
        fitness: &fitness,
        accepted: true,
    });

    while evaluations < cfg.budget {
        let child = mutate(&parent, &mut rng);
        let child_fitness = so_fitness(inst, &child, cfg.method)?;
        evaluations += 1;
        let accepted = so_compare(&child_fitness, &fitness) != Ordering::Less;
        if accepted {
            parent = child;
            fitness = child_fitness;
        }
        tracer.record(evaluations, best_of(&fitness));
        observer(&StepEvent::OnePlusOne {
            evaluation: evaluations,
            parent: &parent,
            fitness: &fitness,
            accepted,
        });
    }

    Ok(RunResult {
        config: *cfg,
        best_feasible_profit: best_of(&fitness),
        best: Some(parent),
        evaluations,
        trace: tracer.points,
        archive: Vec::new(),
    })
}
