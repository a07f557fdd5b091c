use rand::Rng;

use super::{mutate, random_solution, ArchiveEntry, Objective, RunConfig, RunResult, StepEvent, Tracer};
use crate::error::{Error, Result};
use crate::fitness::{mo_dominates, mo_fitness};
use crate::instance::CCInstance;
use crate::rng::rng_from_seed;

pub fn run_gsemo(inst: &CCInstance, cfg: &RunConfig) -> Result<RunResult> {
    run_gsemo_observed(inst, cfg, |_| {})
}

/// GSEMO; `observer` sees the archive after every evaluation.
///
/// An offspring enters the archive only if no member weakly dominates it, and
/// it then evicts every member it weakly dominates. Offspring that repeat an
/// existing objective vector are therefore rejected.
pub fn run_gsemo_observed<F>(inst: &CCInstance, cfg: &RunConfig, mut observer: F) -> Result<RunResult>
where
    F: FnMut(&StepEvent<'_>),
{
    if cfg.objective != Objective::Multi {
        return Err(Error::Config("GSEMO needs the multi objective".into()));
    }
    cfg.validate(inst)?;
    let alpha = inst.alpha();
    let mut rng = rng_from_seed(cfg.seed);
    let mut tracer = Tracer::new(cfg);

    let first = random_solution(inst.n(), &mut rng);
    let fitness = mo_fitness(inst, &first, cfg.method)?;
    let mut archive = vec![ArchiveEntry {
        solution: first,
        fitness,
    }];
    let mut evaluations = 1;
    let profit_of = |archive: &[ArchiveEntry]| best_feasible(archive, alpha).map(|e| e.fitness.g1 as u64);
    tracer.record(evaluations, profit_of(&archive));
    observer(&StepEvent::Gsemo {
        evaluation: evaluations,
        archive: &archive,
        accepted: true,
    });

    while evaluations < cfg.budget {
        let pick = rng.random_range(0..archive.len());
        let child = mutate(&archive[pick].solution, &mut rng);
        let fitness = mo_fitness(inst, &child, cfg.method)?;
        evaluations += 1;

        let accepted = !archive.iter().any(|w| mo_dominates(&w.fitness, &fitness));
        if accepted {
            archive.retain(|z| !mo_dominates(&fitness, &z.fitness));
            debug_assert!(archive.iter().all(|z| !mo_dominates(&z.fitness, &fitness)));
            archive.push(ArchiveEntry {
                solution: child,
                fitness,
            });
        }
        tracer.record(evaluations, profit_of(&archive));
        observer(&StepEvent::Gsemo {
            evaluation: evaluations,
            archive: &archive,
            accepted,
        });
    }

    assert!(is_antichain(&archive), "GSEMO archive holds a dominated member");
    Ok(RunResult {
        config: *cfg,
        best: None,
        best_feasible_profit: profit_of(&archive),
        evaluations,
        trace: tracer.points,
        archive,
    })
}

/// Member with the largest `g1` among those with `g2 <= alpha`.
pub fn best_feasible(archive: &[ArchiveEntry], alpha: f64) -> Option<&ArchiveEntry> {
    archive.iter().filter(|e| e.fitness.is_feasible(alpha)).max_by(|a, b| {
        a.fitness
            .g1
            .total_cmp(&b.fitness.g1)
            .then(b.fitness.g2.total_cmp(&a.fitness.g2))
    })
}

/// No member weakly dominates another.
pub fn is_antichain(archive: &[ArchiveEntry]) -> bool {
    archive.iter().enumerate().all(|(i, a)| {
        archive
            .iter()
            .enumerate()
            .all(|(j, b)| i == j || !mo_dominates(&a.fitness, &b.fitness))
    })
}
