use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cckp::bounds::preferred_bound_uniform_additive;
use cckp::harness::{emit_fig1, emit_fig2, emit_table, parse_table, run_matrix, ExperimentConfig, FIG1_EPSILONS};
use cckp::oracle::{exhaustive_optimum, mc_violation, DEFAULT_MC_SAMPLES, EXHAUSTIVE_LIMIT};
use cckp::{
    adapt_instance, generate_instance, profit, run, violation_bound, weight_stats, BoundMethod, CCInstance,
    DetInstance, InstanceKind, Objective, RunConfig, Solution, WeightModel,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "cckp", version, about = "Chance-constrained knapsack toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a deterministic instance in the plain-text format.
    Generate {
        /// `uncorr` or `bou-s-c`.
        #[arg(long, default_value = "bou-s-c")]
        kind: InstanceKind,
        #[arg(long, short)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = cckp::generator::DEFAULT_PROFIT_SHIFT)]
        profit_shift: u64,
        /// Replace the default capacity of half the total weight.
        #[arg(long)]
        capacity: Option<u64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Turn a deterministic instance into a chance-constrained one.
    Adapt {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = cckp::generator::DEFAULT_GAMMA)]
        gamma: u64,
        /// `additive:<delta>`, `relative:<beta>` or `deterministic`.
        #[arg(long, value_parser = parse_model)]
        model: WeightModel,
        #[arg(long)]
        alpha: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run one search and print the result as JSON.
    Solve {
        /// Chance-constrained JSON or a plain-text deterministic instance.
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "gsemo")]
        algorithm: Algorithm,
        #[arg(long, default_value = "cantelli")]
        method: BoundMethod,
        #[arg(long, default_value_t = cckp::ea::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Confidence level used when the instance is plain text.
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
    },
    /// Run an experiment grid described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Override the master seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = "CCKP_OUTPUT_DIR")]
        output_dir: Option<PathBuf>,
    },
    /// Report bounds, a sampled violation rate and (for small n) the optimum.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        /// Bit string such as `0110`.
        #[arg(long)]
        solution: Solution,
        #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write figure data as CSV.
    #[command(subcommand)]
    Figures(Figure),
}

#[derive(Subcommand)]
enum Figure {
    /// Crossover variance curves over integer expected weights.
    Fig1 {
        #[arg(long, default_value_t = 100)]
        e_max: u32,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Means per algorithm and alpha for one instance row group.
    Fig2 {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        instance: String,
        #[arg(long)]
        uncertainty: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Ea,
    Gsemo,
}

fn parse_model(s: &str) -> Result<WeightModel, String> {
    if s == "deterministic" {
        return Ok(WeightModel::Deterministic);
    }
    let (kind, value) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `additive:<delta>`, `relative:<beta>` or `deterministic`, got `{s}`"))?;
    let value: f64 = value.parse().map_err(|e| format!("bad number `{value}`: {e}"))?;
    match kind {
        "additive" => Ok(WeightModel::UniformAdditive { delta: value }),
        "relative" => Ok(WeightModel::UniformRelative { beta: value }),
        other => Err(format!("unknown model `{other}`")),
    }
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => emit(text),
    }
}

/// Loads chance-constrained JSON, or wraps a plain-text instance in the
/// deterministic model.
fn load_instance(path: &Path, alpha: f64) -> Result<CCInstance> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        Ok(CCInstance::from_json(&text)?)
    } else {
        Ok(CCInstance::deterministic(&DetInstance::parse(&text)?, alpha)?)
    }
}

fn verify(inst: &CCInstance, x: &Solution, samples: u64, seed: u64) -> Result<serde_json::Value> {
    let stats = weight_stats(inst, x)?;
    let mut bounds = serde_json::Map::new();
    for method in [BoundMethod::Cantelli, BoundMethod::Chernoff] {
        if let Ok(b) = violation_bound(inst, x, method) {
            bounds.insert(method.to_string(), json!(b.value()));
        }
    }
    let preferred = match inst.model() {
        WeightModel::UniformAdditive { delta } if stats.count > 0 && stats.expected < inst.capacity() => Some(
            preferred_bound_uniform_additive(*delta, stats.count, stats.expected, inst.capacity())
                .method
                .to_string(),
        ),
        _ => None,
    };
    let mc = mc_violation(inst, x, samples, seed)?;
    let mut report = json!({
        "profit": profit(inst, x)?,
        "expected_weight": stats.expected,
        "variance": stats.variance,
        "capacity": inst.capacity(),
        "alpha": inst.alpha(),
        "bounds": bounds,
        "preferred": preferred,
        "monte_carlo": { "p_hat": mc.p_hat, "std_error": mc.std_error, "samples": mc.samples },
    });
    if inst.n() <= EXHAUSTIVE_LIMIT {
        let mut optima = serde_json::Map::new();
        for method in [BoundMethod::Cantelli, BoundMethod::Chernoff] {
            if let Ok((best, value)) = exhaustive_optimum(inst, method) {
                optima.insert(method.to_string(), json!({ "solution": best, "profit": value }));
            }
        }
        report["exhaustive_optimum"] = optima.into();
    }
    Ok(report)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate {
            kind,
            n,
            seed,
            profit_shift,
            capacity,
            output,
        } => {
            let mut det = generate_instance(kind, n, seed, profit_shift)?;
            if let Some(c) = capacity {
                det = det.with_capacity(c)?;
            }
            write_out(output.as_deref(), &det.to_text())
        }
        Command::Adapt {
            instance,
            gamma,
            model,
            alpha,
            output,
        } => {
            let det = DetInstance::parse(&read(&instance)?)?;
            let (inst, report) = adapt_instance(&det, gamma, model, alpha)?;
            eprintln!("{}", serde_json::to_string(&report)?);
            write_out(output.as_deref(), &(inst.to_json() + "\n"))
        }
        Command::Solve {
            instance,
            algorithm,
            method,
            budget,
            seed,
            alpha,
        } => {
            let inst = load_instance(&instance, alpha)?;
            let objective = match algorithm {
                Algorithm::Ea => Objective::Single,
                Algorithm::Gsemo => Objective::Multi,
            };
            let result = run(&inst, &RunConfig::new(objective, method, budget, seed))?;
            emit(&(result.to_json() + "\n"))
        }
        Command::Experiment {
            config,
            seed,
            output_dir,
        } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            if output_dir.is_some() {
                cfg.output_dir = output_dir;
            }
            let outcome = run_matrix(&cfg)?;
            for f in &outcome.failures {
                eprintln!("cell failed for {}: {}", f.instance, f.message);
            }
            emit(&emit_table(&outcome.table))?;
            if !outcome.failures.is_empty() {
                bail!("{} cell(s) failed", outcome.failures.len());
            }
            Ok(())
        }
        Command::Verify {
            instance,
            solution,
            samples,
            seed,
        } => {
            let inst = load_instance(&instance, 0.01)?;
            let report = verify(&inst, &solution, samples, seed)?;
            emit(&(serde_json::to_string_pretty(&report)? + "\n"))
        }
        Command::Figures(Figure::Fig1 { e_max, output }) => {
            let grid: Vec<f64> = (1..=e_max).map(f64::from).collect();
            write_out(output.as_deref(), &emit_fig1(&FIG1_EPSILONS, &grid))
        }
        Command::Figures(Figure::Fig2 {
            table,
            instance,
            uncertainty,
            output,
        }) => {
            let table = parse_table(&read(&table)?)?;
            write_out(output.as_deref(), &emit_fig2(&table, &instance, &uncertainty))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_strings() {
        assert_eq!(
            parse_model("additive:25").unwrap(),
            WeightModel::UniformAdditive { delta: 25.0 }
        );
        assert_eq!(
            parse_model("relative:0.1").unwrap(),
            WeightModel::UniformRelative { beta: 0.1 }
        );
        assert_eq!(parse_model("deterministic").unwrap(), WeightModel::Deterministic);
        assert!(parse_model("normal:3").is_err());
        assert!(parse_model("additive").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
