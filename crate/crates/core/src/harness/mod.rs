//! Batch experiments over a grid of instances, confidence levels, weight
//! models and algorithms.
//!
//! Every `(cell, repetition)` pair gets its own random stream derived from
//! the master seed and the cell's identity, so results do not depend on the
//! schedule or on which other cells are present. Raw per-run records are
//! written before they are aggregated, and the table is a pure function of
//! those records.

mod figures;
mod table;

pub use figures::{emit_fig1, emit_fig2, FIG1_EPSILONS};
pub use table::{aggregate, emit_table, parse_table, CellSummary, ExperimentTable, TableRow};

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundMethod;
use crate::ea::{run, Objective, RunConfig, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::generator::{adapt_instance, generate_instance, InstanceKind, DEFAULT_GAMMA, DEFAULT_PROFIT_SHIFT};
use crate::instance::{CCInstance, DetInstance, WeightModel};
use crate::rng::derive_seed;

pub const DEFAULT_REPETITIONS: usize = 30;
pub const RAW_RECORDS_FILE: &str = "raw_records.jsonl";
pub const RAW_CELLS_DIR: &str = "raw";
pub const TABLE_FILE: &str = "table.csv";

/// One algorithm/estimator combination, numbered like the table columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmId {
    EaDeterministic,
    EaChernoff,
    EaCantelli,
    GsemoChernoff,
    GsemoCantelli,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 5] = [
        AlgorithmId::EaDeterministic,
        AlgorithmId::EaChernoff,
        AlgorithmId::EaCantelli,
        AlgorithmId::GsemoChernoff,
        AlgorithmId::GsemoCantelli,
    ];

    pub fn objective(self) -> Objective {
        match self {
            AlgorithmId::GsemoChernoff | AlgorithmId::GsemoCantelli => Objective::Multi,
            _ => Objective::Single,
        }
    }

    pub fn method(self) -> BoundMethod {
        match self {
            AlgorithmId::EaChernoff | AlgorithmId::GsemoChernoff => BoundMethod::Chernoff,
            _ => BoundMethod::Cantelli,
        }
    }

    /// Runs on the original weights, ignoring the uncertainty grid.
    pub fn is_deterministic(self) -> bool {
        self == AlgorithmId::EaDeterministic
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmId::EaDeterministic => "ea_deterministic",
            AlgorithmId::EaChernoff => "ea_chernoff",
            AlgorithmId::EaCantelli => "ea_cantelli",
            AlgorithmId::GsemoChernoff => "gsemo_chernoff",
            AlgorithmId::GsemoCantelli => "gsemo_cantelli",
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmId::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: InstanceKind,
    pub n: usize,
    pub seed: u64,
    #[serde(default = "default_profit_shift")]
    pub profit_shift: u64,
    /// Overrides the default `floor(sum(w) / 2)` capacity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<u64>,
}

fn default_profit_shift() -> u64 {
    DEFAULT_PROFIT_SHIFT
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<DetInstance> {
        let det = generate_instance(self.kind, self.n, self.seed, self.profit_shift)?;
        match self.capacity {
            Some(c) => det.with_capacity(c),
            None => Ok(det),
        }
    }
}

/// Where an instance comes from: a canonical text file or the generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generate: Option<GeneratorSpec>,
}

impl InstanceSource {
    pub fn generated(name: impl Into<String>, spec: GeneratorSpec) -> Self {
        InstanceSource {
            name: Some(name.into()),
            file: None,
            generate: Some(spec),
        }
    }

    pub fn label(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        match (&self.file, &self.generate) {
            (Some(path), _) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            (None, Some(g)) => format!("{}-n{}-s{}", g.kind, g.n, g.seed),
            (None, None) => "unnamed".into(),
        }
    }

    pub fn load(&self) -> Result<DetInstance> {
        match (&self.file, &self.generate) {
            (Some(path), None) => {
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                DetInstance::parse(&text)
            }
            (None, Some(spec)) => spec.build(),
            _ => Err(Error::Config(format!(
                "instance `{}` needs exactly one of `file` or `generate`",
                self.label()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instances: Vec<InstanceSource>,
    pub alphas: Vec<f64>,
    #[serde(default)]
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub betas: Vec<f64>,
    pub algorithms: Vec<AlgorithmId>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_gamma")]
    pub gamma: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

fn default_repetitions() -> usize {
    DEFAULT_REPETITIONS
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

fn default_gamma() -> u64 {
    DEFAULT_GAMMA
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.into()));
        if self.repetitions == 0 {
            return fail("repetitions must be at least 1");
        }
        if self.budget == 0 {
            return fail("budget must be at least 1");
        }
        if self.instances.is_empty() {
            return fail("no instances configured");
        }
        if self.alphas.is_empty() {
            return fail("no alpha values configured");
        }
        if self.algorithms.is_empty() {
            return fail("no algorithms configured");
        }
        if self.deltas.is_empty() && self.betas.is_empty() {
            return fail("need at least one delta or beta value");
        }
        if self.deltas.is_empty() && self.algorithms.iter().any(|a| a.method() == BoundMethod::Chernoff) {
            return fail("Chernoff algorithms need a delta grid");
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
            return Err(Error::Config(format!("alpha {a} outside (0, 1]")));
        }
        if let Some(d) = self.deltas.iter().find(|d| **d <= 0.0 || !d.is_finite()) {
            return Err(Error::Config(format!("delta {d} must be positive")));
        }
        if let Some(b) = self.betas.iter().find(|b| !(0.0..1.0).contains(*b)) {
            return Err(Error::Config(format!("beta {b} outside [0, 1)")));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = self.algorithms.iter().find(|a| !seen.insert(**a)) {
            return Err(Error::Config(format!("algorithm {dup} listed twice")));
        }
        let mut names = std::collections::HashSet::new();
        if let Some(dup) = self
            .instances
            .iter()
            .map(|s| s.label())
            .find(|l| !names.insert(l.clone()))
        {
            return Err(Error::Config(format!("instance name `{dup}` used twice")));
        }
        Ok(())
    }

    /// Reads a JSON config; relative instance paths are resolved against the
    /// config file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for src in &mut cfg.instances {
            if let Some(file) = &src.file {
                if file.is_relative() {
                    src.file = Some(base.join(file));
                }
            }
        }
        Ok(cfg)
    }

    /// Uncertainty models of the grid, additive ones first.
    pub fn models(&self) -> Vec<WeightModel> {
        self.deltas
            .iter()
            .map(|&delta| WeightModel::UniformAdditive { delta })
            .chain(self.betas.iter().map(|&beta| WeightModel::UniformRelative { beta }))
            .collect()
    }
}

/// One run of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    pub instance: String,
    pub alpha: f64,
    pub uncertainty: String,
    pub algorithm: AlgorithmId,
    pub repetition: usize,
    pub seed: u64,
    pub best_feasible_profit: Option<u64>,
    pub evaluations: u64,
}

impl RawRecord {
    /// Value entering the aggregates; a run without a feasible solution
    /// scores like the empty knapsack.
    pub fn profit_value(&self) -> f64 {
        self.best_feasible_profit.unwrap_or(0) as f64
    }
}

/// An instance that could not be loaded; its cells are skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub instance: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun {
    pub table: ExperimentTable,
    pub records: Vec<RawRecord>,
    pub failures: Vec<CellFailure>,
}

struct Cell {
    instance: String,
    alpha: f64,
    model: WeightModel,
    algorithm: AlgorithmId,
    det: std::sync::Arc<DetInstance>,
}

impl Cell {
    /// Identity used for seeding. Deterministic cells ignore the alpha and
    /// uncertainty coordinates so their results repeat across the grid.
    fn seed_key(&self) -> String {
        if self.algorithm.is_deterministic() {
            format!("{}|{}", self.instance, self.algorithm)
        } else {
            format!(
                "{}|alpha={}|{}|{}",
                self.instance,
                self.alpha,
                self.model.label(),
                self.algorithm
            )
        }
    }

    fn build_instance(&self, gamma: u64) -> Result<CCInstance> {
        if self.algorithm.is_deterministic() {
            CCInstance::deterministic(&self.det, self.alpha)
        } else {
            adapt_instance(&self.det, gamma, self.model.clone(), self.alpha).map(|(inst, _)| inst)
        }
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn records_to_jsonl(records: &[RawRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
        .collect()
}

pub fn parse_records(text: &str) -> Result<Vec<RawRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse(i + 1, e.to_string())))
        .collect()
}

/// Reads every per-cell record file under `dir/raw`, in file-name order.
/// Works on the partial output of an interrupted experiment.
pub fn load_raw_records(dir: &Path) -> Result<Vec<RawRecord>> {
    let cells = dir.join(RAW_CELLS_DIR);
    let mut files: Vec<PathBuf> = fs::read_dir(&cells)
        .map_err(|e| Error::io(&cells, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .collect();
    files.sort();
    let mut records = Vec::new();
    for f in files {
        let text = fs::read_to_string(&f).map_err(|e| Error::io(&f, e))?;
        records.extend(parse_records(&text)?);
    }
    Ok(records)
}

/// Runs the whole grid. When `cfg.output_dir` is set, per-cell raw records,
/// the combined record file and the table CSV are written there.
pub fn run_matrix(cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    cfg.validate()?;
    let out_dir = cfg.output_dir.as_deref();
    if let Some(dir) = out_dir {
        let cells_dir = dir.join(RAW_CELLS_DIR);
        fs::create_dir_all(&cells_dir).map_err(|e| Error::io(&cells_dir, e))?;
    }

    let mut failures = Vec::new();
    let mut cells = Vec::new();
    for src in &cfg.instances {
        let name = src.label();
        let det = match src.load() {
            Ok(det) => std::sync::Arc::new(det),
            Err(e) => {
                failures.push(CellFailure {
                    instance: name,
                    message: e.to_string(),
                });
                continue;
            }
        };
        for model in cfg.models() {
            for &alpha in &cfg.alphas {
                for &algorithm in &cfg.algorithms {
                    if algorithm.method() == BoundMethod::Chernoff
                        && !matches!(model, WeightModel::UniformAdditive { .. })
                    {
                        continue;
                    }
                    cells.push(Cell {
                        instance: name.clone(),
                        alpha,
                        model: model.clone(),
                        algorithm,
                        det: det.clone(),
                    });
                }
            }
        }
    }

    let width = cells.len().to_string().len().max(4);
    let results: Vec<std::result::Result<Vec<RawRecord>, CellFailure>> = cells
        .par_iter()
        .enumerate()
        .map(|(index, cell)| {
            let records = run_cell(cfg, cell).map_err(|e| CellFailure {
                instance: cell.instance.clone(),
                message: e.to_string(),
            })?;
            if let Some(dir) = out_dir {
                let path = dir.join(RAW_CELLS_DIR).join(format!("{index:0width$}.jsonl"));
                write_atomic(&path, &records_to_jsonl(&records)).map_err(|e| CellFailure {
                    instance: cell.instance.clone(),
                    message: e.to_string(),
                })?;
            }
            Ok(records)
        })
        .collect();

    let mut records = Vec::new();
    for r in results {
        match r {
            Ok(mut cell_records) => records.append(&mut cell_records),
            Err(f) => failures.push(f),
        }
    }

    let table = aggregate(&cfg.algorithms, &records)?;
    if let Some(dir) = out_dir {
        write_atomic(&dir.join(RAW_RECORDS_FILE), &records_to_jsonl(&records))?;
        write_atomic(&dir.join(TABLE_FILE), &emit_table(&table))?;
    }
    Ok(ExperimentRun {
        table,
        records,
        failures,
    })
}

fn run_cell(cfg: &ExperimentConfig, cell: &Cell) -> Result<Vec<RawRecord>> {
    let inst = cell.build_instance(cfg.gamma)?;
    let key = cell.seed_key();
    (0..cfg.repetitions)
        .into_par_iter()
        .map(|rep| {
            let seed = derive_seed(cfg.master_seed, &key, rep as u64);
            let run_cfg = RunConfig::new(cell.algorithm.objective(), cell.algorithm.method(), cfg.budget, seed);
            let result = run(&inst, &run_cfg)?;
            Ok(RawRecord {
                instance: cell.instance.clone(),
                alpha: cell.alpha,
                uncertainty: cell.model.label(),
                algorithm: cell.algorithm,
                repetition: rep,
                seed,
                best_feasible_profit: result.best_feasible_profit,
                evaluations: result.evaluations,
            })
        })
        .collect()
}
