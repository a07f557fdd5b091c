use serde::{Deserialize, Serialize};

use super::{AlgorithmId, RawRecord};
use crate::error::{Error, Result};
use crate::stats::{kruskal_wallis, pairwise_posthoc, PairOutcome, SIGNIFICANCE_LEVEL};

/// Aggregate of one algorithm's runs in one row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub mean: f64,
    /// Sample standard deviation (0 for a single run).
    pub std_dev: f64,
    pub runs: usize,
    /// `(opponent column, 1-based; outcome)` for every other filled cell.
    pub marks: Vec<(usize, Mark)>,
}

/// Serializable mirror of [`PairOutcome`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mark {
    Better,
    Worse,
    NoDifference,
}

impl From<PairOutcome> for Mark {
    fn from(o: PairOutcome) -> Self {
        match o {
            PairOutcome::Better => Mark::Better,
            PairOutcome::Worse => Mark::Worse,
            PairOutcome::NoDifference => Mark::NoDifference,
        }
    }
}

impl Mark {
    fn symbol(self) -> char {
        match self {
            Mark::Better => '+',
            Mark::Worse => '-',
            Mark::NoDifference => '·',
        }
    }

    fn from_symbol(c: char) -> Option<Self> {
        match c {
            '+' => Some(Mark::Better),
            '-' => Some(Mark::Worse),
            '·' => Some(Mark::NoDifference),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub instance: String,
    pub alpha: f64,
    pub uncertainty: String,
    /// One entry per configured algorithm, `None` where it did not run.
    pub cells: Vec<Option<CellSummary>>,
    /// Kruskal-Wallis p-value across the filled cells.
    pub kruskal_p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTable {
    pub algorithms: Vec<AlgorithmId>,
    pub rows: Vec<TableRow>,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Builds the table from raw records. Rows appear in order of first
/// occurrence; columns follow `algorithms`.
///
/// Pairwise marks are only reported as `+`/`-` when the Kruskal-Wallis test
/// over the row rejects at the significance level.
pub fn aggregate(algorithms: &[AlgorithmId], records: &[RawRecord]) -> Result<ExperimentTable> {
    let mut keys: Vec<(String, f64, String)> = Vec::new();
    let mut values: Vec<Vec<Vec<f64>>> = Vec::new();
    for r in records {
        let col = algorithms
            .iter()
            .position(|&a| a == r.algorithm)
            .ok_or_else(|| Error::Config(format!("record for unlisted algorithm {}", r.algorithm)))?;
        let row = match keys
            .iter()
            .position(|(i, a, u)| *i == r.instance && a.to_bits() == r.alpha.to_bits() && *u == r.uncertainty)
        {
            Some(row) => row,
            None => {
                keys.push((r.instance.clone(), r.alpha, r.uncertainty.clone()));
                values.push(vec![Vec::new(); algorithms.len()]);
                keys.len() - 1
            }
        };
        values[row][col].push(r.profit_value());
    }

    let mut rows = Vec::with_capacity(keys.len());
    for ((instance, alpha, uncertainty), groups) in keys.into_iter().zip(values) {
        let filled: Vec<usize> = (0..groups.len()).filter(|&c| !groups[c].is_empty()).collect();
        let samples: Vec<&[f64]> = filled.iter().map(|&c| groups[c].as_slice()).collect();

        let (kruskal_p, matrix) = if samples.len() >= 2 {
            let kw = kruskal_wallis(&samples)?;
            let matrix = if kw.p_value < SIGNIFICANCE_LEVEL {
                Some(pairwise_posthoc(&samples)?)
            } else {
                None
            };
            (Some(kw.p_value), matrix)
        } else {
            (None, None)
        };

        let mut cells = vec![None; groups.len()];
        for (i, &c) in filled.iter().enumerate() {
            let (mean, std_dev) = mean_std(&groups[c]);
            let marks = filled
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, &other)| {
                    let outcome = matrix.as_ref().map_or(PairOutcome::NoDifference, |m| m[i][j]);
                    (other + 1, Mark::from(outcome))
                })
                .collect();
            cells[c] = Some(CellSummary {
                mean,
                std_dev,
                runs: groups[c].len(),
                marks,
            });
        }
        rows.push(TableRow {
            instance,
            alpha,
            uncertainty,
            cells,
            kruskal_p,
        });
    }
    Ok(ExperimentTable {
        algorithms: algorithms.to_vec(),
        rows,
    })
}

fn format_marks(marks: &[(usize, Mark)]) -> String {
    marks
        .iter()
        .map(|(col, m)| format!("{col}({})", m.symbol()))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_marks(text: &str, line: usize) -> Result<Vec<(usize, Mark)>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| {
            let bad = || Error::parse(line, format!("bad stat mark `{tok}`"));
            let (col, rest) = tok.split_once('(').ok_or_else(bad)?;
            let sym = rest.strip_suffix(')').ok_or_else(bad)?;
            let mut chars = sym.chars();
            let mark = chars.next().and_then(Mark::from_symbol).ok_or_else(bad)?;
            if chars.next().is_some() {
                return Err(bad());
            }
            Ok((col.parse().map_err(|_| bad())?, mark))
        })
        .collect()
}

/// CSV with one row per `(instance, alpha, uncertainty)` and
/// `<alg>_mean,<alg>_std,<alg>_runs,<alg>_stat` per algorithm. Stat marks
/// name opponents by 1-based column, e.g. `2(+),3(-)`.
pub fn emit_table(table: &ExperimentTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["instance".to_string(), "alpha".into(), "uncertainty".into()];
    for a in &table.algorithms {
        for suffix in ["mean", "std", "runs", "stat"] {
            header.push(format!("{a}_{suffix}"));
        }
    }
    header.push("kruskal_p".into());
    w.write_record(&header).expect("in-memory write");

    for row in &table.rows {
        let mut fields = vec![row.instance.clone(), row.alpha.to_string(), row.uncertainty.clone()];
        for cell in &row.cells {
            match cell {
                Some(c) => fields.extend([
                    c.mean.to_string(),
                    c.std_dev.to_string(),
                    c.runs.to_string(),
                    format_marks(&c.marks),
                ]),
                None => fields.extend(std::iter::repeat_n(String::new(), 4)),
            }
        }
        fields.push(row.kruskal_p.map(|p| p.to_string()).unwrap_or_default());
        w.write_record(&fields).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 csv")
}

/// Inverse of [`emit_table`].
pub fn parse_table(text: &str) -> Result<ExperimentTable> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::parse(1, e.to_string()))?.clone();
    let cols = header.len();
    if cols < 4 || (cols - 4) % 4 != 0 {
        return Err(Error::parse(1, "unexpected table header"));
    }
    let algorithms = (0..(cols - 4) / 4)
        .map(|i| {
            let name = &header[3 + 4 * i];
            let alg = name
                .strip_suffix("_mean")
                .ok_or_else(|| Error::parse(1, format!("unexpected column `{name}`")))?;
            alg.parse::<AlgorithmId>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::parse(line, e.to_string()))?;
        let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| Error::parse(line, format!("bad number `{s}`"))) };
        let mut cells = Vec::with_capacity(algorithms.len());
        for a in 0..algorithms.len() {
            let base = 3 + 4 * a;
            if rec[base].is_empty() {
                cells.push(None);
                continue;
            }
            cells.push(Some(CellSummary {
                mean: num(&rec[base])?,
                std_dev: num(&rec[base + 1])?,
                runs: rec[base + 2].parse().map_err(|_| Error::parse(line, "bad run count"))?,
                marks: parse_marks(&rec[base + 3], line)?,
            }));
        }
        let kp = &rec[cols - 1];
        rows.push(TableRow {
            instance: rec[0].to_string(),
            alpha: num(&rec[1])?,
            uncertainty: rec[2].to_string(),
            cells,
            kruskal_p: if kp.is_empty() { None } else { Some(num(kp)?) },
        });
    }
    Ok(ExperimentTable { algorithms, rows })
}
