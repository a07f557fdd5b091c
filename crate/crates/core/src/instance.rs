//! Knapsack instances, weight models and solutions.
//!
//! A [`DetInstance`] is the classic integer 0/1 knapsack. A [`CCInstance`]
//! replaces each weight by an independent random variable described by a
//! [`WeightModel`] and adds a confidence level `alpha` for the chance
//! constraint `Pr(W(x) >= B) <= alpha`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic 0/1 knapsack instance with integer data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetInstance {
    profits: Vec<u64>,
    weights: Vec<u64>,
    capacity: u64,
}

impl DetInstance {
    pub fn new(profits: Vec<u64>, weights: Vec<u64>, capacity: u64) -> Result<Self> {
        if profits.is_empty() {
            return Err(Error::InvalidInstance("instance needs at least one item".into()));
        }
        if profits.len() != weights.len() {
            return Err(Error::InvalidInstance(format!(
                "{} profits but {} weights",
                profits.len(),
                weights.len()
            )));
        }
        if let Some(i) = profits.iter().position(|&p| p == 0) {
            return Err(Error::InvalidInstance(format!("profit of item {i} is zero")));
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::InvalidInstance(format!("weight of item {i} is zero")));
        }
        if capacity == 0 {
            return Err(Error::InvalidInstance("capacity must be positive".into()));
        }
        Ok(Self {
            profits,
            weights,
            capacity,
        })
    }

    pub fn n(&self) -> usize {
        self.profits.len()
    }

    pub fn profits(&self) -> &[u64] {
        &self.profits
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Same items with a different capacity.
    pub fn with_capacity(&self, capacity: u64) -> Result<Self> {
        Self::new(self.profits.clone(), self.weights.clone(), capacity)
    }

    /// Parses the canonical text format: `n`, then `n` lines of `p w`, then `B`.
    ///
    /// Integers must be written without sign or leading zeros and tokens are
    /// separated by a single space, so that [`DetInstance::to_text`]
    /// reproduces any accepted file byte for byte. A single trailing newline
    /// is accepted.
    pub fn parse(text: &str) -> Result<Self> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        if body.is_empty() {
            return Err(Error::parse(1, "missing item count header"));
        }
        let lines: Vec<&str> = body.split('\n').collect();

        let header = parse_tokens(lines[0], 1)?;
        let [n] = header[..] else {
            return Err(Error::parse(1, "header must hold exactly one integer"));
        };
        if n == 0 {
            return Err(Error::parse(1, "item count must be positive"));
        }
        let n = n as usize;

        let rest = &lines[1..];
        let found = rest.len().saturating_sub(1);
        if found != n {
            return Err(Error::parse(
                lines.len(),
                format!("expected {n} item lines, found {found}"),
            ));
        }

        let mut profits = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (i, line) in rest[..n].iter().enumerate() {
            let lineno = i + 2;
            let tokens = parse_tokens(line, lineno)?;
            let [p, w] = tokens[..] else {
                return Err(Error::parse(lineno, "item line must hold \"profit weight\""));
            };
            if p == 0 || w == 0 {
                return Err(Error::parse(lineno, "profit and weight must be positive"));
            }
            profits.push(p);
            weights.push(w);
        }

        let cap_line = n + 2;
        let tokens = parse_tokens(rest[n], cap_line)?;
        let [capacity] = tokens[..] else {
            return Err(Error::parse(cap_line, "capacity line must hold exactly one integer"));
        };
        if capacity == 0 {
            return Err(Error::parse(cap_line, "capacity must be positive"));
        }

        Self::new(profits, weights, capacity)
    }

    /// Canonical text form, terminated by a newline.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for (p, w) in self.profits.iter().zip(&self.weights) {
            out.push_str(&format!("{p} {w}\n"));
        }
        out.push_str(&format!("{}\n", self.capacity));
        out
    }
}

fn parse_tokens(line: &str, lineno: usize) -> Result<Vec<u64>> {
    if line.is_empty() {
        return Err(Error::parse(lineno, "empty line"));
    }
    line.split(' ')
        .map(|tok| {
            let v: u64 = tok
                .parse()
                .map_err(|_| Error::parse(lineno, format!("`{tok}` is not a non-negative integer")))?;
            if v.to_string() != tok {
                return Err(Error::parse(lineno, format!("`{tok}` is not in canonical form")));
            }
            Ok(v)
        })
        .collect()
}

/// Distribution of the random item weights around their expected values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WeightModel {
    /// `w_i ~ U[a_i - delta, a_i + delta]`.
    UniformAdditive { delta: f64 },
    /// `w_i ~ U[(1 - beta) a_i, (1 + beta) a_i]`.
    UniformRelative { beta: f64 },
    /// `w_i ~ N(a_i, variances[i])`.
    Normal { variances: Vec<f64> },
    /// `w_i = a_i`.
    Deterministic,
}

impl WeightModel {
    /// Checks the model against the expected weights it will be applied to.
    pub fn validate(&self, expected_weights: &[f64]) -> Result<()> {
        match self {
            WeightModel::UniformAdditive { delta } => {
                if !delta.is_finite() || *delta < 0.0 {
                    return Err(Error::InvalidModel(format!("delta must be >= 0, got {delta}")));
                }
                let min = expected_weights.iter().copied().fold(f64::INFINITY, f64::min);
                if *delta >= min {
                    return Err(Error::InvalidModel(format!(
                        "delta {delta} must be below the smallest expected weight {min}"
                    )));
                }
            }
            WeightModel::UniformRelative { beta } => {
                if !(0.0..1.0).contains(beta) {
                    return Err(Error::InvalidModel(format!("beta must lie in [0, 1), got {beta}")));
                }
            }
            WeightModel::Normal { variances } => {
                if variances.len() != expected_weights.len() {
                    return Err(Error::InvalidModel(format!(
                        "{} variances for {} items",
                        variances.len(),
                        expected_weights.len()
                    )));
                }
                if let Some(i) = variances.iter().position(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::InvalidModel(format!("variance of item {i} is invalid")));
                }
            }
            WeightModel::Deterministic => {}
        }
        Ok(())
    }

    /// Variance of item `i` whose expected weight is `expected`.
    pub fn item_variance(&self, i: usize, expected: f64) -> f64 {
        match self {
            WeightModel::UniformAdditive { delta } => delta * delta / 3.0,
            WeightModel::UniformRelative { beta } => beta * beta * expected * expected / 3.0,
            WeightModel::Normal { variances } => variances[i],
            WeightModel::Deterministic => 0.0,
        }
    }

    /// Short label used in experiment tables, e.g. `delta=25`.
    pub fn label(&self) -> String {
        match self {
            WeightModel::UniformAdditive { delta } => format!("delta={delta}"),
            WeightModel::UniformRelative { beta } => format!("beta={beta}"),
            WeightModel::Normal { .. } => "normal".into(),
            WeightModel::Deterministic => "deterministic".into(),
        }
    }
}

/// Chance-constrained knapsack instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CCInstanceDoc", into = "CCInstanceDoc")]
pub struct CCInstance {
    profits: Vec<u64>,
    expected_weights: Vec<f64>,
    model: WeightModel,
    capacity: f64,
    alpha: f64,
    variances: Vec<f64>,
}

/// On-disk form of [`CCInstance`].
#[derive(Debug, Clone, Serialize, Deserialize)]
struct CCInstanceDoc {
    profits: Vec<u64>,
    expected_weights: Vec<f64>,
    model: WeightModel,
    capacity: f64,
    alpha: f64,
}

impl TryFrom<CCInstanceDoc> for CCInstance {
    type Error = Error;

    fn try_from(doc: CCInstanceDoc) -> Result<Self> {
        CCInstance::new(doc.profits, doc.expected_weights, doc.model, doc.capacity, doc.alpha)
    }
}

impl From<CCInstance> for CCInstanceDoc {
    fn from(inst: CCInstance) -> Self {
        CCInstanceDoc {
            profits: inst.profits,
            expected_weights: inst.expected_weights,
            model: inst.model,
            capacity: inst.capacity,
            alpha: inst.alpha,
        }
    }
}

impl CCInstance {
    pub fn new(
        profits: Vec<u64>,
        expected_weights: Vec<f64>,
        model: WeightModel,
        capacity: f64,
        alpha: f64,
    ) -> Result<Self> {
        if profits.is_empty() {
            return Err(Error::InvalidInstance("instance needs at least one item".into()));
        }
        if profits.len() != expected_weights.len() {
            return Err(Error::InvalidInstance(format!(
                "{} profits but {} expected weights",
                profits.len(),
                expected_weights.len()
            )));
        }
        if let Some(i) = profits.iter().position(|&p| p == 0) {
            return Err(Error::InvalidInstance(format!("profit of item {i} is zero")));
        }
        if let Some(i) = expected_weights.iter().position(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::InvalidInstance(format!(
                "expected weight of item {i} must be positive"
            )));
        }
        if !capacity.is_finite() || capacity <= 0.0 {
            return Err(Error::InvalidInstance(format!(
                "capacity must be positive, got {capacity}"
            )));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidInstance(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        model.validate(&expected_weights)?;
        let variances = expected_weights
            .iter()
            .enumerate()
            .map(|(i, &a)| model.item_variance(i, a))
            .collect();
        Ok(Self {
            profits,
            expected_weights,
            model,
            capacity,
            alpha,
            variances,
        })
    }

    /// Wraps a deterministic instance: `a_i = w_i`, no uncertainty.
    pub fn deterministic(det: &DetInstance, alpha: f64) -> Result<Self> {
        Self::new(
            det.profits().to_vec(),
            det.weights().iter().map(|&w| w as f64).collect(),
            WeightModel::Deterministic,
            det.capacity() as f64,
            alpha,
        )
    }

    pub fn n(&self) -> usize {
        self.profits.len()
    }

    pub fn profits(&self) -> &[u64] {
        &self.profits
    }

    pub fn expected_weights(&self) -> &[f64] {
        &self.expected_weights
    }

    pub fn model(&self) -> &WeightModel {
        &self.model
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Per-item weight variances derived from the model.
    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(
            self.profits.clone(),
            self.expected_weights.clone(),
            self.model.clone(),
            self.capacity,
            alpha,
        )
    }

    pub fn with_model(&self, model: WeightModel) -> Result<Self> {
        Self::new(
            self.profits.clone(),
            self.expected_weights.clone(),
            model,
            self.capacity,
            self.alpha,
        )
    }

    pub fn with_capacity(&self, capacity: f64) -> Result<Self> {
        Self::new(
            self.profits.clone(),
            self.expected_weights.clone(),
            self.model.clone(),
            capacity,
            self.alpha,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }
}

/// Anything with a per-item profit vector.
pub trait ItemProfits {
    fn item_profits(&self) -> &[u64];
}

impl ItemProfits for DetInstance {
    fn item_profits(&self) -> &[u64] {
        &self.profits
    }
}

impl ItemProfits for CCInstance {
    fn item_profits(&self) -> &[u64] {
        &self.profits
    }
}

/// A search point in `{0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution(Vec<bool>);

impl Solution {
    pub fn zeros(n: usize) -> Self {
        Solution(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        Solution(vec![true; n])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Solution(bits)
    }

    /// Bit `i` is `(mask >> i) & 1`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Solution((0..n).map(|i| (mask >> i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn hamming(&self, other: &Solution) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Solution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(1, format!("invalid bit `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Solution)
    }
}

impl Serialize for Solution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Solution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_len(n: usize, x: &Solution) -> Result<()> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: x.len(),
        });
    }
    Ok(())
}

/// Expected weight, weight variance and item count of a solution.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightStats {
    pub expected: f64,
    pub variance: f64,
    pub count: usize,
}

impl Add for WeightStats {
    type Output = WeightStats;

    fn add(self, rhs: WeightStats) -> WeightStats {
        WeightStats {
            expected: self.expected + rhs.expected,
            variance: self.variance + rhs.variance,
            count: self.count + rhs.count,
        }
    }
}

pub fn weight_stats(inst: &CCInstance, x: &Solution) -> Result<WeightStats> {
    check_len(inst.n(), x)?;
    let mut stats = WeightStats::default();
    for i in x.selected() {
        stats.expected += inst.expected_weights[i];
        stats.variance += inst.variances[i];
        stats.count += 1;
    }
    Ok(stats)
}

pub fn profit<I: ItemProfits + ?Sized>(inst: &I, x: &Solution) -> Result<u64> {
    let profits = inst.item_profits();
    check_len(profits.len(), x)?;
    Ok(x.selected().map(|i| profits[i]).sum())
}
