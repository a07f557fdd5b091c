//! Rank-based tests used to compare algorithm results.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// Mid-ranks (1-based) of `values` and the tie term `sum(t^3 - t)`.
fn mid_ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end share ranks start+1..=end
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        let t = (end - start) as f64;
        ties += t * t * t - t;
        start = end;
    }
    (ranks, ties)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KruskalWallis {
    pub h: f64,
    pub p_value: f64,
}

/// Kruskal-Wallis H test with tie correction and the chi-square approximation.
pub fn kruskal_wallis(groups: &[&[f64]]) -> Result<KruskalWallis> {
    if groups.len() < 2 {
        return Err(Error::Stats("Kruskal-Wallis needs at least two groups".into()));
    }
    if groups.iter().any(|g| g.is_empty()) {
        return Err(Error::Stats("Kruskal-Wallis groups must be nonempty".into()));
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let n = pooled.len() as f64;
    let (ranks, ties) = mid_ranks(&pooled);
    let correction = 1.0 - ties / (n * n * n - n);
    if correction <= 0.0 {
        return Ok(KruskalWallis { h: 0.0, p_value: 1.0 });
    }

    let center = (n + 1.0) / 2.0;
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let size = g.len() as f64;
        let mean_rank = ranks[offset..offset + g.len()].iter().sum::<f64>() / size;
        sum += size * (mean_rank - center).powi(2);
        offset += g.len();
    }
    let h = (12.0 / (n * (n + 1.0)) * sum / correction).max(0.0);
    let dist = ChiSquared::new((groups.len() - 1) as f64).expect("positive degrees of freedom");
    Ok(KruskalWallis {
        h,
        p_value: dist.sf(h).clamp(0.0, 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSum {
    /// Mann-Whitney U of the first sample.
    pub u: f64,
    /// Positive when the first sample tends to be larger.
    pub z: f64,
    pub p_value: f64,
}

/// Two-sided Wilcoxon rank-sum test, normal approximation with tie and
/// continuity corrections.
pub fn rank_sum_test(first: &[f64], second: &[f64]) -> Result<RankSum> {
    if first.is_empty() || second.is_empty() {
        return Err(Error::Stats("rank-sum samples must be nonempty".into()));
    }
    let n1 = first.len() as f64;
    let n2 = second.len() as f64;
    let pooled: Vec<f64> = first.iter().chain(second).copied().collect();
    let (ranks, ties) = mid_ranks(&pooled);
    let r1: f64 = ranks[..first.len()].iter().sum();
    let u = r1 - n1 * (n1 + 1.0) / 2.0;
    let mean = n1 * n2 / 2.0;
    let n = n1 + n2;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if var <= 0.0 {
        return Ok(RankSum {
            u,
            z: 0.0,
            p_value: 1.0,
        });
    }
    let diff = u - mean;
    let corrected = (diff.abs() - 0.5).max(0.0) * diff.signum();
    let z = corrected / var.sqrt();
    let normal = Normal::standard();
    let p_value = (2.0 * normal.sf(z.abs())).clamp(0.0, 1.0);
    Ok(RankSum { u, z, p_value })
}

/// Outcome of comparing a row group against a column group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairOutcome {
    Better,
    Worse,
    NoDifference,
}

impl PairOutcome {
    pub fn reverse(self) -> Self {
        match self {
            PairOutcome::Better => PairOutcome::Worse,
            PairOutcome::Worse => PairOutcome::Better,
            PairOutcome::NoDifference => PairOutcome::NoDifference,
        }
    }

    /// `+`, `-` or `·`.
    pub fn mark(self) -> char {
        match self {
            PairOutcome::Better => '+',
            PairOutcome::Worse => '-',
            PairOutcome::NoDifference => '·',
        }
    }
}

/// Pairwise rank-sum tests with Holm's step-down correction at family level
/// [`SIGNIFICANCE_LEVEL`]. Larger values count as better.
///
/// `result[i][j]` compares group `i` against group `j`; the matrix is
/// antisymmetric and its diagonal is `NoDifference`.
pub fn pairwise_posthoc(groups: &[&[f64]]) -> Result<Vec<Vec<PairOutcome>>> {
    if groups.len() < 2 {
        return Err(Error::Stats("post-hoc comparison needs at least two groups".into()));
    }
    let k = groups.len();
    let mut tests = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            tests.push((i, j, rank_sum_test(groups[i], groups[j])?));
        }
    }
    let m = tests.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| tests[a].2.p_value.total_cmp(&tests[b].2.p_value));

    let mut matrix = vec![vec![PairOutcome::NoDifference; k]; k];
    for (step, &t) in order.iter().enumerate() {
        let (i, j, test) = tests[t];
        if test.p_value > SIGNIFICANCE_LEVEL / (m - step) as f64 {
            break;
        }
        let outcome = if test.z > 0.0 {
            PairOutcome::Better
        } else if test.z < 0.0 {
            PairOutcome::Worse
        } else {
            PairOutcome::NoDifference
        };
        matrix[i][j] = outcome;
        matrix[j][i] = outcome.reverse();
    }
    Ok(matrix)
}
