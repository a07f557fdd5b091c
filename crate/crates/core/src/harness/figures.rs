use super::ExperimentTable;
use crate::bounds::crossover_variance;

/// Deviation levels of the crossover-curve figure.
pub const FIG1_EPSILONS: [f64; 5] = [0.01, 0.05, 0.1, 0.2, 0.3];

/// Crossover curves `epsilon,E,var_star`; undefined points carry `invalid`.
pub fn emit_fig1(eps_values: &[f64], e_grid: &[f64]) -> String {
    let mut out = String::from("epsilon,E,var_star\n");
    for &eps in eps_values {
        for &e in e_grid {
            match crossover_variance(eps, e) {
                Ok(v) => out.push_str(&format!("{eps},{e},{v}\n")),
                Err(_) => out.push_str(&format!("{eps},{e},invalid\n")),
            }
        }
    }
    out
}

/// Grouped-bar data `algorithm,alpha,mean` for one instance and uncertainty
/// level, one row per filled cell.
pub fn emit_fig2(table: &ExperimentTable, instance: &str, uncertainty: &str) -> String {
    let mut out = String::from("algorithm,alpha,mean\n");
    let rows: Vec<_> = table
        .rows
        .iter()
        .filter(|r| r.instance == instance && r.uncertainty == uncertainty)
        .collect();
    for (col, alg) in table.algorithms.iter().enumerate() {
        for row in &rows {
            if let Some(cell) = &row.cells[col] {
                out.push_str(&format!("{alg},{},{}\n", row.alpha, cell.mean));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{aggregate, AlgorithmId, RawRecord};

    fn curve(csv: &str, eps: f64) -> Vec<(f64, f64)> {
        csv.lines()
            .skip(1)
            .filter_map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                (f[0].parse::<f64>().unwrap() == eps).then(|| (f[1].parse().unwrap(), f[2].parse().unwrap()))
            })
            .collect()
    }

    #[test]
    fn five_curves_with_known_point() {
        let grid: Vec<f64> = (1..=100).map(f64::from).collect();
        let csv = emit_fig1(&FIG1_EPSILONS, &grid);
        assert_eq!(csv.lines().count(), 1 + 5 * 100);
        let csv = emit_fig1(&[0.5], &[2.0]);
        let v: f64 = csv.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
        let c = std::f64::consts::E / 3.375;
        assert!((v - c / (1.0 - c)).abs() < 1e-9);
    }

    #[test]
    fn larger_deviation_curves_lie_lower() {
        let grid: Vec<f64> = (1..=100).map(f64::from).collect();
        let csv = emit_fig1(&FIG1_EPSILONS, &grid);
        let curves: Vec<_> = FIG1_EPSILONS.iter().map(|&e| curve(&csv, e)).collect();
        // strict ordering holds from E = 23 on; below that the small-eps
        // curves cross (both approach 2E as E shrinks)
        for idx in 22..100 {
            for pair in curves.windows(2) {
                assert!(pair[1][idx].1 < pair[0][idx].1, "E={}", pair[0][idx].0);
            }
        }
        assert!(curves[4][0].1 > curves[0][0].1);
        for c in &curves {
            assert!(c.windows(2).all(|w| (w[1].1 - w[0].1).abs() < 10.0));
        }
    }

    #[test]
    fn degenerate_points_are_kept() {
        let csv = emit_fig1(&[1e-300, 0.1], &[1.0]);
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[1].ends_with(",1,invalid"));
        assert!(!rows[2].ends_with("invalid"));
    }

    #[test]
    fn fig2_cross_product() {
        let algs = [
            AlgorithmId::EaChernoff,
            AlgorithmId::EaCantelli,
            AlgorithmId::GsemoChernoff,
            AlgorithmId::GsemoCantelli,
        ];
        let mut records = Vec::new();
        for (i, alpha) in [0.0001, 0.001, 0.01].into_iter().enumerate() {
            for a in algs {
                records.push(RawRecord {
                    instance: "b1".into(),
                    alpha,
                    uncertainty: "delta=25".into(),
                    algorithm: a,
                    repetition: 0,
                    seed: 0,
                    best_feasible_profit: Some(100 * (i as u64 + 1)),
                    evaluations: 1,
                });
            }
        }
        let table = aggregate(&algs, &records).unwrap();
        let csv = emit_fig2(&table, "b1", "delta=25");
        assert_eq!(csv.lines().count(), 13);
        assert_eq!(csv.lines().nth(1).unwrap(), "ea_chernoff,0.0001,100");
        assert_eq!(emit_fig2(&table, "other", "delta=25"), "algorithm,alpha,mean\n");
    }
}
