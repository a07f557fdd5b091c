//! Exact solver for the deterministic 0/1 knapsack.

use crate::error::{Error, Result};
use crate::instance::DetInstance;

/// Upper limit on `(B + 1) * n` table updates.
pub const DP_CELL_LIMIT: u64 = 2_000_000_000;

/// Optimal profit by the capacity-indexed dynamic program.
pub fn dp_optimum(det: &DetInstance) -> Result<u64> {
    let capacity = det.capacity();
    let cells = (capacity + 1).checked_mul(det.n() as u64);
    if cells.is_none_or(|c| c > DP_CELL_LIMIT) || usize::try_from(capacity).is_err() {
        return Err(Error::DpBudget {
            capacity,
            items: det.n(),
            limit: DP_CELL_LIMIT,
        });
    }
    let cap = capacity as usize;
    let mut best = vec![0u64; cap + 1];
    for (&p, &w) in det.profits().iter().zip(det.weights()) {
        let w = w as usize;
        if w > cap {
            continue;
        }
        for c in (w..=cap).rev() {
            let with = best[c - w] + p;
            if with > best[c] {
                best[c] = with;
            }
        }
    }
    Ok(best[cap])
}
