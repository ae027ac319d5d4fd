//! Exhaustive solvers for tiny instances, used as ground truth.

mod monotone;
mod ratio;
mod ufl;

use serde::{Deserialize, Serialize};

pub use monotone::{MonotoneOracle, MonotoneProblem};
pub use ratio::{verify_ratio, RatioCheck};
pub use ufl::UflOracle;

use crate::model::RRSolution;

/// Largest item count the oracles enumerate.
pub const MAX_ITEMS: usize = 16;
/// Largest scenario count the oracles enumerate.
pub const MAX_SCENARIOS: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub optimal_cost: f64,
    pub optimal_solution: RRSolution,
    /// First-stage sets whose full evaluation was not pruned.
    pub nodes_explored: u64,
}

pub(crate) fn mask_items(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask >> b & 1 == 1)
}

/// `table[mask] = Σ_{i ∈ mask} w[i]`.
pub(crate) fn subset_sums(w: &[f64]) -> Vec<f64> {
    let mut table = vec![0.0; 1 << w.len()];
    for mask in 1..table.len() {
        let low = mask.trailing_zeros() as usize;
        table[mask] = table[mask & (mask - 1)] + w[low];
    }
    table
}
