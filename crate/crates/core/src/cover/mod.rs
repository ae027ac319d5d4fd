//! Stochastic set cover and vertex cover with reservation and recourse.

mod double;
mod fractional;
mod instance;
mod preprocess;
mod reduction;
mod srinivasan;
mod threshold;

use std::collections::BTreeSet;

pub use double::{double_randomized_round, round_cap, DoubleRoundStats};
pub use fractional::{greedy_cover, FractionalCoverSolution};
pub use instance::{CoverInstance, CoverKind};
pub use preprocess::{preprocess_half, HalfMassReport};
pub use reduction::{
    buy_all_reserved_reduction, CoverRecourseSolver, RecourseOutput, RecourseSolver,
};
pub use srinivasan::{
    default_psi, scale_factor, srinivasan_round_set_cover, srinivasan_round_vertex_cover,
    SrinivasanStats,
};
pub use threshold::{threshold_round_vertex_cover, THRESHOLD};

use crate::model::{check_feasible, FeasibilityReport, RRSolution, ScenarioSet};

/// Feasibility of a cover solution: every demanded element is covered by `F1 ∪ F2`.
pub fn check_cover(
    sol: &RRSolution,
    inst: &CoverInstance,
    scen: &ScenarioSet,
) -> FeasibilityReport {
    check_feasible(sol, scen, |_, s, bought: &BTreeSet<usize>| {
        inst.covers(&s.clients, bought)
    })
}
