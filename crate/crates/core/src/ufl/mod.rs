//! Two-stage facility location with reservations.

mod bounds;
mod complete;
mod cs;
mod filter5;
mod fractional;
mod improved;
mod instance;
mod split;
mod swamy;

pub use bounds::{deterministic_bound, five_approx_bound, improved_bound, ImprovedBound, ETA};
pub use complete::{make_complete, CompleteSolution};
pub use cs::{cs_round_deterministic_ufl, prepare_cs, Cluster, CsInput, CsRounding};
pub use filter5::{
    deterministic_ufl_approx, neighborhood, round_5approx, DeterministicRounding, FiveApproxOutput,
    Neighborhood, OpeningCharge,
};
pub use fractional::{demanded_pairs, FractionalUflSolution, Pair};
pub use improved::{
    round_improved, ImprovedCluster, ImprovedOutput, ImprovedParams, MAX_CLUSTER_DRAWS,
};
pub use instance::{evaluate_ufl, DeterministicUfl, UflCost, UflInstance};
pub use split::{classify_pairs, split_assignment, PairClasses, SplitAssignment, DEFAULT_THETA};
pub use swamy::{swamy_filter, FilteredClient};
