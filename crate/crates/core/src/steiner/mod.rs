//! Rooted two-stage Steiner tree.

mod graph;
mod lp;
mod sampling;
mod tree;

pub use graph::{MetricGraph, UnionFind};
pub use lp::{cut_cover_instance, cut_lp_bound, MAX_CUT_LP_VERTICES};
pub use sampling::{
    check_steiner, sample_count, sampling_bound, sampling_heuristic, sampling_second_stage,
    sampling_solution, BoostedSamplingSolver, SamplingPlan, STEINER_APPROX,
};
pub use tree::{exact_steiner, mst_steiner_approx, prim_cost_shares, CostShareLedger};
