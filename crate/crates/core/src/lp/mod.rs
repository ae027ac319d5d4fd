//! Dense linear programs, a two-phase primal simplex with dual recovery,
//! and builders for the stochastic covering and facility-location LPs.

mod builders;
mod program;
mod simplex;
mod tag;

pub use builders::{
    build_cover_lp, build_deterministic_ufl_lp, build_ufl_lp, CoverLpLayout,
    DeterministicUflLayout, UflLpLayout,
};
pub use program::{Constraint, LinearProgram, Sense};
pub use simplex::{
    complementary_slackness_gap, solve_lp, solve_optimal, DualSolution, LpSolution, LpStatus,
};
pub use tag::VarTag;
