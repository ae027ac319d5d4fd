//! Problem-independent data model for the recourse-and-revocation objective.
//!
//! An item is reserved in the first stage at `sigma * w`, exercised in the
//! second stage at `(1 - sigma) * w`, or bought outright on recourse at
//! `lambda * w`.

mod montecarlo;
mod objective;
mod policy;
mod scenario;
mod solution;

pub use montecarlo::{monte_carlo, monte_carlo_cost, MonteCarloEstimate};
pub use objective::{evaluate_objective, ObjectiveBreakdown};
pub use policy::CostPolicy;
pub use scenario::{seeded, BlackBox, Scenario, ScenarioSampler, ScenarioSet, SeededRng};
pub use solution::{check_feasible, FeasibilityReport, RRSolution, StageDecision, Violation};
