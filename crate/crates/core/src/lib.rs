#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

//! Two-stage stochastic covering, facility location and Steiner tree with
//! reservations: items can be reserved up front at a fraction of their
//! cost, exercised later for the remainder, or bought outright at an
//! inflated recourse price.

pub mod bench;
pub mod cover;
pub mod error;
pub mod instance;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod saa;
pub mod scalar;
pub mod steiner;
pub mod ufl;

pub use error::{Error, Result};
pub use scalar::{Scalar, Weight};

pub type LinearProgramF64 = lp::LinearProgram<f64>;
pub type LinearProgramF32 = lp::LinearProgram<f32>;
pub type CostPolicyF64 = model::CostPolicy<f64>;
pub type CostPolicyF32 = model::CostPolicy<f32>;
pub type MetricGraphF64 = steiner::MetricGraph<f64>;
pub type MetricGraphExact = steiner::MetricGraph<num_rational::Ratio<i64>>;
pub type CostShareLedgerF64 = steiner::CostShareLedger<f64>;
pub type CostShareLedgerExact = steiner::CostShareLedger<num_rational::Ratio<i64>>;
pub type ObjectiveBreakdownF64 = model::ObjectiveBreakdown<f64>;
pub type ObjectiveBreakdownF32 = model::ObjectiveBreakdown<f32>;
