//! Instance generators, the algorithm registry and experiment tables.

mod algorithms;
mod experiment;
mod generate;

pub use algorithms::{
    run_algorithm, AlgoParams, AlgoRun, Algorithm, Guarantee, Prepared, Reference,
};
pub use experiment::{
    run_experiment, thread_pool, ExperimentReport, ExperimentSpec, ResultRow, SummaryRow,
};
pub use generate::{generate_instance, GenParams, UflMetric};
