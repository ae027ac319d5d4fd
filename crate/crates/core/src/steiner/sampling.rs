use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::graph::MetricGraph;
use super::tree::mst_steiner_approx;
use crate::cover::{RecourseOutput, RecourseSolver};
use crate::error::{Error, Result};
use crate::model::{CostPolicy, RRSolution, ScenarioSampler, ScenarioSet, StageDecision};

/// Ratio of the in-repo Steiner subroutine.
pub const STEINER_APPROX: f64 = 2.0;

/// `⌈λ/σ⌉`, guarded against round-off just above an integer.
pub fn sample_count(policy: &CostPolicy) -> usize {
    ((policy.lambda() / policy.sigma() - 1e-9).ceil() as usize).max(1)
}

/// `α + 2 + 2(1-σ)/σ` for a subroutine of ratio `alpha`.
pub fn sampling_bound(alpha: f64, sigma: f64) -> f64 {
    alpha + 2.0 + 2.0 * (1.0 - sigma) / sigma
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub samples: usize,
    /// Union of the sampled client sets.
    pub sampled: BTreeSet<usize>,
    /// Reserved edges.
    pub reserved: BTreeSet<usize>,
}

fn check_policy(g: &MetricGraph, policy: &CostPolicy) -> Result<()> {
    if policy.num_items() != g.num_edges() {
        return Err(Error::Instance(format!(
            "{} weights for {} edges",
            policy.num_items(),
            g.num_edges()
        )));
    }
    Ok(())
}

/// First stage of the sampling heuristic: draw `⌈λ/σ⌉` scenarios and
/// reserve a tree spanning their union at ground prices.
pub fn sampling_heuristic<S: ScenarioSampler + ?Sized>(
    g: &MetricGraph,
    policy: &CostPolicy,
    sampler: &S,
    seed: u64,
) -> Result<SamplingPlan> {
    check_policy(g, policy)?;
    let samples = sample_count(policy);
    let sampled: BTreeSet<usize> = sampler
        .draw_many(samples, seed)?
        .into_iter()
        .flatten()
        .collect();
    let reserved = mst_steiner_approx(g, &sampled, |e| policy.weights()[e])?;
    Ok(SamplingPlan {
        samples,
        sampled,
        reserved,
    })
}

/// Second stage: a tree for `realized` with reserved edges at the
/// exercise price and all others at the recourse price.
pub fn sampling_second_stage(
    g: &MetricGraph,
    policy: &CostPolicy,
    reserved: &BTreeSet<usize>,
    realized: &[usize],
) -> Result<StageDecision> {
    let terminals: BTreeSet<usize> = realized.iter().copied().collect();
    let price = |e: usize| {
        if reserved.contains(&e) {
            policy.exercise_price(e)
        } else {
            policy.recourse_price(e)
        }
    };
    let chosen = mst_steiner_approx(g, &terminals, price)?;
    let (exercised, recoursed) = chosen.into_iter().partition(|e| reserved.contains(e));
    Ok(StageDecision {
        exercised,
        recoursed,
    })
}

/// The sampling heuristic with its second stage applied to every scenario
/// of an explicit distribution.
pub fn sampling_solution(
    g: &MetricGraph,
    policy: &CostPolicy,
    scen: &ScenarioSet,
    seed: u64,
) -> Result<RRSolution> {
    let plan = sampling_heuristic(g, policy, scen, seed)?;
    let per_scenario = scen
        .iter()
        .map(|s| sampling_second_stage(g, policy, &plan.reserved, &s.clients))
        .collect::<Result<_>>()?;
    Ok(RRSolution {
        reserved: plan.reserved,
        per_scenario,
    })
}

/// Boosted sampling for the two-stage Steiner tree without reservations:
/// `⌈λ⌉` sampled scenarios are connected at ground prices; each realized
/// scenario is completed with first-stage edges free and the rest at
/// `λ w`. The guarantee with the MST subroutine is 4 in expectation.
#[derive(Clone, Copy, Debug)]
pub struct BoostedSamplingSolver<'a> {
    pub graph: &'a MetricGraph,
    pub seed: u64,
}

impl RecourseSolver for BoostedSamplingSolver<'_> {
    fn beta(&self) -> f64 {
        2.0 * STEINER_APPROX
    }

    fn solve_recourse(&self, policy: &CostPolicy, scen: &ScenarioSet) -> Result<RecourseOutput> {
        let g = self.graph;
        check_policy(g, policy)?;
        let m = ((policy.lambda() - 1e-9).ceil() as usize).max(1);
        let first_stage = if scen.is_empty() {
            BTreeSet::new()
        } else {
            let sampled: BTreeSet<usize> = scen
                .draw_many(m, self.seed)?
                .into_iter()
                .flatten()
                .collect();
            mst_steiner_approx(g, &sampled, |e| policy.weights()[e])?
        };
        let second_stage = scen
            .iter()
            .map(|s| {
                let terms = s.clients.iter().copied().collect();
                let price = |e: usize| {
                    if first_stage.contains(&e) {
                        0.0
                    } else {
                        policy.recourse_price(e)
                    }
                };
                Ok(mst_steiner_approx(g, &terms, price)?
                    .difference(&first_stage)
                    .copied()
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(RecourseOutput {
            first_stage,
            second_stage,
        })
    }
}

/// Feasibility of a Steiner solution: each scenario's terminals reach the root.
pub fn check_steiner(
    sol: &RRSolution,
    g: &MetricGraph,
    scen: &ScenarioSet,
) -> crate::model::FeasibilityReport {
    crate::model::check_feasible(sol, scen, |_, s, bought| {
        g.connects(&s.clients, bought.iter().copied())
    })
}
