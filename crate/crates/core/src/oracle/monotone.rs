use std::collections::BTreeSet;

use super::{mask_items, subset_sums, OracleResult, MAX_ITEMS, MAX_SCENARIOS};
use crate::cover::CoverInstance;
use crate::error::{Error, Result};
use crate::model::{CostPolicy, RRSolution, ScenarioSet, StageDecision};
use crate::steiner::{MetricGraph, UnionFind};

/// A problem whose feasible item sets are closed upwards.
pub trait MonotoneProblem: Sync {
    fn num_items(&self) -> usize;
    /// Whether the items in `mask` serve all of `clients`.
    fn feasible(&self, clients: &[usize], mask: u32) -> bool;
}

impl MonotoneProblem for CoverInstance {
    fn num_items(&self) -> usize {
        self.num_sets()
    }

    fn feasible(&self, clients: &[usize], mask: u32) -> bool {
        clients
            .iter()
            .all(|&e| self.covering(e).iter().any(|&s| mask >> s & 1 == 1))
    }
}

impl MonotoneProblem for MetricGraph<f64> {
    fn num_items(&self) -> usize {
        self.num_edges()
    }

    fn feasible(&self, clients: &[usize], mask: u32) -> bool {
        let mut uf = UnionFind::new(self.num_vertices());
        for e in mask_items(mask) {
            let (u, v) = self.edges()[e];
            uf.union(u, v);
        }
        let r = uf.find(self.root());
        clients.iter().all(|&t| uf.find(t) == r)
    }
}

/// Exact optimum of the two-stage objective for a monotone problem.
///
/// Each scenario's inclusion-minimal feasible sets are listed once. For a
/// reservation `F0` the best response to scenario `A` buys a minimal set
/// `T`, paying `(1-σ) w(T ∩ F0) + λ w(T \ F0)`. All `F0` inside the union
/// of minimal sets are enumerated in increasing mask order, skipping those
/// whose reservation cost alone reaches the incumbent.
#[derive(Clone, Debug)]
pub struct MonotoneOracle {
    sigma: f64,
    lambda: f64,
    probabilities: Vec<f64>,
    minimal: Vec<Vec<u32>>,
    useful: u32,
    sums: Vec<f64>,
}

impl MonotoneOracle {
    pub fn new<P: MonotoneProblem + ?Sized>(
        problem: &P,
        policy: &CostPolicy,
        scen: &ScenarioSet,
    ) -> Result<Self> {
        let n = problem.num_items();
        if n > MAX_ITEMS {
            return Err(Error::OracleCap(format!(
                "{n} items exceed the cap of {MAX_ITEMS}"
            )));
        }
        if scen.len() > MAX_SCENARIOS {
            return Err(Error::OracleCap(format!(
                "{} scenarios exceed the cap of {MAX_SCENARIOS}",
                scen.len()
            )));
        }
        if policy.num_items() != n {
            return Err(Error::Instance(format!(
                "{} weights for {n} items",
                policy.num_items()
            )));
        }
        let full = (1u32 << n) - 1;
        let mut minimal = Vec::with_capacity(scen.len());
        for (a, s) in scen.iter().enumerate() {
            if !problem.feasible(&s.clients, full) {
                return Err(Error::Infeasible(format!(
                    "scenario {a} cannot be served by all items together"
                )));
            }
            let feasible: Vec<bool> = (0..=full)
                .map(|m| problem.feasible(&s.clients, m))
                .collect();
            let mins: Vec<u32> = (0..=full)
                .filter(|&m| {
                    feasible[m as usize]
                        && mask_items(m).all(|b| !feasible[(m & !(1 << b)) as usize])
                })
                .collect();
            minimal.push(mins);
        }
        let useful = minimal.iter().flatten().fold(0, |acc, &m| acc | m);
        Ok(Self {
            sigma: policy.sigma(),
            lambda: policy.lambda(),
            probabilities: scen.iter().map(|s| s.probability).collect(),
            minimal,
            useful,
            sums: subset_sums(policy.weights()),
        })
    }

    /// Cheapest response to scenario `a` given reservation `f0`, and its cost.
    pub fn best_response(&self, f0: u32, a: usize) -> (f64, u32) {
        let discount = self.lambda - (1.0 - self.sigma);
        let mut best = (f64::INFINITY, 0);
        for &t in &self.minimal[a] {
            let c = self.lambda * self.sums[t as usize] - discount * self.sums[(t & f0) as usize];
            if c < best.0 {
                best = (c, t);
            }
        }
        best
    }

    /// Objective of the best completion of reservation `f0`.
    pub fn first_stage_value(&self, f0: u32) -> f64 {
        let reserve = self.sigma * self.sums[f0 as usize];
        reserve
            + (0..self.minimal.len())
                .map(|a| self.probabilities[a] * self.best_response(f0, a).0)
                .sum::<f64>()
    }

    pub fn solve(&self) -> OracleResult {
        let mut best = (f64::INFINITY, 0u32);
        let mut nodes = 0u64;
        // submasks of `useful` in increasing order
        let mut f0 = 0u32;
        loop {
            if self.sigma * self.sums[f0 as usize] < best.0 {
                nodes += 1;
                let v = self.first_stage_value(f0);
                if v < best.0 {
                    best = (v, f0);
                }
            }
            if f0 == self.useful {
                break;
            }
            f0 = ((f0 | !self.useful).wrapping_add(1)) & self.useful;
        }
        let (cost, f0) = best;
        OracleResult {
            optimal_cost: cost,
            optimal_solution: self.solution_for(f0),
            nodes_explored: nodes,
        }
    }

    /// Reservation `f0` with the best response in every scenario.
    pub fn solution_for(&self, f0: u32) -> RRSolution {
        let reserved: BTreeSet<usize> = mask_items(f0).collect();
        let per_scenario = (0..self.minimal.len())
            .map(|a| {
                let (_, t) = self.best_response(f0, a);
                StageDecision {
                    exercised: mask_items(t & f0).collect(),
                    recoursed: mask_items(t & !f0).collect(),
                }
            })
            .collect();
        RRSolution {
            reserved,
            per_scenario,
        }
    }
}
