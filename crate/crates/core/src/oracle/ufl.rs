use std::collections::BTreeSet;

use super::{mask_items, subset_sums, OracleResult, MAX_ITEMS, MAX_SCENARIOS};
use crate::error::{Error, Result};
use crate::model::{RRSolution, ScenarioSet, StageDecision};
use crate::ufl::UflInstance;

/// Upper limit on `4^facilities * scenarios` work units.
const WORK_CAP: u64 = 1 << 28;

/// Exact optimum for facility location by enumerating the reservation and
/// every scenario's open set; clients connect to the nearest open facility.
#[derive(Clone, Debug)]
pub struct UflOracle {
    sigma: f64,
    probabilities: Vec<f64>,
    ground: Vec<f64>,
    /// per scenario: `f^k` subset sums
    scenario_sums: Vec<Vec<f64>>,
    /// per scenario: connection cost of each open set
    connection: Vec<Vec<f64>>,
}

impl UflOracle {
    pub fn new(inst: &UflInstance, scen: &ScenarioSet) -> Result<Self> {
        inst.check_scenarios(scen)?;
        let nf = inst.num_facilities();
        if nf > MAX_ITEMS {
            return Err(Error::OracleCap(format!(
                "{nf} facilities exceed the cap of {MAX_ITEMS}"
            )));
        }
        if scen.len() > MAX_SCENARIOS {
            return Err(Error::OracleCap(format!(
                "{} scenarios exceed the cap of {MAX_SCENARIOS}",
                scen.len()
            )));
        }
        let work = (1u64 << (2 * nf)).saturating_mul(scen.len().max(1) as u64);
        if work > WORK_CAP {
            return Err(Error::OracleCap(format!(
                "{nf} facilities and {} scenarios are too many",
                scen.len()
            )));
        }
        let full = 1usize << nf;
        let connection = scen
            .iter()
            .map(|s| {
                (0..full)
                    .map(|o| {
                        s.clients
                            .iter()
                            .map(|&j| {
                                mask_items(o as u32)
                                    .map(|i| inst.dist(i, j))
                                    .fold(f64::INFINITY, f64::min)
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            sigma: inst.sigma(),
            probabilities: scen.iter().map(|s| s.probability).collect(),
            ground: subset_sums(inst.ground_costs()),
            scenario_sums: (0..scen.len())
                .map(|k| {
                    subset_sums(
                        &(0..nf)
                            .map(|i| inst.scenario_cost(i, k))
                            .collect::<Vec<_>>(),
                    )
                })
                .collect(),
            connection,
        })
    }

    fn best_response(&self, f0: u32, k: usize) -> (f64, u32) {
        let mut best = (f64::INFINITY, 0);
        for o in 0..self.ground.len() as u32 {
            let c = (1.0 - self.sigma) * self.ground[(o & f0) as usize]
                + self.scenario_sums[k][(o & !f0) as usize]
                + self.connection[k][o as usize];
            if c < best.0 {
                best = (c, o);
            }
        }
        best
    }

    pub fn first_stage_value(&self, f0: u32) -> f64 {
        self.sigma * self.ground[f0 as usize]
            + (0..self.probabilities.len())
                .map(|k| self.probabilities[k] * self.best_response(f0, k).0)
                .sum::<f64>()
    }

    pub fn solve(&self) -> OracleResult {
        let mut best = (f64::INFINITY, 0u32);
        let mut nodes = 0;
        for f0 in 0..self.ground.len() as u32 {
            if self.sigma * self.ground[f0 as usize] >= best.0 {
                continue;
            }
            nodes += 1;
            let v = self.first_stage_value(f0);
            if v < best.0 {
                best = (v, f0);
            }
        }
        let (cost, f0) = best;
        let reserved: BTreeSet<usize> = mask_items(f0).collect();
        let per_scenario = (0..self.probabilities.len())
            .map(|k| {
                let (_, o) = self.best_response(f0, k);
                StageDecision {
                    exercised: mask_items(o & f0).collect(),
                    recoursed: mask_items(o & !f0).collect(),
                }
            })
            .collect();
        OracleResult {
            optimal_cost: cost,
            optimal_solution: RRSolution {
                reserved,
                per_scenario,
            },
            nodes_explored: nodes,
        }
    }
}
