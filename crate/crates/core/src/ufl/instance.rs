use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{RRSolution, ScenarioSet};

const METRIC_TOLERANCE: f64 = 1e-9;

/// Two-stage facility location instance.
///
/// Client demands are 0/1 and come from scenario membership: client `j`
/// has demand 1 in scenario `k` iff it is listed in that scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UflInstance {
    sigma: f64,
    /// ground cost `f_i^0`
    ground_cost: Vec<f64>,
    /// `scenario_cost[k][i] = f_i^k`
    scenario_cost: Vec<Vec<f64>>,
    /// `dist[i][j] = c_ij`
    dist: Vec<Vec<f64>>,
}

impl UflInstance {
    pub fn new(
        sigma: f64,
        ground_cost: Vec<f64>,
        scenario_cost: Vec<Vec<f64>>,
        dist: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::Policy(format!("sigma = {sigma} must lie in (0,1)")));
        }
        let nf = ground_cost.len();
        if dist.len() != nf {
            return Err(Error::Instance(format!(
                "{} distance rows for {nf} facilities",
                dist.len()
            )));
        }
        let nc = dist.first().map_or(0, Vec::len);
        if dist.iter().any(|r| r.len() != nc) {
            return Err(Error::Instance("ragged distance matrix".into()));
        }
        if ground_cost
            .iter()
            .chain(dist.iter().flatten())
            .any(|v| !(*v >= 0.0) || !v.is_finite())
        {
            return Err(Error::Instance(
                "costs and distances must be finite and nonnegative".into(),
            ));
        }
        for (k, row) in scenario_cost.iter().enumerate() {
            if row.len() != nf {
                return Err(Error::Instance(format!(
                    "scenario {k} prices {} facilities, expected {nf}",
                    row.len()
                )));
            }
            for (i, (&fk, &f0)) in row.iter().zip(&ground_cost).enumerate() {
                if !(fk >= f0) || !fk.is_finite() {
                    return Err(Error::Instance(format!(
                        "scenario cost {fk} of facility {i} in scenario {k} is below its ground cost {f0}"
                    )));
                }
            }
        }
        for j in 0..nc {
            for jj in 0..nc {
                for i in 0..nf {
                    for ii in 0..nf {
                        if dist[i][j] > dist[i][jj] + dist[ii][jj] + dist[ii][j] + METRIC_TOLERANCE
                        {
                            return Err(Error::Instance(format!(
                                "distances violate the triangle inequality at facility {i}, client {j}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self {
            sigma,
            ground_cost,
            scenario_cost,
            dist,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn num_facilities(&self) -> usize {
        self.ground_cost.len()
    }

    pub fn num_clients(&self) -> usize {
        self.dist.first().map_or(0, Vec::len)
    }

    pub fn num_scenarios(&self) -> usize {
        self.scenario_cost.len()
    }

    pub fn ground_cost(&self, i: usize) -> f64 {
        self.ground_cost[i]
    }

    pub fn ground_costs(&self) -> &[f64] {
        &self.ground_cost
    }

    pub fn scenario_cost(&self, i: usize, k: usize) -> f64 {
        self.scenario_cost[k][i]
    }

    pub fn scenario_costs(&self) -> &[Vec<f64>] {
        &self.scenario_cost
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn distances(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// `max_i f_i^k / f_i^0` over all scenarios; 1 when no scenario prices exist.
    pub fn max_recourse_ratio(&self) -> f64 {
        self.scenario_cost
            .iter()
            .flat_map(|row| row.iter().zip(&self.ground_cost))
            .filter(|(_, &f0)| f0 > 0.0)
            .map(|(&fk, &f0)| fk / f0)
            .fold(1.0, f64::max)
    }

    /// Checks that `scen` matches the instance's scenario prices and client ids.
    pub fn check_scenarios(&self, scen: &ScenarioSet) -> Result<()> {
        if scen.len() != self.num_scenarios() {
            return Err(Error::Instance(format!(
                "{} scenarios but {} scenario cost rows",
                scen.len(),
                self.num_scenarios()
            )));
        }
        if let Some(j) = scen.max_client().filter(|&j| j >= self.num_clients()) {
            return Err(Error::Instance(format!("unknown client {j}")));
        }
        if !scen.is_empty()
            && self.num_facilities() == 0
            && scen.iter().any(|s| !s.clients.is_empty())
        {
            return Err(Error::Instance(
                "clients with demand but no facilities".into(),
            ));
        }
        Ok(())
    }

    /// Nearest facility in `open` to client `j`, lowest id on ties.
    pub fn nearest(&self, j: usize, open: &BTreeSet<usize>) -> Option<(usize, f64)> {
        open.iter()
            .map(|&i| (i, self.dist[i][j]))
            .fold(None, |best, (i, d)| match best {
                Some((_, bd)) if bd <= d => best,
                _ => Some((i, d)),
            })
    }
}

/// Cost components of an integral facility-location solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UflCost {
    pub first_stage: f64,
    pub expected_exercise: f64,
    pub expected_recourse: f64,
    pub expected_connection: f64,
    pub total: f64,
}

/// Evaluates with every demanded client connected to its nearest open facility.
pub fn evaluate_ufl(sol: &RRSolution, inst: &UflInstance, scen: &ScenarioSet) -> Result<UflCost> {
    inst.check_scenarios(scen)?;
    if sol.per_scenario.len() != scen.len() {
        return Err(Error::Structure(
            "solution and distribution disagree on scenario count".into(),
        ));
    }
    if !sol.structural_violations().is_empty() {
        return Err(Error::Structure(format!(
            "{:?}",
            sol.structural_violations()
        )));
    }
    let nf = inst.num_facilities();
    let check = |items: &BTreeSet<usize>| match items.iter().find(|&&i| i >= nf) {
        Some(i) => Err(Error::Structure(format!("unknown facility {i}"))),
        None => Ok(()),
    };
    check(&sol.reserved)?;
    let sigma = inst.sigma();
    let first_stage = sigma
        * sol
            .reserved
            .iter()
            .map(|&i| inst.ground_cost(i))
            .sum::<f64>();
    let (mut ex, mut re, mut conn) = (0.0, 0.0, 0.0);
    for (k, (d, s)) in sol.per_scenario.iter().zip(scen.iter()).enumerate() {
        check(&d.exercised)?;
        check(&d.recoursed)?;
        let p = s.probability;
        ex += p
            * (1.0 - sigma)
            * d.exercised
                .iter()
                .map(|&i| inst.ground_cost(i))
                .sum::<f64>();
        re += p * d
            .recoursed
            .iter()
            .map(|&i| inst.scenario_cost(i, k))
            .sum::<f64>();
        let open = d.bought();
        let mut c = 0.0;
        for &j in &s.clients {
            let (_, dj) = inst.nearest(j, &open).ok_or_else(|| {
                Error::Infeasible(format!("client {j} has no open facility in scenario {k}"))
            })?;
            c += dj;
        }
        conn += p * c;
    }
    Ok(UflCost {
        first_stage,
        expected_exercise: ex,
        expected_recourse: re,
        expected_connection: conn,
        total: first_stage + ex + re + conn,
    })
}

/// Single-stage facility location: opening costs, distances, demands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterministicUfl {
    pub opening_cost: Vec<f64>,
    /// `dist[i][j]`
    pub dist: Vec<Vec<f64>>,
    pub demand: Vec<f64>,
}

impl DeterministicUfl {
    pub fn num_facilities(&self) -> usize {
        self.opening_cost.len()
    }

    pub fn num_clients(&self) -> usize {
        self.demand.len()
    }

    pub fn cost_of(&self, open: &BTreeSet<usize>) -> Option<f64> {
        let mut total: f64 = open.iter().map(|&i| self.opening_cost[i]).sum();
        for j in 0..self.num_clients() {
            if self.demand[j] > 0.0 {
                let d = open
                    .iter()
                    .map(|&i| self.dist[i][j])
                    .fold(f64::INFINITY, f64::min);
                if !d.is_finite() {
                    return None;
                }
                total += self.demand[j] * d;
            }
        }
        Some(total)
    }
}
