use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::fractional::{demanded_pairs, FractionalUflSolution, Pair};
use super::instance::{DeterministicUfl, UflInstance};
use crate::error::{Error, Result};
use crate::model::{RRSolution, ScenarioSet, StageDecision};

const EPS: f64 = 1e-12;

/// Fractional service cost and the radius holding an `alpha` share of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighborhood {
    pub c_star: f64,
    pub c_alpha: f64,
    /// Facilities with positive assignment within `c_alpha`, ascending id.
    pub near: Vec<usize>,
}

/// Neighborhood of one client given its assignment column `x[i]` and distances `dist[i]`.
pub fn neighborhood(x: &[f64], dist: &[f64], alpha: f64) -> Result<Neighborhood> {
    let c_star = x.iter().zip(dist).map(|(x, c)| x * c).sum();
    let mut order: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0.0).collect();
    order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
    let mut mass = 0.0;
    for &i in &order {
        mass += x[i];
        if mass >= alpha - EPS {
            let c_alpha = dist[i];
            let mut near: Vec<usize> = order
                .iter()
                .copied()
                .filter(|&f| dist[f] <= c_alpha)
                .collect();
            near.sort_unstable();
            return Ok(Neighborhood {
                c_star,
                c_alpha,
                near,
            });
        }
    }
    Err(Error::Structure(format!(
        "assignment mass {mass} below {alpha}"
    )))
}

fn intersects(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn cheapest(candidates: impl Iterator<Item = usize>, cost: impl Fn(usize) -> f64) -> Option<usize> {
    candidates.fold(None, |best, i| match best {
        Some(b) if cost(b) <= cost(i) => Some(b),
        _ => Some(i),
    })
}

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!(
            "alpha = {alpha} must lie in (0,1)"
        )));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Parameter(format!("beta = {beta} must lie in (0,1)")));
    }
    Ok(())
}

/// One facility opening and the filtered mass paying for it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpeningCharge {
    pub pair: Pair,
    pub facility: usize,
    /// Opened as a first-stage facility (otherwise as recourse in `pair.scenario`).
    pub first_stage: bool,
    /// `f0` or `fk` of the opened facility.
    pub cost: f64,
    /// `Σ_{S0} ȳk f0 / β` or `Σ_{Sk} z̄ fk / (1 - β)`.
    pub budget: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiveApproxOutput {
    pub solution: RRSolution,
    /// Per scenario, client to its nearest open facility.
    pub assignment: Vec<BTreeMap<usize, usize>>,
    pub neighborhoods: BTreeMap<Pair, Neighborhood>,
    /// Facility that served each pair during clustering.
    pub designated: BTreeMap<Pair, usize>,
    pub charges: Vec<OpeningCharge>,
}

impl FiveApproxOutput {
    /// Largest `c_ij / c*` over assignments, with `0/0 = 0`.
    pub fn worst_distance_ratio(&self, inst: &UflInstance) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, a) in self.assignment.iter().enumerate() {
            for (&j, &i) in a {
                let n = &self.neighborhoods[&Pair {
                    scenario: k,
                    client: j,
                }];
                let d = inst.dist(i, j);
                worst = worst.max(if d == 0.0 { 0.0 } else { d / n.c_star });
            }
        }
        worst
    }
}

/// Deterministic filtering rounding for the two-stage problem.
///
/// Each demanded pair keeps its facilities within radius `c_alpha` and
/// scales values by `1/alpha`. Pairs are handled by increasing `c*`
/// (ties by scenario, then client). If the scaled exercise mass
/// `Σ_{S0} ȳk` reaches `beta`, the cheapest-`f0` facility of `S0` is
/// reserved and serves every open pair, in any scenario, whose
/// neighborhood meets this one; otherwise the cheapest-`fk` facility of
/// `Sk` is bought as recourse for the same scenario's overlapping pairs.
/// A reserved facility is exercised only in scenarios where it serves some
/// pair. Clients finally connect to the nearest open facility, which is
/// within `3 c* / (1 - alpha)`.
pub fn round_5approx(
    sol: &FractionalUflSolution,
    inst: &UflInstance,
    scen: &ScenarioSet,
    alpha: f64,
    beta: f64,
) -> Result<FiveApproxOutput> {
    check_params(alpha, beta)?;
    inst.check_scenarios(scen)?;
    sol.check(inst, scen)?;
    let nf = inst.num_facilities();
    let pairs = demanded_pairs(scen);
    let mut neighborhoods = BTreeMap::new();
    for &p in &pairs {
        let x: Vec<f64> = (0..nf).map(|i| sol.x[p.scenario][i][p.client]).collect();
        let d: Vec<f64> = (0..nf).map(|i| inst.dist(i, p.client)).collect();
        neighborhoods.insert(p, neighborhood(&x, &d, alpha)?);
    }
    let bar = |v: f64| (v / alpha).min(1.0);
    let mut order = pairs.clone();
    order.sort_by(|a, b| {
        neighborhoods[a]
            .c_star
            .total_cmp(&neighborhoods[b].c_star)
            .then(a.cmp(b))
    });

    let mut designated: BTreeMap<Pair, usize> = BTreeMap::new();
    let mut charges = Vec::new();
    let mut reserved = BTreeSet::new();
    let mut recourse = vec![BTreeSet::new(); scen.len()];
    for p in order {
        if designated.contains_key(&p) {
            continue;
        }
        let k = p.scenario;
        let near = &neighborhoods[&p].near;
        let s0: Vec<usize> = near
            .iter()
            .copied()
            .filter(|&i| sol.yk[k][i] > 0.0)
            .collect();
        let sk: Vec<usize> = near
            .iter()
            .copied()
            .filter(|&i| sol.zk[k][i] > 0.0)
            .collect();
        let mass0: f64 = s0.iter().map(|&i| bar(sol.yk[k][i])).sum();
        let first_stage = (mass0 >= beta - EPS && !s0.is_empty()) || sk.is_empty();
        let (facility, charge) = if first_stage {
            let i = cheapest(s0.iter().copied(), |i| inst.ground_cost(i))
                .ok_or_else(|| Error::Structure(format!("pair {p:?} has an empty neighborhood")))?;
            let budget = s0
                .iter()
                .map(|&f| bar(sol.yk[k][f]) * inst.ground_cost(f))
                .sum::<f64>()
                / beta;
            reserved.insert(i);
            (
                i,
                OpeningCharge {
                    pair: p,
                    facility: i,
                    first_stage,
                    cost: inst.ground_cost(i),
                    budget,
                },
            )
        } else {
            let i = cheapest(sk.iter().copied(), |i| inst.scenario_cost(i, k))
                .expect("checked nonempty");
            let budget = sk
                .iter()
                .map(|&f| bar(sol.zk[k][f]) * inst.scenario_cost(f, k))
                .sum::<f64>()
                / (1.0 - beta);
            recourse[k].insert(i);
            (
                i,
                OpeningCharge {
                    pair: p,
                    facility: i,
                    first_stage,
                    cost: inst.scenario_cost(i, k),
                    budget,
                },
            )
        };
        charges.push(charge);
        for &q in &pairs {
            if designated.contains_key(&q) || (!first_stage && q.scenario != k) {
                continue;
            }
            if intersects(near, &neighborhoods[&q].near) {
                designated.insert(q, facility);
            }
        }
    }

    let mut per_scenario: Vec<StageDecision> = vec![StageDecision::default(); scen.len()];
    for (q, &i) in &designated {
        if reserved.contains(&i) {
            per_scenario[q.scenario].exercised.insert(i);
        }
    }
    for (k, d) in per_scenario.iter_mut().enumerate() {
        for &i in &recourse[k] {
            if reserved.contains(&i) {
                d.exercised.insert(i);
            } else {
                d.recoursed.insert(i);
            }
        }
    }
    let assignment = nearest_assignment(inst, scen, &per_scenario)?;
    Ok(FiveApproxOutput {
        solution: RRSolution {
            reserved,
            per_scenario,
        },
        assignment,
        neighborhoods,
        designated,
        charges,
    })
}

pub(crate) fn nearest_assignment(
    inst: &UflInstance,
    scen: &ScenarioSet,
    decisions: &[StageDecision],
) -> Result<Vec<BTreeMap<usize, usize>>> {
    scen.iter()
        .zip(decisions)
        .enumerate()
        .map(|(k, (s, d))| {
            let open = d.bought();
            s.clients
                .iter()
                .map(|&j| {
                    inst.nearest(j, &open).map(|(i, _)| (j, i)).ok_or_else(|| {
                        Error::Infeasible(format!("client {j} unserved in scenario {k}"))
                    })
                })
                .collect()
        })
        .collect()
}

/// Integral single-stage solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterministicRounding {
    pub open: BTreeSet<usize>,
    /// Nearest open facility per client with positive demand.
    pub assignment: BTreeMap<usize, usize>,
    pub cost: f64,
}

/// Single-stage filtering rounding with ratio `max(1/α, 3/(1-α))`.
///
/// `y[i]` and `x[i][j]` form a fractional solution in which every client
/// with positive demand has `Σ_i x_ij >= 1` and `x <= y`.
pub fn deterministic_ufl_approx(
    inst: &DeterministicUfl,
    y: &[f64],
    x: &[Vec<f64>],
    alpha: f64,
) -> Result<DeterministicRounding> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!(
            "alpha = {alpha} must lie in (0,1)"
        )));
    }
    let (nf, nc) = (inst.num_facilities(), inst.num_clients());
    if y.len() != nf || x.len() != nf || x.iter().any(|r| r.len() != nc) {
        return Err(Error::Structure(
            "fractional solution shape mismatch".into(),
        ));
    }
    let clients: Vec<usize> = (0..nc).filter(|&j| inst.demand[j] > 0.0).collect();
    let mut hoods = BTreeMap::new();
    for &j in &clients {
        let col: Vec<f64> = (0..nf).map(|i| x[i][j]).collect();
        let d: Vec<f64> = (0..nf).map(|i| inst.dist[i][j]).collect();
        if col.iter().sum::<f64>() < 1.0 - 1e-7 {
            return Err(Error::Structure(format!("client {j} is under-served")));
        }
        hoods.insert(j, neighborhood(&col, &d, alpha)?);
    }
    let mut order = clients.clone();
    order.sort_by(|&a, &b| {
        hoods[&a]
            .c_star
            .total_cmp(&hoods[&b].c_star)
            .then(a.cmp(&b))
    });
    let mut served = BTreeSet::new();
    let mut open = BTreeSet::new();
    for j in order {
        if served.contains(&j) {
            continue;
        }
        let near = &hoods[&j].near;
        let i = cheapest(near.iter().copied(), |i| inst.opening_cost[i])
            .expect("nonempty neighborhood");
        open.insert(i);
        for &q in &clients {
            if !served.contains(&q) && intersects(near, &hoods[&q].near) {
                served.insert(q);
            }
        }
    }
    let mut assignment = BTreeMap::new();
    for &j in &clients {
        let i = open
            .iter()
            .copied()
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if inst.dist[b][j] <= inst.dist[i][j] => Some(b),
                _ => Some(i),
            })
            .expect("at least one facility is open when a client has demand");
        assignment.insert(j, i);
    }
    let cost = inst
        .cost_of(&open)
        .expect("every demanded client has an open facility");
    Ok(DeterministicRounding {
        open,
        assignment,
        cost,
    })
}
