use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fractional::{greedy_cover, FractionalCoverSolution};
use super::instance::{CoverInstance, CoverKind};
use crate::error::{Error, Result};
use crate::model::{
    evaluate_objective, seeded, CostPolicy, RRSolution, ScenarioSet, SeededRng, StageDecision,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SrinivasanStats {
    /// Multiplier applied to the LP values.
    pub scale: f64,
    /// Objective of the rounded solution before any repair.
    pub pre_repair_cost: f64,
    /// Whether scenario `k` needed the greedy repair.
    pub repaired: Vec<bool>,
}

impl SrinivasanStats {
    /// `Σ_k p_k [scenario k repaired]`.
    pub fn repair_probability(&self, scen: &ScenarioSet) -> f64 {
        scen.iter()
            .zip(&self.repaired)
            .filter(|(_, &r)| r)
            .map(|(s, _)| s.probability)
            .sum()
    }
}

/// `max(1, ln ln max(n, 3))`.
pub fn default_psi(n: usize) -> f64 {
    (n.max(3) as f64).ln().ln().max(1.0)
}

/// `max(ln n + psi, 1)`.
pub fn scale_factor(n: usize, psi: f64) -> f64 {
    ((n.max(1) as f64).ln() + psi).max(1.0)
}

fn draw(rng: &mut SeededRng, p: f64) -> bool {
    p >= 1.0 || (p > 0.0 && rng.gen::<f64>() < p)
}

struct Scaled {
    x: Vec<f64>,
    y: Vec<Vec<f64>>,
    z: Vec<Vec<f64>>,
}

fn scale(sol: &FractionalCoverSolution, factor: f64) -> Scaled {
    let f = |v: &f64| (factor * v).min(1.0);
    Scaled {
        x: sol.x.iter().map(f).collect(),
        y: sol.y.iter().map(|r| r.iter().map(f).collect()).collect(),
        z: sol.z.iter().map(|r| r.iter().map(f).collect()).collect(),
    }
}

/// Independent reservation with probability `x'` and exercise with `y'/x'`.
fn reserve_and_exercise(
    sc: &Scaled,
    num_scenarios: usize,
    rng: &mut SeededRng,
) -> (BTreeSet<usize>, Vec<StageDecision>) {
    let reserved: BTreeSet<usize> = (0..sc.x.len()).filter(|&s| draw(rng, sc.x[s])).collect();
    let decisions = (0..num_scenarios)
        .map(|a| {
            let exercised = reserved
                .iter()
                .copied()
                .filter(|&s| draw(rng, sc.y[a][s] / sc.x[s]))
                .collect();
            StageDecision {
                exercised,
                recoursed: BTreeSet::new(),
            }
        })
        .collect();
    (reserved, decisions)
}

fn buy(d: &mut StageDecision, reserved: &BTreeSet<usize>, s: usize) {
    if reserved.contains(&s) {
        d.exercised.insert(s);
    } else {
        d.recoursed.insert(s);
    }
}

fn repair_all(
    inst: &CoverInstance,
    policy: &CostPolicy,
    scen: &ScenarioSet,
    sol: &mut RRSolution,
) -> Result<Vec<bool>> {
    let mut repaired = Vec::with_capacity(scen.len());
    for (sc, d) in scen.iter().zip(sol.per_scenario.iter_mut()) {
        let bought = d.bought();
        let missing = inst.uncovered(&sc.clients, &bought);
        repaired.push(!missing.is_empty());
        if missing.is_empty() {
            continue;
        }
        let reserved = &sol.reserved;
        let price = |s: usize| {
            if reserved.contains(&s) {
                policy.exercise_price(s)
            } else {
                policy.recourse_price(s)
            }
        };
        for s in greedy_cover(inst, &missing, &bought, price)? {
            buy(d, reserved, s);
        }
    }
    Ok(repaired)
}

/// Scaled independent rounding for set cover with scale `L = ln n + psi`.
///
/// Values are scaled to `min(L v, 1)`. Sets are reserved with probability
/// `x'`, reserved sets exercised with probability `y'/x'`, and every set is
/// drawn for recourse with probability `z'` (a drawn reserved set is
/// exercised instead). Scenarios left uncovered are repaired greedily at
/// second-stage prices. `psi` defaults to [`default_psi`].
pub fn srinivasan_round_set_cover(
    sol: &FractionalCoverSolution,
    inst: &CoverInstance,
    policy: &CostPolicy,
    scen: &ScenarioSet,
    psi: Option<f64>,
    seed: u64,
) -> Result<(RRSolution, SrinivasanStats)> {
    sol.check(inst, scen)?;
    let n = inst.num_elements();
    let factor = scale_factor(n, psi.unwrap_or_else(|| default_psi(n)));
    let sc = scale(sol, factor);
    let mut rng = seeded(seed);
    let (reserved, mut per_scenario) = reserve_and_exercise(&sc, scen.len(), &mut rng);
    for (a, d) in per_scenario.iter_mut().enumerate() {
        for s in 0..inst.num_sets() {
            if draw(&mut rng, sc.z[a][s]) && !d.exercised.contains(&s) {
                buy(d, &reserved, s);
            }
        }
    }
    let mut out = RRSolution {
        reserved,
        per_scenario,
    };
    let pre_repair_cost = evaluate_objective(&out, policy, scen)?.total;
    let repaired = repair_all(inst, policy, scen, &mut out)?;
    Ok((
        out,
        SrinivasanStats {
            scale: factor,
            pre_repair_cost,
            repaired,
        },
    ))
}

/// Doubling rounding for vertex cover.
///
/// With `x' = min(2x, 1)` and likewise `y', z'`: reserve with probability
/// `x'`, exercise with probability `y'/x'`, then every vertex touching a
/// demanded edge with `y' + z' >= 1` that is not bought yet is exercised if
/// reserved and recoursed otherwise. Every demanded edge has an endpoint
/// with `y' + z' >= 1`, so the output is feasible without repair.
pub fn srinivasan_round_vertex_cover(
    sol: &FractionalCoverSolution,
    inst: &CoverInstance,
    policy: &CostPolicy,
    scen: &ScenarioSet,
    seed: u64,
) -> Result<RRSolution> {
    if inst.kind() != CoverKind::Vertex {
        return Err(Error::Instance(
            "doubling rounding needs a vertex cover instance".into(),
        ));
    }
    sol.check(inst, scen)?;
    let sc = scale(sol, 2.0);
    let mut rng = seeded(seed);
    let (reserved, mut per_scenario) = reserve_and_exercise(&sc, scen.len(), &mut rng);
    for ((a, s), d) in scen.iter().enumerate().zip(per_scenario.iter_mut()) {
        for v in 0..inst.num_sets() {
            if d.exercised.contains(&v) || sc.y[a][v] + sc.z[a][v] < 1.0 - 1e-7 {
                continue;
            }
            if inst.members(v).iter().any(|&e| s.contains(e)) {
                buy(d, &reserved, v);
            }
        }
    }
    let mut out = RRSolution {
        reserved,
        per_scenario,
    };
    // Only reachable through LP round-off.
    repair_all(inst, policy, scen, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::check_cover;
    use crate::model::Scenario;

    #[test]
    fn psi_and_scale() {
        assert_eq!(default_psi(8), 1.0);
        let psi = 8f64.ln().ln();
        assert!((psi - 0.7320).abs() < 1e-3);
        assert!((scale_factor(8, psi) - 2.8115).abs() < 1e-3);
        assert_eq!(scale_factor(1, 0.0), 1.0);
    }

    #[test]
    fn saturated_values_buy_everything() {
        let inst = CoverInstance::set_cover(2, vec![vec![0], vec![1]]).unwrap();
        let policy = CostPolicy::new(0.5, 2.0, vec![1.0, 1.0]).unwrap();
        let scen = ScenarioSet::certain([0, 1]).unwrap();
        let sol = FractionalCoverSolution {
            x: vec![0.6, 0.6],
            y: vec![vec![0.6, 0.6]],
            z: vec![vec![0.4, 0.4]],
        };
        for seed in 0..10 {
            let (out, stats) =
                srinivasan_round_set_cover(&sol, &inst, &policy, &scen, Some(1.0), seed).unwrap();
            assert_eq!(out.reserved, BTreeSet::from([0, 1]));
            assert_eq!(out.per_scenario[0].exercised, BTreeSet::from([0, 1]));
            assert!(out.per_scenario[0].recoursed.is_empty());
            assert_eq!(stats.repaired, vec![false]);
        }
    }

    #[test]
    fn vertex_cover_integral_identity() {
        let inst = CoverInstance::vertex_cover(3, vec![(0, 1), (1, 2)]).unwrap();
        let policy = CostPolicy::new(0.5, 2.0, vec![1.0; 3]).unwrap();
        let scen = ScenarioSet::new(vec![
            Scenario::new(0.5, [0, 1]).unwrap(),
            Scenario::new(0.5, [0]).unwrap(),
        ])
        .unwrap();
        let reserved = BTreeSet::from([1]);
        let ex = vec![BTreeSet::from([1]), BTreeSet::new()];
        let rec = vec![BTreeSet::new(), BTreeSet::from([0])];
        let sol = FractionalCoverSolution::integral(3, &reserved, &ex, &rec);
        for seed in 0..10 {
            let out = srinivasan_round_vertex_cover(&sol, &inst, &policy, &scen, seed).unwrap();
            assert_eq!(out.reserved, reserved);
            assert_eq!(out.per_scenario[0].exercised, ex[0]);
            assert_eq!(out.per_scenario[1].recoursed, rec[1]);
            assert!(out.per_scenario[1].exercised.is_empty());
        }
    }

    #[test]
    fn half_edge_saturates() {
        let inst = CoverInstance::vertex_cover(2, vec![(0, 1)]).unwrap();
        let policy = CostPolicy::new(0.5, 2.0, vec![1.0, 1.0]).unwrap();
        let scen = ScenarioSet::certain([0]).unwrap();
        let sol = FractionalCoverSolution {
            x: vec![0.5, 0.5],
            y: vec![vec![0.5, 0.5]],
            z: vec![vec![0.0, 0.0]],
        };
        let out = srinivasan_round_vertex_cover(&sol, &inst, &policy, &scen, 3).unwrap();
        assert_eq!(out.reserved, BTreeSet::from([0, 1]));
        assert_eq!(out.per_scenario[0].exercised, BTreeSet::from([0, 1]));
    }

    #[test]
    fn triangle_mean_within_twice_lp() {
        let inst = CoverInstance::vertex_cover(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let policy = CostPolicy::new(0.4, 2.5, vec![1.0, 1.3, 0.8]).unwrap();
        let scen = ScenarioSet::new(vec![
            Scenario::new(0.7, [0, 1]).unwrap(),
            Scenario::new(0.3, [1, 2]).unwrap(),
        ])
        .unwrap();
        let (sol, lp_opt) = FractionalCoverSolution::solve(&inst, &policy, &scen).unwrap();
        let seeds = 2000;
        let mut total = 0.0;
        for seed in 0..seeds {
            let out = srinivasan_round_vertex_cover(&sol, &inst, &policy, &scen, seed).unwrap();
            assert!(check_cover(&out, &inst, &scen).is_feasible());
            assert!(out.structural_violations().is_empty());
            total += evaluate_objective(&out, &policy, &scen).unwrap().total;
        }
        let mean = total / seeds as f64;
        assert!(mean <= 2.0 * lp_opt * 1.05, "mean {mean} lp {lp_opt}");
    }

    #[test]
    fn set_cover_always_feasible() {
        let inst = CoverInstance::set_cover(
            6,
            vec![
                vec![0, 1],
                vec![1, 2, 3],
                vec![3, 4],
                vec![4, 5, 0],
                vec![2, 5],
                vec![0, 3],
            ],
        )
        .unwrap();
        let policy = CostPolicy::new(0.3, 2.0, vec![1.0, 1.5, 1.0, 1.5, 1.0, 1.2]).unwrap();
        let scen = ScenarioSet::new(vec![
            Scenario::new(0.5, [0, 2, 4]).unwrap(),
            Scenario::new(0.5, [1, 3, 5]).unwrap(),
        ])
        .unwrap();
        let (sol, _) = FractionalCoverSolution::solve(&inst, &policy, &scen).unwrap();
        for seed in 0..200 {
            let (out, stats) =
                srinivasan_round_set_cover(&sol, &inst, &policy, &scen, None, seed).unwrap();
            assert!(check_cover(&out, &inst, &scen).is_feasible());
            assert!(out.structural_violations().is_empty());
            let cost = evaluate_objective(&out, &policy, &scen).unwrap().total;
            if stats.repaired.iter().all(|r| !r) {
                assert_eq!(cost, stats.pre_repair_cost);
            }
        }
    }
}
