use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fractional::{greedy_cover, FractionalCoverSolution};
use super::instance::CoverInstance;
use super::preprocess::HalfMassReport;
use crate::error::{Error, Result};
use crate::model::{seeded, CostPolicy, RRSolution, ScenarioSet, SeededRng, StageDecision};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DoubleRoundStats {
    /// Random first-stage rounds drawn (at least one).
    pub stage1_rounds: usize,
    pub stage1_repaired: bool,
    /// Random second-stage rounds per scenario, exercise and recourse together.
    pub stage2_rounds: Vec<usize>,
    pub stage2_repaired: Vec<bool>,
}

/// Round cap `⌈4 (ln n + 4)⌉` before greedy repair takes over.
pub fn round_cap(num_elements: usize) -> usize {
    (4.0 * ((num_elements.max(1) as f64).ln() + 4.0)).ceil() as usize
}

fn draw(rng: &mut SeededRng, p: f64) -> bool {
    p >= 1.0 || (p > 0.0 && rng.gen::<f64>() < p)
}

/// Two-level randomized rounding of a half-mass preprocessed solution.
///
/// Stage 1 draws rounds in which each set is reserved with probability
/// `x[s]` until every element of `E` is covered, and remembers each round.
/// In scenario `A`, each remembered pick of set `s` survives with
/// probability `y[A][s] / x[s]`; survivors are exercised. Elements of
/// `A \ E` left uncovered are handled by rounds drawing each set with
/// probability `z[A][s]`, where a drawn set that is already reserved is
/// exercised rather than bought again. Every loop is capped by
/// [`round_cap`] and finished by a greedy repair, so the output is always
/// feasible.
pub fn double_randomized_round(
    sol: &FractionalCoverSolution,
    report: &HalfMassReport,
    inst: &CoverInstance,
    policy: &CostPolicy,
    scen: &ScenarioSet,
    seed: u64,
) -> Result<(RRSolution, DoubleRoundStats)> {
    sol.check(inst, scen)?;
    let mut rng = seeded(seed);
    let cap = round_cap(inst.num_elements());
    let m = inst.num_sets();
    let w = policy.weights();
    let mut stats = DoubleRoundStats::default();

    let e_list: Vec<usize> = report.e.iter().copied().collect();
    let mut rounds: Vec<Vec<usize>> = Vec::new();
    let mut reserved = BTreeSet::new();
    loop {
        let picked: Vec<usize> = (0..m).filter(|&s| draw(&mut rng, sol.x[s])).collect();
        reserved.extend(picked.iter().copied());
        rounds.push(picked);
        stats.stage1_rounds += 1;
        if inst.covers(&e_list, &reserved) || stats.stage1_rounds >= cap {
            break;
        }
    }
    if !inst.covers(&e_list, &reserved) {
        let fix = greedy_cover(inst, &e_list, &reserved, |s| w[s])?;
        reserved.extend(fix.iter().copied());
        rounds.push(fix.into_iter().collect());
        stats.stage1_repaired = true;
    }

    let mut per_scenario = Vec::with_capacity(scen.len());
    for (a, sc) in scen.iter().enumerate() {
        let mut d = StageDecision::default();
        let mut used = 0;
        let mut repaired = false;
        let in_e: Vec<usize> = sc
            .clients
            .iter()
            .copied()
            .filter(|e| report.e.contains(e))
            .collect();
        let exercise_prob = |s: usize| {
            if sol.x[s] > 0.0 {
                sol.y[a][s] / sol.x[s]
            } else {
                0.0
            }
        };
        if !in_e.is_empty() {
            for round in &rounds {
                for &s in round {
                    if !d.exercised.contains(&s) && draw(&mut rng, exercise_prob(s)) {
                        d.exercised.insert(s);
                    }
                }
            }
            used += 1;
            let pool: Vec<usize> = reserved.iter().copied().collect();
            while !inst.covers(&in_e, &d.exercised) && used < cap {
                for &s in &pool {
                    if !d.exercised.contains(&s) && draw(&mut rng, exercise_prob(s)) {
                        d.exercised.insert(s);
                    }
                }
                used += 1;
            }
            let missing = inst.uncovered(&in_e, &d.exercised);
            if !missing.is_empty() {
                repaired = true;
                repair(inst, policy, &missing, &reserved, &mut d)?;
            }
        }
        let rest: Vec<usize> = sc
            .clients
            .iter()
            .copied()
            .filter(|e| !report.e.contains(e))
            .collect();
        let mut rest_rounds = 0;
        while !inst.covers(&rest, &d.bought()) && rest_rounds < cap {
            for s in 0..m {
                if d.exercised.contains(&s) || d.recoursed.contains(&s) {
                    continue;
                }
                if draw(&mut rng, sol.z[a][s]) {
                    if reserved.contains(&s) {
                        d.exercised.insert(s);
                    } else {
                        d.recoursed.insert(s);
                    }
                }
            }
            rest_rounds += 1;
        }
        used += rest_rounds;
        let missing = inst.uncovered(&rest, &d.bought());
        if !missing.is_empty() {
            repaired = true;
            repair(inst, policy, &missing, &reserved, &mut d)?;
        }
        stats.stage2_rounds.push(used);
        stats.stage2_repaired.push(repaired);
        per_scenario.push(d);
    }
    let out = RRSolution {
        reserved,
        per_scenario,
    };
    if let Some(v) = out.structural_violations().first() {
        return Err(Error::Structure(format!("rounding produced {v:?}")));
    }
    Ok((out, stats))
}

/// Greedy cover of `missing` pricing reserved sets at the exercise price.
fn repair(
    inst: &CoverInstance,
    policy: &CostPolicy,
    missing: &[usize],
    reserved: &BTreeSet<usize>,
    d: &mut StageDecision,
) -> Result<()> {
    let bought = d.bought();
    let price = |s: usize| {
        if reserved.contains(&s) {
            policy.exercise_price(s)
        } else {
            policy.recourse_price(s)
        }
    };
    for s in greedy_cover(inst, missing, &bought, price)? {
        if reserved.contains(&s) {
            d.exercised.insert(s);
        } else {
            d.recoursed.insert(s);
        }
    }
    Ok(())
}
