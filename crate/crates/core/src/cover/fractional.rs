use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::instance::CoverInstance;
use crate::error::{Error, Result};
use crate::lp::{build_cover_lp, solve_optimal, CoverLpLayout};
use crate::model::{CostPolicy, ScenarioSet};

/// Fractional `x[s]`, `y[A][s]`, `z[A][s]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalCoverSolution {
    pub x: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub z: Vec<Vec<f64>>,
}

impl FractionalCoverSolution {
    /// Reads a primal vector laid out as by `build_cover_lp`, clamping to `[0, 1]`.
    pub fn from_lp_values(values: &[f64], num_sets: usize, num_scenarios: usize) -> Result<Self> {
        let layout = CoverLpLayout {
            num_sets,
            num_scenarios,
        };
        if values.len() != layout.num_vars() {
            return Err(Error::Structure(format!(
                "expected {} LP values, got {}",
                layout.num_vars(),
                values.len()
            )));
        }
        let clamp = |v: f64| v.clamp(0.0, 1.0);
        Ok(Self {
            x: (0..num_sets).map(|s| clamp(values[layout.x(s)])).collect(),
            y: (0..num_scenarios)
                .map(|a| {
                    (0..num_sets)
                        .map(|s| clamp(values[layout.y(a, s)]))
                        .collect()
                })
                .collect(),
            z: (0..num_scenarios)
                .map(|a| {
                    (0..num_sets)
                        .map(|s| clamp(values[layout.z(a, s)]))
                        .collect()
                })
                .collect(),
        })
    }

    /// Solves the covering LP and returns its optimum with the optimal value.
    pub fn solve(
        inst: &CoverInstance,
        policy: &CostPolicy,
        scen: &ScenarioSet,
    ) -> Result<(Self, f64)> {
        let lp = build_cover_lp(inst, policy, scen)?;
        let (primal, _) = solve_optimal(&lp)?;
        let sol = Self::from_lp_values(&primal.values, inst.num_sets(), scen.len())?;
        Ok((sol, primal.objective_value))
    }

    /// Integral solution, mostly for tests.
    pub fn integral(
        num_sets: usize,
        reserved: &BTreeSet<usize>,
        exercised: &[BTreeSet<usize>],
        recoursed: &[BTreeSet<usize>],
    ) -> Self {
        let ind = |set: &BTreeSet<usize>| {
            (0..num_sets)
                .map(|s| if set.contains(&s) { 1.0 } else { 0.0 })
                .collect()
        };
        Self {
            x: ind(reserved),
            y: exercised.iter().map(ind).collect(),
            z: recoursed.iter().map(ind).collect(),
        }
    }

    pub fn num_sets(&self) -> usize {
        self.x.len()
    }

    pub fn num_scenarios(&self) -> usize {
        self.y.len()
    }

    /// LP objective of this fractional point.
    pub fn cost(&self, policy: &CostPolicy, scen: &ScenarioSet) -> f64 {
        let w = policy.weights();
        let mut total: f64 = self
            .x
            .iter()
            .zip(w)
            .map(|(x, w)| policy.sigma() * x * w)
            .sum();
        for (a, s) in scen.iter().enumerate() {
            for (set, &w) in w.iter().enumerate() {
                total += s.probability
                    * w
                    * ((1.0 - policy.sigma()) * self.y[a][set] + policy.lambda() * self.z[a][set]);
            }
        }
        total
    }

    /// `Σ_{s ∋ e} y[A][s]`.
    pub fn y_mass(&self, inst: &CoverInstance, scenario: usize, element: usize) -> f64 {
        inst.covering(element)
            .iter()
            .map(|&s| self.y[scenario][s])
            .sum()
    }

    /// Checks linkage `y <= x` and coverage `Σ (y + z) >= 1` within tolerance.
    pub fn check(&self, inst: &CoverInstance, scen: &ScenarioSet) -> Result<()> {
        if self.num_sets() != inst.num_sets()
            || self.num_scenarios() != scen.len()
            || self.z.len() != scen.len()
            || self
                .y
                .iter()
                .chain(&self.z)
                .any(|r| r.len() != inst.num_sets())
        {
            return Err(Error::Structure(
                "fractional solution shape mismatch".into(),
            ));
        }
        for a in 0..scen.len() {
            for s in 0..inst.num_sets() {
                if self.y[a][s] > self.x[s] + 1e-9 {
                    return Err(Error::Structure(format!("y[{a},{s}] exceeds x[{s}]")));
                }
            }
        }
        for (a, sc) in scen.iter().enumerate() {
            for &e in &sc.clients {
                let mass: f64 = inst
                    .covering(e)
                    .iter()
                    .map(|&s| self.y[a][s] + self.z[a][s])
                    .sum();
                if mass < 1.0 - 1e-7 {
                    return Err(Error::Structure(format!(
                        "element {e} under-covered in scenario {a}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Greedy weighted set cover of `elements` with per-set `price`.
///
/// Picks the set minimising price per newly covered element, ties to the
/// lower id. Sets already in `have` count as free coverage.
pub fn greedy_cover(
    inst: &CoverInstance,
    elements: &[usize],
    have: &BTreeSet<usize>,
    price: impl Fn(usize) -> f64,
) -> Result<BTreeSet<usize>> {
    let mut open: BTreeSet<usize> = elements
        .iter()
        .copied()
        .filter(|&e| !inst.is_covered(e, have))
        .collect();
    inst.check_coverable(open.iter().copied())?;
    let mut picked = BTreeSet::new();
    while !open.is_empty() {
        let mut best: Option<(f64, usize)> = None;
        for s in 0..inst.num_sets() {
            if picked.contains(&s) {
                continue;
            }
            let gain = inst.members(s).iter().filter(|e| open.contains(e)).count();
            if gain == 0 {
                continue;
            }
            let ratio = price(s) / gain as f64;
            if best.is_none_or(|(r, _)| ratio < r) {
                best = Some((ratio, s));
            }
        }
        let (_, s) = best.expect("coverable elements always have a covering set");
        picked.insert(s);
        for e in inst.members(s) {
            open.remove(e);
        }
    }
    Ok(picked)
}
