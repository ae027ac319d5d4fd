use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::fractional::FractionalCoverSolution;
use super::instance::CoverInstance;
use crate::model::{CostPolicy, ScenarioSet};

/// Half-mass classification tolerance; a mass of exactly 1/2 counts as high.
const HALF: f64 = 0.5 - 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfMassReport {
    /// Demanded elements whose y-mass is at least 1/2 in every scenario containing them.
    pub e: BTreeSet<usize>,
    /// Cost after / cost before (1 when the input costs nothing).
    pub inflation: f64,
    /// `(λ + σ - 1) / (2 - 2σ)`.
    pub k_stated: f64,
    /// `(λ + 1 - σ) / (2 - 2σ)`, the ratio of moving half the exercise mass to recourse.
    pub k_corrected: f64,
    /// Halving passes before the classification stabilised.
    pub passes: usize,
    /// Some element stayed mixed after all its y's were halved and had its
    /// remaining y-mass moved to z.
    pub used_fallback: bool,
}

impl HalfMassReport {
    pub fn k_bound(&self) -> f64 {
        self.k_stated.max(self.k_corrected)
    }
}

pub fn k_stated(policy: &CostPolicy) -> f64 {
    (policy.lambda() + policy.sigma() - 1.0) / (2.0 - 2.0 * policy.sigma())
}

pub fn k_corrected(policy: &CostPolicy) -> f64 {
    (policy.lambda() + 1.0 - policy.sigma()) / (2.0 - 2.0 * policy.sigma())
}

/// Scenario ids containing each element.
fn occurrences(inst: &CoverInstance, scen: &ScenarioSet) -> Vec<Vec<usize>> {
    let mut occ = vec![Vec::new(); inst.num_elements()];
    for (a, s) in scen.iter().enumerate() {
        for &e in &s.clients {
            occ[e].push(a);
        }
    }
    occ
}

fn is_mixed(sol: &FractionalCoverSolution, inst: &CoverInstance, e: usize, occ: &[usize]) -> bool {
    let mut high = false;
    let mut low = false;
    for &a in occ {
        if sol.y_mass(inst, a, e) >= HALF {
            high = true;
        } else {
            low = true;
        }
    }
    high && low
}

/// Makes every element's y-mass uniformly high or uniformly low across the
/// scenarios containing it.
///
/// While some element is mixed, every not-yet-halved `y[A][s]` with
/// `A ∋ e` and `s ∋ e` is halved and the removed half added to `z[A][s]`.
/// An element can stay mixed once all its y's are halved (its high
/// scenarios had y-mass at least 1); those scenarios then move their whole
/// remaining y-mass on the element's sets into z. Both moves keep `x` and
/// every `y + z` unchanged.
pub fn preprocess_half(
    sol: &FractionalCoverSolution,
    inst: &CoverInstance,
    policy: &CostPolicy,
    scen: &ScenarioSet,
) -> (FractionalCoverSolution, HalfMassReport) {
    let before = sol.cost(policy, scen);
    let occ = occurrences(inst, scen);
    let mut out = sol.clone();
    let mut halved = vec![vec![false; inst.num_sets()]; scen.len()];
    let mut passes = 0;
    loop {
        let mut changed = false;
        for e in 0..inst.num_elements() {
            if !is_mixed(&out, inst, e, &occ[e]) {
                continue;
            }
            for &a in &occ[e] {
                for &s in inst.covering(e) {
                    if !halved[a][s] && out.y[a][s] > 0.0 {
                        let half = out.y[a][s] / 2.0;
                        out.y[a][s] -= half;
                        out.z[a][s] += half;
                        halved[a][s] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
        passes += 1;
    }
    let mut used_fallback = false;
    loop {
        let mut changed = false;
        for e in 0..inst.num_elements() {
            if !is_mixed(&out, inst, e, &occ[e]) {
                continue;
            }
            for &a in &occ[e] {
                if out.y_mass(inst, a, e) < HALF {
                    continue;
                }
                for &s in inst.covering(e) {
                    out.z[a][s] += out.y[a][s];
                    out.y[a][s] = 0.0;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
        used_fallback = true;
    }
    let e = (0..inst.num_elements())
        .filter(|&e| !occ[e].is_empty() && occ[e].iter().all(|&a| out.y_mass(inst, a, e) >= HALF))
        .collect();
    let after = out.cost(policy, scen);
    let inflation = if before > 0.0 { after / before } else { 1.0 };
    let report = HalfMassReport {
        e,
        inflation,
        k_stated: k_stated(policy),
        k_corrected: k_corrected(policy),
        passes,
        used_fallback,
    };
    (out, report)
}
