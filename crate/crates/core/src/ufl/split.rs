use serde::{Deserialize, Serialize};

use super::fractional::{demanded_pairs, FractionalUflSolution, Pair};
use crate::model::ScenarioSet;

/// `2.29 / (2.29 + 1.52)`.
pub const DEFAULT_THETA: f64 = 2.29 / 3.81;

/// `x = x1 + x2` with `x1 <= yk` and `x2 <= zk`, both indexed `[k][i][j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub x1: Vec<Vec<Vec<f64>>>,
    pub x2: Vec<Vec<Vec<f64>>>,
}

/// Fills each assignment from the exercise capacity first: `x1 = min(x, yk)`.
pub fn split_assignment(sol: &FractionalUflSolution) -> SplitAssignment {
    let mut x1 = sol.x.clone();
    let mut x2 = sol.x.clone();
    for (k, xk) in sol.x.iter().enumerate() {
        for (i, row) in xk.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let a = x.min(sol.yk[k][i]);
                x1[k][i][j] = a;
                x2[k][i][j] = x - a;
            }
        }
    }
    SplitAssignment { x1, x2 }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClasses {
    /// `Σ_i x1 >= theta`
    pub first_stage: Vec<Pair>,
    pub second_stage: Vec<Pair>,
}

pub fn classify_pairs(split: &SplitAssignment, scen: &ScenarioSet, theta: f64) -> PairClasses {
    let mut out = PairClasses::default();
    for p in demanded_pairs(scen) {
        let mass: f64 = split.x1[p.scenario].iter().map(|row| row[p.client]).sum();
        if mass >= theta {
            out.first_stage.push(p);
        } else {
            out.second_stage.push(p);
        }
    }
    out
}
