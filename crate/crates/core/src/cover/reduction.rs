use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::instance::CoverInstance;
use crate::error::{Error, Result};
use crate::lp::{solve_optimal, LinearProgram, Sense, VarTag};
use crate::model::{CostPolicy, RRSolution, ScenarioSet, StageDecision};

/// Output of a plain two-stage algorithm: items bought up front at `w` and
/// per-scenario items bought at `lambda * w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecourseOutput {
    pub first_stage: BTreeSet<usize>,
    pub second_stage: Vec<BTreeSet<usize>>,
}

/// A `beta`-approximation for the two-stage problem without reservations.
pub trait RecourseSolver {
    fn beta(&self) -> f64;
    fn solve_recourse(&self, policy: &CostPolicy, scen: &ScenarioSet) -> Result<RecourseOutput>;
}

/// Reserves everything the recourse algorithm buys up front and exercises
/// all of it in every scenario; second-stage purchases become recourse.
///
/// The result costs `w(F0) + λ E[w(F2)]`, within `beta / sigma` of the
/// optimum with reservations.
pub fn buy_all_reserved_reduction<R: RecourseSolver + ?Sized>(
    solver: &R,
    policy: &CostPolicy,
    scen: &ScenarioSet,
) -> Result<RRSolution> {
    let out = solver.solve_recourse(policy, scen)?;
    if out.second_stage.len() != scen.len() {
        return Err(Error::Structure(
            "recourse solver returned the wrong number of scenarios".into(),
        ));
    }
    let per_scenario = out
        .second_stage
        .iter()
        .map(|second| StageDecision {
            exercised: out.first_stage.clone(),
            recoursed: second.difference(&out.first_stage).copied().collect(),
        })
        .collect();
    Ok(RRSolution {
        reserved: out.first_stage,
        per_scenario,
    })
}

/// Threshold rounding of the two-stage covering LP
/// `min Σ w x + Σ_A p_A λ Σ w z_A` s.t. `Σ_{s ∋ e} (x_s + z_{A,s}) >= 1`.
///
/// Some `s ∋ e` has `x_s + z_{A,s} >= 1/f`, so one of the two is at least
/// `1/(2f)`; buying at that threshold gives `beta = 2f` with `f` the
/// maximum frequency (4 for vertex cover).
#[derive(Clone, Copy, Debug)]
pub struct CoverRecourseSolver<'a> {
    pub instance: &'a CoverInstance,
}

impl CoverRecourseSolver<'_> {
    fn threshold(&self) -> f64 {
        1.0 / self.beta() - 1e-9
    }
}

impl RecourseSolver for CoverRecourseSolver<'_> {
    fn beta(&self) -> f64 {
        2.0 * self.instance.max_frequency().max(1) as f64
    }

    fn solve_recourse(&self, policy: &CostPolicy, scen: &ScenarioSet) -> Result<RecourseOutput> {
        let inst = self.instance;
        let m = inst.num_sets();
        for s in scen {
            inst.check_coverable(s.clients.iter().copied())?;
        }
        let mut lp = LinearProgram::new();
        for s in 0..m {
            lp.add_var(VarTag::Reserve { set: s }, policy.weights()[s]);
        }
        for (a, sc) in scen.iter().enumerate() {
            for s in 0..m {
                lp.add_var(
                    VarTag::Recourse {
                        scenario: a,
                        set: s,
                    },
                    sc.probability * policy.recourse_price(s),
                );
            }
        }
        for (a, sc) in scen.iter().enumerate() {
            for &e in &sc.clients {
                let terms: Vec<_> = inst
                    .covering(e)
                    .iter()
                    .flat_map(|&s| [(s, 1.0), (m * (1 + a) + s, 1.0)])
                    .collect();
                lp.add_row(&terms, Sense::Ge, 1.0);
            }
        }
        let (p, _) = solve_optimal(&lp)?;
        let t = self.threshold();
        let first_stage: BTreeSet<usize> = (0..m).filter(|&s| p.values[s] >= t).collect();
        let second_stage = (0..scen.len())
            .map(|a| {
                (0..m)
                    .filter(|&s| p.values[m * (1 + a) + s] >= t && !first_stage.contains(&s))
                    .collect()
            })
            .collect();
        Ok(RecourseOutput {
            first_stage,
            second_stage,
        })
    }
}
