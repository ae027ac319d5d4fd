use std::collections::BTreeSet;

use super::fractional::{greedy_cover, FractionalCoverSolution};
use super::instance::{CoverInstance, CoverKind};
use super::preprocess::HalfMassReport;
use crate::error::{Error, Result};
use crate::model::{CostPolicy, RRSolution, ScenarioSet, StageDecision};

/// Rounding threshold on half-mass preprocessed values.
///
/// After preprocessing an edge in `E` has `y_u + y_v >= 1/2` and any other
/// demanded edge has `z_u + z_v > 1/2`, so one endpoint always clears 1/4.
pub const THRESHOLD: f64 = 0.25 - 1e-7;

/// Deterministic threshold rounding for vertex cover.
///
/// Reserves vertices with `x >= 1/4` that touch an edge of `E`. In each
/// scenario, reserved vertices with `y >= 1/4` touching a demanded edge are
/// exercised; edges still open are covered by their endpoints with
/// `z >= 1/4` (exercised when reserved, recoursed otherwise). A final greedy
/// pass at scenario prices guards against numerically borderline LP points.
pub fn threshold_round_vertex_cover(
    sol: &FractionalCoverSolution,
    report: &HalfMassReport,
    inst: &CoverInstance,
    policy: &CostPolicy,
    scen: &ScenarioSet,
) -> Result<RRSolution> {
    if inst.kind() != CoverKind::Vertex {
        return Err(Error::Instance(
            "threshold rounding needs a vertex cover instance".into(),
        ));
    }
    sol.check(inst, scen)?;
    let reserved: BTreeSet<usize> = (0..inst.num_sets())
        .filter(|&v| sol.x[v] >= THRESHOLD && inst.members(v).iter().any(|e| report.e.contains(e)))
        .collect();
    let mut per_scenario = Vec::with_capacity(scen.len());
    for (a, sc) in scen.iter().enumerate() {
        let mut d = StageDecision::default();
        for &v in &reserved {
            if sol.y[a][v] >= THRESHOLD && inst.members(v).iter().any(|&e| sc.contains(e)) {
                d.exercised.insert(v);
            }
        }
        for e in inst.uncovered(&sc.clients, &d.exercised) {
            if inst.is_covered(e, &d.bought()) {
                continue;
            }
            for &v in inst.covering(e) {
                if sol.z[a][v] >= THRESHOLD {
                    if reserved.contains(&v) {
                        d.exercised.insert(v);
                    } else {
                        d.recoursed.insert(v);
                    }
                }
            }
        }
        let missing = inst.uncovered(&sc.clients, &d.bought());
        if !missing.is_empty() {
            let price = |v: usize| {
                if reserved.contains(&v) {
                    policy.exercise_price(v)
                } else {
                    policy.recourse_price(v)
                }
            };
            for v in greedy_cover(inst, &missing, &d.bought(), price)? {
                if reserved.contains(&v) {
                    d.exercised.insert(v);
                } else {
                    d.recoursed.insert(v);
                }
            }
        }
        per_scenario.push(d);
    }
    Ok(RRSolution {
        reserved,
        per_scenario,
    })
}
