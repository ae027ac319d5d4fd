use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::scenario::{Scenario, ScenarioSet};

/// Second-stage decision for one scenario.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDecision {
    /// Reserved items paid off at `(1 - sigma) * w`.
    pub exercised: BTreeSet<usize>,
    /// Items bought outright at `lambda * w`.
    pub recoursed: BTreeSet<usize>,
}

impl StageDecision {
    pub fn bought(&self) -> BTreeSet<usize> {
        self.exercised.union(&self.recoursed).copied().collect()
    }
}

/// Reserved set plus one [`StageDecision`] per scenario, indexed by scenario id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RRSolution {
    pub reserved: BTreeSet<usize>,
    pub per_scenario: Vec<StageDecision>,
}

impl RRSolution {
    pub fn empty(num_scenarios: usize) -> Self {
        Self {
            reserved: BTreeSet::new(),
            per_scenario: vec![StageDecision::default(); num_scenarios],
        }
    }

    /// Structural violations only (exercise outside the reservation, double payment).
    pub fn structural_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (k, d) in self.per_scenario.iter().enumerate() {
            for &item in d.exercised.difference(&self.reserved) {
                out.push(Violation::ExercisedNotReserved { scenario: k, item });
            }
            for &item in d.exercised.intersection(&d.recoursed) {
                out.push(Violation::PaidTwice { scenario: k, item });
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    MissingScenario { scenario: usize },
    ExtraScenario { scenario: usize },
    ExercisedNotReserved { scenario: usize, item: usize },
    PaidTwice { scenario: usize, item: usize },
    Infeasible { scenario: usize },
}

impl Violation {
    pub fn scenario(&self) -> usize {
        match *self {
            Violation::MissingScenario { scenario }
            | Violation::ExtraScenario { scenario }
            | Violation::ExercisedNotReserved { scenario, .. }
            | Violation::PaidTwice { scenario, .. }
            | Violation::Infeasible { scenario } => scenario,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated_scenarios(&self) -> BTreeSet<usize> {
        self.violations.iter().map(Violation::scenario).collect()
    }
}

/// Checks structure, then runs the problem's feasibility predicate on
/// `F1 ∪ F2` of every scenario.
pub fn check_feasible<P>(sol: &RRSolution, scen: &ScenarioSet, predicate: P) -> FeasibilityReport
where
    P: Fn(usize, &Scenario, &BTreeSet<usize>) -> bool,
{
    let mut violations = Vec::new();
    for k in sol.per_scenario.len()..scen.len() {
        violations.push(Violation::MissingScenario { scenario: k });
    }
    for k in scen.len()..sol.per_scenario.len() {
        violations.push(Violation::ExtraScenario { scenario: k });
    }
    violations.extend(sol.structural_violations());
    for (k, s) in scen.iter().enumerate() {
        if let Some(d) = sol.per_scenario.get(k) {
            if !predicate(k, s, &d.bought()) {
                violations.push(Violation::Infeasible { scenario: k });
            }
        }
    }
    FeasibilityReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn empty_scenario_set_is_vacuously_feasible() {
        let r = check_feasible(&RRSolution::default(), &ScenarioSet::empty(), |_, _, _| {
            false
        });
        assert!(r.is_feasible());
    }

    #[test]
    fn names_the_uncovered_scenario() {
        // elements 0,1; set 0 = {0}, set 1 = {1}
        let sets = [set(&[0]), set(&[1])];
        let scen = ScenarioSet::new(vec![
            Scenario::new(0.5, [0]).unwrap(),
            Scenario::new(0.5, [0, 1]).unwrap(),
        ])
        .unwrap();
        let sol = RRSolution {
            reserved: set(&[0]),
            per_scenario: vec![
                StageDecision {
                    exercised: set(&[0]),
                    recoursed: set(&[]),
                },
                StageDecision {
                    exercised: set(&[0]),
                    recoursed: set(&[]),
                },
            ],
        };
        let r = check_feasible(&sol, &scen, |_, s, bought| {
            s.clients
                .iter()
                .all(|e| bought.iter().any(|&b| sets[b].contains(e)))
        });
        assert!(!r.is_feasible());
        assert_eq!(r.violations, vec![Violation::Infeasible { scenario: 1 }]);
    }

    #[test]
    fn exercise_outside_reservation_is_flagged() {
        let scen = ScenarioSet::certain([0]).unwrap();
        let sol = RRSolution {
            reserved: set(&[]),
            per_scenario: vec![StageDecision {
                exercised: set(&[2]),
                recoursed: set(&[]),
            }],
        };
        let r = check_feasible(&sol, &scen, |_, _, _| true);
        assert_eq!(
            r.violations,
            vec![Violation::ExercisedNotReserved {
                scenario: 0,
                item: 2
            }]
        );
    }

    #[test]
    fn missing_scenario_entry_is_flagged() {
        let scen = ScenarioSet::certain([0]).unwrap();
        let r = check_feasible(&RRSolution::default(), &scen, |_, _, _| true);
        assert_eq!(
            r.violations,
            vec![Violation::MissingScenario { scenario: 0 }]
        );
    }
}
