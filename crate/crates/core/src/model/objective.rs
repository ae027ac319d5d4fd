use serde::{Deserialize, Serialize};

use super::policy::CostPolicy;
use super::scenario::ScenarioSet;
use super::solution::RRSolution;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown<T = f64> {
    pub first_stage: T,
    pub expected_exercise: T,
    pub expected_recourse: T,
    pub total: T,
}

/// `sigma * w(F0) + sum_k p_k [(1 - sigma) * w(F1_k) + lambda * w(F2_k)]`.
pub fn evaluate_objective<T: Scalar>(
    sol: &RRSolution,
    policy: &CostPolicy<T>,
    scen: &ScenarioSet,
) -> Result<ObjectiveBreakdown<T>> {
    if sol.per_scenario.len() != scen.len() {
        return Err(Error::Structure(format!(
            "solution has {} scenario entries, distribution has {}",
            sol.per_scenario.len(),
            scen.len()
        )));
    }
    let priced = |items: &std::collections::BTreeSet<usize>| {
        policy.weight_of(items).ok_or_else(|| {
            let bad = items
                .iter()
                .find(|&&i| policy.weight(i).is_none())
                .copied()
                .unwrap_or_default();
            Error::Structure(format!("item {bad} has no weight"))
        })
    };
    let first_stage = policy.sigma() * priced(&sol.reserved)?;
    let mut expected_exercise = T::zero();
    let mut expected_recourse = T::zero();
    for (d, s) in sol.per_scenario.iter().zip(scen.iter()) {
        let p = T::of(s.probability);
        expected_exercise =
            expected_exercise + p * (T::one() - policy.sigma()) * priced(&d.exercised)?;
        expected_recourse = expected_recourse + p * policy.lambda() * priced(&d.recoursed)?;
    }
    Ok(ObjectiveBreakdown {
        first_stage,
        expected_exercise,
        expected_recourse,
        total: first_stage + expected_exercise + expected_recourse,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use proptest::prelude::*;

    use super::*;
    use crate::model::{Scenario, StageDecision};

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn empty_solution_costs_nothing() {
        let scen = ScenarioSet::new(vec![
            Scenario::new(0.5, [0]).unwrap(),
            Scenario::new(0.5, [1]).unwrap(),
        ])
        .unwrap();
        let policy = CostPolicy::new(0.3, 2.0, vec![1.0, 2.0]).unwrap();
        let b = evaluate_objective(&RRSolution::empty(2), &policy, &scen).unwrap();
        assert_eq!(b.total, 0.0);
    }

    #[test]
    fn hand_evaluated_example() {
        let policy = CostPolicy::new(0.5, 2.0, vec![1.0, 2.0]).unwrap();
        let scen = ScenarioSet::certain([0]).unwrap();
        let sol = RRSolution {
            reserved: set(&[0]),
            per_scenario: vec![StageDecision {
                exercised: set(&[0]),
                recoursed: set(&[1]),
            }],
        };
        let b = evaluate_objective(&sol, &policy, &scen).unwrap();
        assert_eq!(b.first_stage, 0.5);
        assert_eq!(b.expected_exercise, 0.5);
        assert_eq!(b.expected_recourse, 4.0);
        assert_eq!(b.total, 5.0);
    }

    #[test]
    fn works_in_single_precision() {
        let policy = CostPolicy::new(0.5f32, 2.0, vec![1.0, 2.0]).unwrap();
        let scen = ScenarioSet::certain([0]).unwrap();
        let sol = RRSolution {
            reserved: set(&[0]),
            per_scenario: vec![StageDecision {
                exercised: set(&[0]),
                recoursed: set(&[1]),
            }],
        };
        assert_eq!(
            evaluate_objective(&sol, &policy, &scen).unwrap().total,
            5.0f32
        );
    }

    #[test]
    fn missing_scenario_and_unpriced_item_are_errors() {
        let policy = CostPolicy::new(0.5, 2.0, vec![1.0]).unwrap();
        let scen = ScenarioSet::certain([0]).unwrap();
        assert!(evaluate_objective(&RRSolution::default(), &policy, &scen).is_err());
        let sol = RRSolution {
            reserved: set(&[3]),
            per_scenario: vec![StageDecision::default()],
        };
        assert!(matches!(
            evaluate_objective(&sol, &policy, &scen),
            Err(Error::Structure(_))
        ));
    }

    fn arb_instance() -> impl Strategy<Value = (Vec<f64>, f64, f64, RRSolution, ScenarioSet)> {
        let n = 5usize;
        (
            prop::collection::vec(0.0f64..10.0, n),
            0.01f64..0.99,
            1.01f64..5.0,
            prop::collection::vec(0.1f64..1.0, 1..4),
            prop::collection::vec(any::<u8>(), 4 * 3),
        )
            .prop_map(move |(w, sigma, lambda, raw_p, bits)| {
                let total: f64 = raw_p.iter().sum();
                let m = raw_p.len();
                let scen = ScenarioSet::new(
                    raw_p
                        .iter()
                        .map(|p| Scenario::new(p / total, [0]).unwrap())
                        .collect(),
                )
                .unwrap();
                let reserved: BTreeSet<usize> = (0..n).filter(|i| bits[0] >> i & 1 == 1).collect();
                let per_scenario = (0..m)
                    .map(|k| {
                        let exercised: BTreeSet<usize> = reserved
                            .iter()
                            .copied()
                            .filter(|i| bits[1 + k] >> i & 1 == 1)
                            .collect();
                        let recoursed: BTreeSet<usize> = (0..n)
                            .filter(|i| !exercised.contains(i) && bits[5 + k] >> i & 1 == 1)
                            .collect();
                        StageDecision {
                            exercised,
                            recoursed,
                        }
                    })
                    .collect();
                (
                    w,
                    sigma,
                    lambda,
                    RRSolution {
                        reserved,
                        per_scenario,
                    },
                    scen,
                )
            })
    }

    proptest! {
        #[test]
        fn linear_in_weights((w, sigma, lambda, sol, scen) in arb_instance(), c in 0.1f64..10.0) {
            let p = CostPolicy::new(sigma, lambda, w.clone()).unwrap();
            let base = evaluate_objective(&sol, &p, &scen).unwrap().total;
            let scaled = evaluate_objective(&sol, &p.scaled(c).unwrap(), &scen).unwrap().total;
            prop_assert!((scaled - c * base).abs() <= 1e-9 * (1.0 + c * base));
            // powers of two scale exactly
            let doubled = evaluate_objective(&sol, &p.scaled(2.0).unwrap(), &scen).unwrap().total;
            prop_assert_eq!(doubled, 2.0 * base);
        }

        #[test]
        fn breakdown_sums((w, sigma, lambda, sol, scen) in arb_instance()) {
            let b = evaluate_objective(&sol, &CostPolicy::new(sigma, lambda, w).unwrap(), &scen).unwrap();
            prop_assert!((b.total - (b.first_stage + b.expected_exercise + b.expected_recourse)).abs() <= 1e-9);
        }

        #[test]
        fn expectation_decomposes_over_scenarios((w, sigma, lambda, sol, scen) in arb_instance()) {
            let p = CostPolicy::new(sigma, lambda, w).unwrap();
            let total = evaluate_objective(&sol, &p, &scen).unwrap().total;
            let mut acc = 0.0;
            for (k, s) in scen.iter().enumerate() {
                let single = ScenarioSet::certain(s.clients.clone()).unwrap();
                let one = RRSolution { reserved: sol.reserved.clone(), per_scenario: vec![sol.per_scenario[k].clone()] };
                acc += s.probability * evaluate_objective(&one, &p, &single).unwrap().total;
            }
            prop_assert!((total - acc).abs() <= 1e-9 * (1.0 + total));
        }

        #[test]
        fn full_exercise_is_sigma_free((w, sigma, lambda, sol, scen) in arb_instance(), sigma2 in 0.01f64..0.99) {
            let mut sol = sol;
            for d in &mut sol.per_scenario {
                d.exercised = sol.reserved.clone();
                d.recoursed = d.recoursed.difference(&sol.reserved).copied().collect();
            }
            let a = evaluate_objective(&sol, &CostPolicy::new(sigma, lambda, w.clone()).unwrap(), &scen).unwrap().total;
            let b = evaluate_objective(&sol, &CostPolicy::new(sigma2, lambda, w).unwrap(), &scen).unwrap().total;
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
        }
    }

    #[test]
    fn exercise_term_vanishes_as_sigma_approaches_one() {
        let scen = ScenarioSet::certain([0]).unwrap();
        let sol = RRSolution {
            reserved: set(&[0]),
            per_scenario: vec![StageDecision {
                exercised: set(&[0]),
                recoursed: set(&[]),
            }],
        };
        let mut last = f64::INFINITY;
        for sigma in [0.9, 0.99, 0.999, 0.999_999] {
            let b = evaluate_objective(
                &sol,
                &CostPolicy::new(sigma, 2.0, vec![3.0]).unwrap(),
                &scen,
            )
            .unwrap();
            assert!(b.expected_exercise < last);
            last = b.expected_exercise;
        }
        assert!(last < 1e-5);
    }
}
