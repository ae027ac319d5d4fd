//! JSON instance files covering all four problems.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cover::{check_cover, CoverInstance, CoverKind, FractionalCoverSolution};
use crate::error::{Error, Result};
use crate::lp::{build_cover_lp, build_ufl_lp, LinearProgram};
use crate::model::{
    check_feasible, evaluate_objective, CostPolicy, FeasibilityReport, RRSolution, ScenarioSet,
};
use crate::oracle::{MonotoneOracle, OracleResult, UflOracle};
use crate::steiner::{check_steiner, cut_cover_instance, cut_lp_bound, MetricGraph};
use crate::ufl::{evaluate_ufl, FractionalUflSolution, UflInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    SetCover,
    VertexCover,
    Ufl,
    Steiner,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [Self::SetCover, Self::VertexCover, Self::Ufl, Self::Steiner];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::SetCover => "set_cover",
            Self::VertexCover => "vertex_cover",
            Self::Ufl => "ufl",
            Self::Steiner => "steiner",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown problem kind {s:?}")))
    }
}

/// On-disk layout; validated into [`StochasticInstance`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum InstanceFile {
    SetCover {
        sigma: f64,
        lambda: f64,
        num_elements: usize,
        sets: Vec<Vec<usize>>,
        weights: Vec<f64>,
        scenarios: ScenarioSet,
    },
    VertexCover {
        sigma: f64,
        lambda: f64,
        num_vertices: usize,
        edges: Vec<(usize, usize)>,
        weights: Vec<f64>,
        scenarios: ScenarioSet,
    },
    Ufl {
        sigma: f64,
        /// Informational; the per-scenario costs carry the inflation.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<f64>,
        facility_costs: Vec<f64>,
        /// `scenario_costs[k][i]`
        scenario_costs: Vec<Vec<f64>>,
        /// `distances[i][j]`
        distances: Vec<Vec<f64>>,
        scenarios: ScenarioSet,
    },
    Steiner {
        sigma: f64,
        lambda: f64,
        num_vertices: usize,
        root: usize,
        edges: Vec<(usize, usize)>,
        weights: Vec<f64>,
        scenarios: ScenarioSet,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Cover {
        instance: CoverInstance,
        policy: CostPolicy,
    },
    Ufl {
        instance: UflInstance,
    },
    Steiner {
        graph: MetricGraph,
        policy: CostPolicy,
    },
}

/// A validated problem together with its explicit scenario distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticInstance {
    pub problem: Problem,
    pub scenarios: ScenarioSet,
}

impl StochasticInstance {
    pub fn new(problem: Problem, scenarios: ScenarioSet) -> Result<Self> {
        match &problem {
            Problem::Cover { instance, policy } => {
                check_items(policy.num_items(), instance.num_sets())?;
                for s in scenarios.iter() {
                    instance.check_coverable(s.clients.iter().copied())?;
                }
            }
            Problem::Ufl { instance } => instance.check_scenarios(&scenarios)?,
            Problem::Steiner { graph, policy } => {
                check_items(policy.num_items(), graph.num_edges())?;
                for s in scenarios.iter() {
                    graph.check_terminals(&s.clients.iter().copied().collect())?;
                }
            }
        }
        Ok(Self { problem, scenarios })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        let (problem, scenarios) = match file {
            InstanceFile::SetCover {
                sigma,
                lambda,
                num_elements,
                sets,
                weights,
                scenarios,
            } => (
                Problem::Cover {
                    instance: CoverInstance::set_cover(num_elements, sets)?,
                    policy: CostPolicy::new(sigma, lambda, weights)?,
                },
                scenarios,
            ),
            InstanceFile::VertexCover {
                sigma,
                lambda,
                num_vertices,
                edges,
                weights,
                scenarios,
            } => (
                Problem::Cover {
                    instance: CoverInstance::vertex_cover(num_vertices, edges)?,
                    policy: CostPolicy::new(sigma, lambda, weights)?,
                },
                scenarios,
            ),
            InstanceFile::Ufl {
                sigma,
                lambda: _,
                facility_costs,
                scenario_costs,
                distances,
                scenarios,
            } => (
                Problem::Ufl {
                    instance: UflInstance::new(sigma, facility_costs, scenario_costs, distances)?,
                },
                scenarios,
            ),
            InstanceFile::Steiner {
                sigma,
                lambda,
                num_vertices,
                root,
                edges,
                weights,
                scenarios,
            } => {
                let policy = CostPolicy::new(sigma, lambda, weights.clone())?;
                (
                    Problem::Steiner {
                        graph: MetricGraph::new(num_vertices, edges, weights, root)?,
                        policy,
                    },
                    scenarios,
                )
            }
        };
        Self::new(problem, scenarios)
    }

    pub fn to_json(&self) -> String {
        let scenarios = self.scenarios.clone();
        let file = match &self.problem {
            Problem::Cover { instance, policy } => match instance.kind() {
                CoverKind::Set => InstanceFile::SetCover {
                    sigma: policy.sigma(),
                    lambda: policy.lambda(),
                    num_elements: instance.num_elements(),
                    sets: (0..instance.num_sets())
                        .map(|s| instance.members(s).to_vec())
                        .collect(),
                    weights: policy.weights().to_vec(),
                    scenarios,
                },
                CoverKind::Vertex => InstanceFile::VertexCover {
                    sigma: policy.sigma(),
                    lambda: policy.lambda(),
                    num_vertices: instance.num_sets(),
                    edges: instance.edges().to_vec(),
                    weights: policy.weights().to_vec(),
                    scenarios,
                },
            },
            Problem::Ufl { instance } => InstanceFile::Ufl {
                sigma: instance.sigma(),
                lambda: (instance.num_scenarios() > 0).then(|| instance.max_recourse_ratio()),
                facility_costs: instance.ground_costs().to_vec(),
                scenario_costs: instance.scenario_costs().to_vec(),
                distances: instance.distances().to_vec(),
                scenarios,
            },
            Problem::Steiner { graph, policy } => InstanceFile::Steiner {
                sigma: policy.sigma(),
                lambda: policy.lambda(),
                num_vertices: graph.num_vertices(),
                root: graph.root(),
                edges: graph.edges().to_vec(),
                weights: graph.weights().to_vec(),
                scenarios,
            },
        };
        let mut s = serde_json::to_string_pretty(&file).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }

    pub fn kind(&self) -> ProblemKind {
        match &self.problem {
            Problem::Cover { instance, .. } => match instance.kind() {
                CoverKind::Set => ProblemKind::SetCover,
                CoverKind::Vertex => ProblemKind::VertexCover,
            },
            Problem::Ufl { .. } => ProblemKind::Ufl,
            Problem::Steiner { .. } => ProblemKind::Steiner,
        }
    }

    pub fn sigma(&self) -> f64 {
        match &self.problem {
            Problem::Cover { policy, .. } | Problem::Steiner { policy, .. } => policy.sigma(),
            Problem::Ufl { instance } => instance.sigma(),
        }
    }

    /// Recourse inflation; for facility location the largest `f_i^k / f_i^0`.
    pub fn lambda(&self) -> f64 {
        match &self.problem {
            Problem::Cover { policy, .. } | Problem::Steiner { policy, .. } => policy.lambda(),
            Problem::Ufl { instance } => instance.max_recourse_ratio(),
        }
    }

    /// Number of first-stage items (sets, vertices, facilities or edges).
    pub fn num_items(&self) -> usize {
        match &self.problem {
            Problem::Cover { instance, .. } => instance.num_sets(),
            Problem::Ufl { instance } => instance.num_facilities(),
            Problem::Steiner { graph, .. } => graph.num_edges(),
        }
    }

    /// The same problem under another distribution. Facility location is
    /// refused because its costs are indexed by scenario.
    pub fn with_scenarios(&self, scenarios: ScenarioSet) -> Result<Self> {
        if let Problem::Ufl { .. } = self.problem {
            return Err(Error::Parameter(
                "facility location costs are tied to its own scenarios".into(),
            ));
        }
        Self::new(self.problem.clone(), scenarios)
    }

    /// Optimum of the problem's two-stage LP relaxation.
    pub fn lp_opt(&self) -> Result<f64> {
        match &self.problem {
            Problem::Cover { instance, policy } => {
                Ok(FractionalCoverSolution::solve(instance, policy, &self.scenarios)?.1)
            }
            Problem::Ufl { instance } => {
                Ok(FractionalUflSolution::solve(instance, &self.scenarios)?.1)
            }
            Problem::Steiner { graph, policy } => cut_lp_bound(graph, policy, &self.scenarios),
        }
    }

    /// The relaxation solved by [`Self::lp_opt`], for inspection.
    pub fn build_lp(&self) -> Result<LinearProgram<f64>> {
        match &self.problem {
            Problem::Cover { instance, policy } => {
                build_cover_lp(instance, policy, &self.scenarios)
            }
            Problem::Ufl { instance } => build_ufl_lp(instance, &self.scenarios),
            Problem::Steiner { graph, policy } => {
                let (inst, scen) = cut_cover_instance(graph, &self.scenarios)?;
                build_cover_lp(&inst, policy, &scen)
            }
        }
    }

    pub fn oracle(&self) -> Result<OracleResult> {
        match &self.problem {
            Problem::Cover { instance, policy } => {
                Ok(MonotoneOracle::new(instance, policy, &self.scenarios)?.solve())
            }
            Problem::Ufl { instance } => Ok(UflOracle::new(instance, &self.scenarios)?.solve()),
            Problem::Steiner { graph, policy } => {
                Ok(MonotoneOracle::new(graph, policy, &self.scenarios)?.solve())
            }
        }
    }

    /// True objective of reserving `reserved` and then responding optimally.
    pub fn first_stage_value(&self, reserved: &BTreeSet<usize>) -> Result<f64> {
        let mask = reserved.iter().try_fold(0u32, |m, &i| {
            if i < self.num_items() && i < 32 {
                Ok(m | 1 << i)
            } else {
                Err(Error::Structure(format!("unknown item {i}")))
            }
        })?;
        match &self.problem {
            Problem::Cover { instance, policy } => {
                Ok(MonotoneOracle::new(instance, policy, &self.scenarios)?.first_stage_value(mask))
            }
            Problem::Ufl { instance } => {
                Ok(UflOracle::new(instance, &self.scenarios)?.first_stage_value(mask))
            }
            Problem::Steiner { graph, policy } => {
                Ok(MonotoneOracle::new(graph, policy, &self.scenarios)?.first_stage_value(mask))
            }
        }
    }

    pub fn evaluate(&self, sol: &RRSolution) -> Result<f64> {
        match &self.problem {
            Problem::Cover { policy, .. } | Problem::Steiner { policy, .. } => {
                Ok(evaluate_objective(sol, policy, &self.scenarios)?.total)
            }
            Problem::Ufl { instance } => Ok(evaluate_ufl(sol, instance, &self.scenarios)?.total),
        }
    }

    pub fn check(&self, sol: &RRSolution) -> FeasibilityReport {
        match &self.problem {
            Problem::Cover { instance, .. } => check_cover(sol, instance, &self.scenarios),
            Problem::Steiner { graph, .. } => check_steiner(sol, graph, &self.scenarios),
            Problem::Ufl { instance } => check_feasible(sol, &self.scenarios, |_, s, open| {
                open.iter().all(|&i| i < instance.num_facilities())
                    && (s.clients.is_empty() || !open.is_empty())
            }),
        }
    }
}

fn check_items(weights: usize, items: usize) -> Result<()> {
    if weights == items {
        Ok(())
    } else {
        Err(Error::Instance(format!(
            "{weights} weights for {items} items"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SET_COVER: &str = r#"{
        "kind": "set_cover", "sigma": 0.5, "lambda": 2.0,
        "num_elements": 2, "sets": [[0], [1], [0, 1]], "weights": [1, 1, 3],
        "scenarios": [{"p": 0.5, "clients": [0]}, {"p": 0.5, "clients": [1]}]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let inst = StochasticInstance::from_json(SET_COVER).unwrap();
        assert_eq!(inst.kind(), ProblemKind::SetCover);
        assert_eq!(inst.num_items(), 3);
        let again = StochasticInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(inst, again);
        assert!((inst.oracle().unwrap().optimal_cost - 1.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_policy_and_kind() {
        assert!(StochasticInstance::from_json(
            &SET_COVER.replace("0.5, \"lambda\"", "1.5, \"lambda\"")
        )
        .is_err());
        assert!(
            StochasticInstance::from_json(&SET_COVER.replace("set_cover", "knapsack")).is_err()
        );
        assert!(StochasticInstance::from_json(
            &SET_COVER.replace("[0, 1]]", "[0]]").replace("[1], ", "")
        )
        .is_err());
    }

    #[test]
    fn all_kinds_parse() {
        let vc = r#"{"kind":"vertex_cover","sigma":0.3,"lambda":3,"num_vertices":3,"edges":[[0,1],[1,2]],
            "weights":[1,1,1],"scenarios":[{"p":1,"clients":[0,1]}]}"#;
        let ufl = r#"{"kind":"ufl","sigma":0.5,"facility_costs":[1],"scenario_costs":[[10]],"distances":[[0]],
            "scenarios":[{"p":1,"clients":[0]}]}"#;
        let st = r#"{"kind":"steiner","sigma":0.5,"lambda":2,"num_vertices":3,"root":0,"edges":[[0,1],[1,2]],
            "weights":[1,2],"scenarios":[{"p":1,"clients":[2]}]}"#;
        for (text, kind, lp) in [
            (vc, ProblemKind::VertexCover, 1.0),
            (ufl, ProblemKind::Ufl, 1.0),
            (st, ProblemKind::Steiner, 3.0),
        ] {
            let inst = StochasticInstance::from_json(text).unwrap();
            assert_eq!(inst.kind(), kind);
            assert!((inst.lp_opt().unwrap() - lp).abs() < 1e-9);
            assert_eq!(
                StochasticInstance::from_json(&inst.to_json()).unwrap(),
                inst
            );
        }
    }
}
