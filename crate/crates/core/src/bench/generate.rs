use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cover::CoverInstance;
use crate::error::{Error, Result};
use crate::instance::{Problem, ProblemKind, StochasticInstance};
use crate::model::{seeded, CostPolicy, Scenario, ScenarioSet, SeededRng};
use crate::steiner::MetricGraph;
use crate::ufl::UflInstance;

/// Generator knobs. `n` counts elements, vertices or clients depending on
/// the kind; `m` counts sets or facilities and is ignored otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub kind: ProblemKind,
    pub n: usize,
    pub m: usize,
    /// Set membership or extra-edge probability.
    pub density: f64,
    pub scenarios: usize,
    /// Probability that a client appears in a scenario.
    pub inclusion: f64,
    pub sigma: f64,
    pub lambda: f64,
    #[serde(default)]
    pub metric: UflMetric,
}

/// Facility-client distances for generated facility location.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UflMetric {
    /// Random points in the unit square.
    #[default]
    Euclidean,
    /// Each client sits at distance 1 from two random facilities and 3 from
    /// the rest; LP optima are often fractional.
    Incidence,
}

impl GenParams {
    pub fn new(kind: ProblemKind, n: usize, m: usize, scenarios: usize) -> Self {
        Self {
            kind,
            n,
            m,
            density: 0.4,
            scenarios,
            inclusion: 0.5,
            sigma: 0.5,
            lambda: 2.0,
            metric: UflMetric::Euclidean,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(Error::Parameter(format!(
                "sigma = {} outside (0,1)",
                self.sigma
            )));
        }
        if !(self.lambda > 1.0) {
            return Err(Error::Parameter(format!(
                "lambda = {} must exceed 1",
                self.lambda
            )));
        }
        for (name, v) in [("density", self.density), ("inclusion", self.inclusion)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Parameter(format!("{name} = {v} outside [0,1]")));
            }
        }
        let min_n = if self.kind == ProblemKind::Steiner || self.kind == ProblemKind::VertexCover {
            2
        } else {
            1
        };
        if self.n < min_n {
            return Err(Error::Parameter(format!(
                "n = {} too small for {}",
                self.n, self.kind
            )));
        }
        if matches!(self.kind, ProblemKind::SetCover | ProblemKind::Ufl) && self.m == 0 {
            return Err(Error::Parameter(format!("{} needs m >= 1", self.kind)));
        }
        Ok(())
    }
}

pub fn generate_instance(params: &GenParams, seed: u64) -> Result<StochasticInstance> {
    params.validate()?;
    let mut rng = seeded(seed);
    let p = params;
    let (problem, num_clients, first_client) = match p.kind {
        ProblemKind::SetCover => {
            let mut sets = vec![Vec::new(); p.m];
            // every element lands in at least two sets (when m allows) so the
            // LP has room to split
            let floor = p.m.min(2);
            for e in 0..p.n {
                let mut hits: Vec<usize> = (0..p.m).filter(|_| rng.gen_bool(p.density)).collect();
                while hits.len() < floor {
                    let s = rng.gen_range(0..p.m);
                    if !hits.contains(&s) {
                        hits.push(s);
                    }
                }
                for s in hits {
                    sets[s].push(e);
                }
            }
            let weights = integer_weights(&mut rng, p.m);
            let problem = Problem::Cover {
                instance: CoverInstance::set_cover(p.n, sets)?,
                policy: CostPolicy::new(p.sigma, p.lambda, weights)?,
            };
            (problem, p.n, 0)
        }
        ProblemKind::VertexCover => {
            let mut edges = Vec::new();
            for u in 0..p.n {
                for v in u + 1..p.n {
                    if rng.gen_bool(p.density) {
                        edges.push((u, v));
                    }
                }
            }
            if edges.is_empty() {
                edges.push((0, 1));
            }
            let ne = edges.len();
            let weights = integer_weights(&mut rng, p.n);
            let problem = Problem::Cover {
                instance: CoverInstance::vertex_cover(p.n, edges)?,
                policy: CostPolicy::new(p.sigma, p.lambda, weights)?,
            };
            (problem, ne, 0)
        }
        ProblemKind::Ufl => {
            let (dist, ground) = match p.metric {
                UflMetric::Euclidean => {
                    let point = |rng: &mut SeededRng| (rng.gen::<f64>(), rng.gen::<f64>());
                    let facilities: Vec<_> = (0..p.m).map(|_| point(&mut rng)).collect();
                    let clients: Vec<_> = (0..p.n).map(|_| point(&mut rng)).collect();
                    let dist = facilities
                        .iter()
                        .map(|f| {
                            clients
                                .iter()
                                .map(|c| ((f.0 - c.0).powi(2) + (f.1 - c.1).powi(2)).sqrt())
                                .collect()
                        })
                        .collect();
                    (
                        dist,
                        (0..p.m)
                            .map(|_| rng.gen_range(0.3..0.9))
                            .collect::<Vec<f64>>(),
                    )
                }
                UflMetric::Incidence => {
                    let mut dist = vec![vec![3.0; p.n]; p.m];
                    for j in 0..p.n {
                        for i in rand::seq::index::sample(&mut rng, p.m, p.m.min(2)) {
                            dist[i][j] = 1.0;
                        }
                    }
                    (dist, (0..p.m).map(|_| rng.gen_range(1.0..3.0)).collect())
                }
            };
            let scenario_costs = (0..p.scenarios)
                .map(|_| {
                    ground
                        .iter()
                        .map(|f| f * (1.0 + (p.lambda - 1.0) * (1.0 - rng.gen::<f64>())))
                        .collect()
                })
                .collect();
            (
                Problem::Ufl {
                    instance: UflInstance::new(p.sigma, ground, scenario_costs, dist)?,
                },
                p.n,
                0,
            )
        }
        ProblemKind::Steiner => {
            let mut edges = Vec::new();
            for v in 1..p.n {
                edges.push((rng.gen_range(0..v), v));
            }
            for u in 0..p.n {
                for v in u + 1..p.n {
                    if !edges.contains(&(u, v)) && rng.gen_bool(p.density) {
                        edges.push((u, v));
                    }
                }
            }
            let weights = integer_weights(&mut rng, edges.len());
            let policy = CostPolicy::new(p.sigma, p.lambda, weights.clone())?;
            (
                Problem::Steiner {
                    graph: MetricGraph::new(p.n, edges, weights, 0)?,
                    policy,
                },
                p.n,
                1,
            )
        }
    };
    let scenarios = random_scenarios(
        &mut rng,
        p.scenarios,
        first_client..num_clients,
        p.inclusion,
    )?;
    StochasticInstance::new(problem, scenarios)
}

fn integer_weights(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(1..=4) as f64).collect()
}

/// Each client joins independently; empty draws get one uniform client.
fn random_scenarios(
    rng: &mut SeededRng,
    count: usize,
    clients: std::ops::Range<usize>,
    inclusion: f64,
) -> Result<ScenarioSet> {
    if count == 0 {
        return Ok(ScenarioSet::empty());
    }
    let raw: Vec<(f64, Vec<usize>)> = (0..count)
        .map(|_| {
            let mut members: Vec<usize> = clients
                .clone()
                .filter(|_| rng.gen_bool(inclusion))
                .collect();
            if members.is_empty() && !clients.is_empty() {
                members.push(rng.gen_range(clients.clone()));
            }
            (rng.gen_range(1.0..2.0), members)
        })
        .collect();
    let total: f64 = raw.iter().map(|r| r.0).sum();
    ScenarioSet::new(
        raw.into_iter()
            .map(|(w, c)| Scenario::new(w / total, c))
            .collect::<Result<Vec<_>>>()?,
    )
}
