use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::cs::categorical;
use super::filter5::{deterministic_ufl_approx, nearest_assignment};
use super::fractional::{FractionalUflSolution, Pair};
use super::instance::{DeterministicUfl, UflInstance};
use super::split::{classify_pairs, split_assignment, PairClasses, DEFAULT_THETA};
use super::swamy::{filter_column, FilteredClient};
use crate::error::{Error, Result};
use crate::model::{seeded, RRSolution, ScenarioSet, StageDecision};

/// Cap on redraws of an empty cluster before forcing its largest facility.
pub const MAX_CLUSTER_DRAWS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImprovedParams {
    pub theta: f64,
    /// Filtering level; the ratio `r = 1/gamma`.
    pub gamma: f64,
    /// Filtering radius of the single-stage subroutine.
    pub det_alpha: f64,
}

impl Default for ImprovedParams {
    fn default() -> Self {
        Self {
            theta: DEFAULT_THETA,
            gamma: 1.0 / 1.447,
            det_alpha: 0.4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImprovedCluster {
    pub center: Pair,
    pub facilities: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImprovedOutput {
    pub solution: RRSolution,
    /// Per scenario, client to its nearest open facility.
    pub assignment: Vec<BTreeMap<usize, usize>>,
    pub classes: PairClasses,
    pub clusters: Vec<ImprovedCluster>,
    /// First-stage pair to the index of its cluster.
    pub representative: BTreeMap<Pair, usize>,
    /// Per scenario, the clusters that had to exercise a facility.
    pub active_clusters: Vec<BTreeSet<usize>>,
    /// Clusters whose reservation fell back to the forced facility.
    pub forced_clusters: usize,
}

impl ImprovedOutput {
    /// Exercised facilities of cluster `c` in scenario `k`.
    pub fn exercised_in_cluster(&self, k: usize, c: usize) -> usize {
        let d = &self.solution.per_scenario[k];
        self.clusters[c]
            .facilities
            .iter()
            .filter(|i| d.exercised.contains(i))
            .count()
    }

    /// Every active cluster exercises exactly one facility in every scenario.
    pub fn exactly_one_per_cluster(&self) -> bool {
        self.active_clusters
            .iter()
            .enumerate()
            .all(|(k, act)| act.iter().all(|&c| self.exercised_in_cluster(k, c) == 1))
    }
}

fn check_params(p: &ImprovedParams) -> Result<()> {
    if !(p.theta > 0.0 && p.theta < 1.0) {
        return Err(Error::Parameter(format!(
            "theta = {} must lie in (0,1)",
            p.theta
        )));
    }
    if !(1.0 / 3.0..1.0).contains(&p.gamma) {
        return Err(Error::Parameter(format!(
            "gamma = {} must lie in [1/3, 1)",
            p.gamma
        )));
    }
    if !(p.det_alpha > 0.0 && p.det_alpha < 1.0) {
        return Err(Error::Parameter(format!(
            "alpha = {} must lie in (0,1)",
            p.det_alpha
        )));
    }
    Ok(())
}

/// Clustered randomized rounding.
///
/// Assignments are split into an exercise part `x1 = min(x, yk)` and a
/// recourse part. Pairs with `Σ x1 >= theta` are first-stage: their values
/// are scaled by `1/theta`, filtered at level `gamma`, and clustered
/// greedily by increasing filtered cost. Each cluster reserves facilities
/// independently with probability `ȳ0`, redrawn until nonempty; other
/// facilities are reserved independently. In a scenario, every cluster
/// serving a demanded first-stage pair exercises exactly one reserved
/// facility, drawn with weights `ȳk / ȳ0` (cheapest `f0` when all weights
/// vanish); other reserved facilities are exercised with probability
/// `ȳk / ȳ0`. Second-stage pairs are rounded per scenario by
/// [`deterministic_ufl_approx`] on the recourse part scaled by
/// `1/(1-theta)`; a facility it opens is exercised when reserved, unless
/// that would put a second exercised facility into an active cluster, in
/// which case it is bought at the scenario price. Clients connect to the
/// nearest open facility.
pub fn round_improved(
    sol: &FractionalUflSolution,
    inst: &UflInstance,
    scen: &ScenarioSet,
    params: &ImprovedParams,
    seed: u64,
) -> Result<ImprovedOutput> {
    check_params(params)?;
    inst.check_scenarios(scen)?;
    sol.check(inst, scen)?;
    let (nf, nc) = (inst.num_facilities(), inst.num_clients());
    let (theta, gamma) = (params.theta, params.gamma);
    let split = split_assignment(sol);
    let classes = classify_pairs(&split, scen, theta);

    let scale = theta * gamma;
    let y0_bar: Vec<f64> = sol.y0.iter().map(|v| (v / scale).min(1.0)).collect();
    let yk_bar: Vec<Vec<f64>> = sol
        .yk
        .iter()
        .map(|r| r.iter().map(|v| (v / scale).min(1.0)).collect())
        .collect();

    let mut filtered: BTreeMap<Pair, FilteredClient> = BTreeMap::new();
    for &p in &classes.first_stage {
        let x_hat: Vec<f64> = (0..nf)
            .map(|i| (split.x1[p.scenario][i][p.client] / theta).min(1.0))
            .collect();
        let d: Vec<f64> = (0..nf).map(|i| inst.dist(i, p.client)).collect();
        let mut f = filter_column(&x_hat, &d, gamma)?;
        f.near.sort_unstable();
        filtered.insert(p, f);
    }
    let mut order = classes.first_stage.clone();
    order.sort_by(|a, b| {
        filtered[a]
            .c_gamma
            .total_cmp(&filtered[b].c_gamma)
            .then(a.cmp(b))
    });
    let mut clusters = Vec::new();
    let mut representative = BTreeMap::new();
    let mut cluster_of = vec![None; nf];
    for p in order {
        if representative.contains_key(&p) {
            continue;
        }
        let near = filtered[&p].near.clone();
        let c = clusters.len();
        for &i in &near {
            cluster_of[i] = Some(c);
        }
        for &q in &classes.first_stage {
            if !representative.contains_key(&q)
                && filtered[&q].near.iter().any(|i| near.contains(i))
            {
                representative.insert(q, c);
            }
        }
        clusters.push(ImprovedCluster {
            center: p,
            facilities: near,
        });
    }

    let mut rng = seeded(seed);
    let mut reserved = BTreeSet::new();
    let mut forced_clusters = 0;
    for cl in &clusters {
        let mut drawn = Vec::new();
        for _ in 0..MAX_CLUSTER_DRAWS {
            drawn = cl
                .facilities
                .iter()
                .copied()
                .filter(|&i| rng.gen::<f64>() < y0_bar[i])
                .collect();
            if !drawn.is_empty() {
                break;
            }
        }
        if drawn.is_empty() {
            forced_clusters += 1;
            let best = cl
                .facilities
                .iter()
                .copied()
                .fold(None, |b: Option<usize>, i| match b {
                    Some(b) if y0_bar[b] >= y0_bar[i] => Some(b),
                    _ => Some(i),
                })
                .expect("clusters are nonempty");
            drawn.push(best);
        }
        reserved.extend(drawn);
    }
    for i in 0..nf {
        if cluster_of[i].is_none() && rng.gen::<f64>() < y0_bar[i] {
            reserved.insert(i);
        }
    }

    let mut active_clusters = vec![BTreeSet::new(); scen.len()];
    for (q, &c) in &representative {
        active_clusters[q.scenario].insert(c);
    }
    let mut per_scenario = Vec::with_capacity(scen.len());
    for (k, active) in active_clusters.iter().enumerate() {
        let mut d = StageDecision::default();
        let cond = |i: usize| {
            if y0_bar[i] > 0.0 {
                (yk_bar[k][i] / y0_bar[i]).min(1.0)
            } else {
                0.0
            }
        };
        for &c in active {
            let members: Vec<usize> = clusters[c]
                .facilities
                .iter()
                .copied()
                .filter(|i| reserved.contains(i))
                .collect();
            let w: Vec<f64> = members.iter().map(|&i| cond(i)).collect();
            let pick = match categorical(&mut rng, &w) {
                Some(t) => members[t],
                None => members
                    .iter()
                    .copied()
                    .fold(None, |b: Option<usize>, i| match b {
                        Some(b) if inst.ground_cost(b) <= inst.ground_cost(i) => Some(b),
                        _ => Some(i),
                    })
                    .expect("every cluster holds a reserved facility"),
            };
            d.exercised.insert(pick);
        }
        for &i in &reserved {
            let in_active = cluster_of[i].is_some_and(|c| active.contains(&c));
            if !in_active && rng.gen::<f64>() < cond(i) {
                d.exercised.insert(i);
            }
        }

        let second: Vec<usize> = classes
            .second_stage
            .iter()
            .filter(|p| p.scenario == k)
            .map(|p| p.client)
            .collect();
        if !second.is_empty() {
            let rest = 1.0 - theta;
            let y_tilde: Vec<f64> = (0..nf).map(|i| (sol.zk[k][i] / rest).min(1.0)).collect();
            let mut demand = vec![0.0; nc];
            let mut x_tilde = vec![vec![0.0; nc]; nf];
            for &j in &second {
                demand[j] = 1.0;
                for i in 0..nf {
                    x_tilde[i][j] = (split.x2[k][i][j] / rest).min(y_tilde[i]);
                }
            }
            let sub = DeterministicUfl {
                opening_cost: (0..nf).map(|i| inst.scenario_cost(i, k)).collect(),
                dist: inst.distances().to_vec(),
                demand,
            };
            let r = deterministic_ufl_approx(&sub, &y_tilde, &x_tilde, params.det_alpha)?;
            for i in r.open {
                if d.exercised.contains(&i) {
                    continue;
                }
                let blocks = cluster_of[i].is_some_and(|c| active.contains(&c));
                if reserved.contains(&i) && !blocks {
                    d.exercised.insert(i);
                } else {
                    d.recoursed.insert(i);
                }
            }
        }
        per_scenario.push(d);
    }
    let assignment = nearest_assignment(inst, scen, &per_scenario)?;
    Ok(ImprovedOutput {
        solution: RRSolution {
            reserved,
            per_scenario,
        },
        assignment,
        classes,
        clusters,
        representative,
        active_clusters,
        forced_clusters,
    })
}
