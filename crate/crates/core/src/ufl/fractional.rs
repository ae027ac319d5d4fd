use serde::{Deserialize, Serialize};

use super::instance::UflInstance;
use crate::error::{Error, Result};
use crate::lp::{build_ufl_lp, solve_optimal, UflLpLayout};
use crate::model::ScenarioSet;

const TOL: f64 = 1e-7;

/// Fractional two-stage facility-location point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalUflSolution {
    /// `y0[i]`
    pub y0: Vec<f64>,
    /// `yk[k][i]`
    pub yk: Vec<Vec<f64>>,
    /// `zk[k][i]`
    pub zk: Vec<Vec<f64>>,
    /// `x[k][i][j]`
    pub x: Vec<Vec<Vec<f64>>>,
}

/// A demanded client in one scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub scenario: usize,
    pub client: usize,
}

/// Demanded pairs ordered by scenario, then client.
pub fn demanded_pairs(scen: &ScenarioSet) -> Vec<Pair> {
    scen.iter()
        .enumerate()
        .flat_map(|(k, s)| {
            s.clients.iter().map(move |&j| Pair {
                scenario: k,
                client: j,
            })
        })
        .collect()
}

impl FractionalUflSolution {
    pub fn from_lp_values(values: &[f64], nf: usize, nc: usize, m: usize) -> Result<Self> {
        let layout = UflLpLayout {
            num_facilities: nf,
            num_clients: nc,
            num_scenarios: m,
        };
        if values.len() != layout.num_vars() {
            return Err(Error::Structure(format!(
                "expected {} LP values, got {}",
                layout.num_vars(),
                values.len()
            )));
        }
        let v = |c: usize| values[c].clamp(0.0, 1.0);
        Ok(Self {
            y0: (0..nf).map(|i| v(layout.y0(i))).collect(),
            yk: (0..m)
                .map(|k| (0..nf).map(|i| v(layout.yk(i, k))).collect())
                .collect(),
            zk: (0..m)
                .map(|k| (0..nf).map(|i| v(layout.zk(i, k))).collect())
                .collect(),
            x: (0..m)
                .map(|k| {
                    (0..nf)
                        .map(|i| (0..nc).map(|j| v(layout.xk(i, j, k))).collect())
                        .collect()
                })
                .collect(),
        })
    }

    /// Solves the two-stage LP; returns the optimum and its value.
    pub fn solve(inst: &UflInstance, scen: &ScenarioSet) -> Result<(Self, f64)> {
        let lp = build_ufl_lp(inst, scen)?;
        let (p, _) = solve_optimal(&lp)?;
        let sol = Self::from_lp_values(
            &p.values,
            inst.num_facilities(),
            inst.num_clients(),
            scen.len(),
        )?;
        Ok((sol, p.objective_value))
    }

    pub fn num_scenarios(&self) -> usize {
        self.yk.len()
    }

    pub fn cost(&self, inst: &UflInstance, scen: &ScenarioSet) -> f64 {
        let sigma = inst.sigma();
        let mut total: f64 = (0..inst.num_facilities())
            .map(|i| sigma * inst.ground_cost(i) * self.y0[i])
            .sum();
        for (k, s) in scen.iter().enumerate() {
            let mut c = 0.0;
            for i in 0..inst.num_facilities() {
                c += (1.0 - sigma) * inst.ground_cost(i) * self.yk[k][i]
                    + inst.scenario_cost(i, k) * self.zk[k][i];
                for &j in &s.clients {
                    c += inst.dist(i, j) * self.x[k][i][j];
                }
            }
            total += s.probability * c;
        }
        total
    }

    /// `Σ_i c_ij x_ij^k`.
    pub fn service_cost(&self, inst: &UflInstance, pair: Pair) -> f64 {
        (0..inst.num_facilities())
            .map(|i| inst.dist(i, pair.client) * self.x[pair.scenario][i][pair.client])
            .sum()
    }

    pub fn check(&self, inst: &UflInstance, scen: &ScenarioSet) -> Result<()> {
        let (nf, nc, m) = (inst.num_facilities(), inst.num_clients(), scen.len());
        let shape_ok = self.y0.len() == nf
            && self.yk.len() == m
            && self.zk.len() == m
            && self.x.len() == m
            && self.yk.iter().chain(&self.zk).all(|r| r.len() == nf)
            && self
                .x
                .iter()
                .all(|xk| xk.len() == nf && xk.iter().all(|r| r.len() == nc));
        if !shape_ok {
            return Err(Error::Structure(
                "fractional facility solution shape mismatch".into(),
            ));
        }
        for k in 0..m {
            for i in 0..nf {
                if self.yk[k][i] > self.y0[i] + TOL {
                    return Err(Error::Structure(format!("yk[{k}][{i}] exceeds y0[{i}]")));
                }
                for j in 0..nc {
                    if self.x[k][i][j] > self.yk[k][i] + self.zk[k][i] + TOL {
                        return Err(Error::Structure(format!(
                            "x[{k}][{i}][{j}] exceeds yk + zk"
                        )));
                    }
                }
            }
        }
        for p in demanded_pairs(scen) {
            let mass: f64 = (0..nf).map(|i| self.x[p.scenario][i][p.client]).sum();
            if mass < 1.0 - TOL {
                return Err(Error::Structure(format!(
                    "client {} under-served in scenario {}",
                    p.client, p.scenario
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Scenario;

    #[test]
    fn solve_roundtrip() {
        let inst = UflInstance::new(
            0.4,
            vec![1.0, 3.0],
            vec![vec![2.0, 3.5], vec![1.5, 6.0]],
            vec![vec![1.0, 2.0, 3.0], vec![3.0, 2.0, 1.0]],
        )
        .unwrap();
        let scen = ScenarioSet::new(vec![
            Scenario::new(0.3, [0, 1]).unwrap(),
            Scenario::new(0.7, [1, 2]).unwrap(),
        ])
        .unwrap();
        let (sol, opt) = FractionalUflSolution::solve(&inst, &scen).unwrap();
        sol.check(&inst, &scen).unwrap();
        assert!((sol.cost(&inst, &scen) - opt).abs() < 1e-9);
    }

    #[test]
    fn pair_order() {
        let scen = ScenarioSet::new(vec![
            Scenario::new(0.5, [2, 0]).unwrap(),
            Scenario::new(0.5, [1]).unwrap(),
        ])
        .unwrap();
        let pairs: Vec<_> = demanded_pairs(&scen)
            .iter()
            .map(|p| (p.scenario, p.client))
            .collect();
        assert_eq!(pairs, vec![(0, 0), (0, 2), (1, 1)]);
    }
}
