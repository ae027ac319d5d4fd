use super::program::{LinearProgram, Sense};
use super::tag::VarTag;
use crate::cover::CoverInstance;
use crate::error::{Error, Result};
use crate::model::{CostPolicy, ScenarioSet};
use crate::scalar::Scalar;
use crate::ufl::{DeterministicUfl, UflInstance};

/// Column positions of the stochastic covering LP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverLpLayout {
    pub num_sets: usize,
    pub num_scenarios: usize,
}

impl CoverLpLayout {
    pub fn x(&self, set: usize) -> usize {
        set
    }
    pub fn y(&self, scenario: usize, set: usize) -> usize {
        self.num_sets * (1 + 2 * scenario) + set
    }
    pub fn z(&self, scenario: usize, set: usize) -> usize {
        self.num_sets * (2 + 2 * scenario) + set
    }
    pub fn num_vars(&self) -> usize {
        self.num_sets * (1 + 2 * self.num_scenarios)
    }
}

/// Stochastic covering LP with reservation, exercise and recourse columns.
///
/// Columns are `x[s]`, then per scenario all `y[A,s]` followed by all
/// `z[A,s]` (see [`CoverLpLayout`]). Rows are one coverage row per
/// `(A, e in A)` followed by one linkage row `y[A,s] <= x[s]` per `(A, s)`.
pub fn build_cover_lp<T: Scalar>(
    inst: &CoverInstance,
    policy: &CostPolicy<T>,
    scen: &ScenarioSet,
) -> Result<LinearProgram<T>> {
    let n = inst.num_sets();
    if policy.num_items() != n {
        return Err(Error::Instance(format!(
            "{} weights for {n} sets",
            policy.num_items()
        )));
    }
    for s in scen {
        inst.check_coverable(s.clients.iter().copied())?;
    }
    let layout = CoverLpLayout {
        num_sets: n,
        num_scenarios: scen.len(),
    };
    let sigma = policy.sigma();
    let mut lp = LinearProgram::new();
    for s in 0..n {
        lp.add_var(VarTag::Reserve { set: s }, sigma * policy.weights()[s]);
    }
    for (a, sc) in scen.iter().enumerate() {
        let p = T::of(sc.probability);
        for s in 0..n {
            lp.add_var(
                VarTag::Exercise {
                    scenario: a,
                    set: s,
                },
                (T::one() - sigma) * p * policy.weights()[s],
            );
        }
        for s in 0..n {
            lp.add_var(
                VarTag::Recourse {
                    scenario: a,
                    set: s,
                },
                policy.lambda() * p * policy.weights()[s],
            );
        }
    }
    debug_assert_eq!(lp.num_vars(), layout.num_vars());
    for (a, sc) in scen.iter().enumerate() {
        for &e in &sc.clients {
            let terms: Vec<(usize, T)> = inst
                .covering(e)
                .iter()
                .flat_map(|&s| [(layout.y(a, s), T::one()), (layout.z(a, s), T::one())])
                .collect();
            lp.add_row(&terms, Sense::Ge, T::one());
        }
    }
    for a in 0..scen.len() {
        for s in 0..n {
            lp.add_row(
                &[(layout.y(a, s), T::one()), (layout.x(s), -T::one())],
                Sense::Le,
                T::zero(),
            );
        }
    }
    Ok(lp)
}

/// Column positions of the two-stage facility-location LP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UflLpLayout {
    pub num_facilities: usize,
    pub num_clients: usize,
    pub num_scenarios: usize,
}

impl UflLpLayout {
    fn block(&self) -> usize {
        self.num_facilities * (2 + self.num_clients)
    }
    pub fn y0(&self, i: usize) -> usize {
        i
    }
    pub fn yk(&self, i: usize, k: usize) -> usize {
        self.num_facilities + k * self.block() + i
    }
    pub fn zk(&self, i: usize, k: usize) -> usize {
        self.num_facilities + k * self.block() + self.num_facilities + i
    }
    pub fn xk(&self, i: usize, j: usize, k: usize) -> usize {
        self.num_facilities + k * self.block() + 2 * self.num_facilities + i * self.num_clients + j
    }
    pub fn num_vars(&self) -> usize {
        self.num_facilities + self.num_scenarios * self.block()
    }
}

/// Two-stage facility-location LP.
///
/// `min σ Σ f⁰y⁰ + Σ_k p_k((1-σ) Σ f⁰yᵏ + Σ fᵏzᵏ + Σ d c x)` subject to
/// `Σ_i x_ijᵏ >= d_jᵏ`, `yᵏ <= y⁰`, `x_ijᵏ <= y_iᵏ + z_iᵏ`.
pub fn build_ufl_lp(inst: &UflInstance, scen: &ScenarioSet) -> Result<LinearProgram<f64>> {
    inst.check_scenarios(scen)?;
    let (nf, nc, m) = (inst.num_facilities(), inst.num_clients(), scen.len());
    let layout = UflLpLayout {
        num_facilities: nf,
        num_clients: nc,
        num_scenarios: m,
    };
    let sigma = inst.sigma();
    let mut lp = LinearProgram::new();
    for i in 0..nf {
        lp.add_var(
            VarTag::FacilityReserve { facility: i },
            sigma * inst.ground_cost(i),
        );
    }
    for (k, s) in scen.iter().enumerate() {
        let p = s.probability;
        for i in 0..nf {
            lp.add_var(
                VarTag::FacilityExercise {
                    facility: i,
                    scenario: k,
                },
                p * (1.0 - sigma) * inst.ground_cost(i),
            );
        }
        for i in 0..nf {
            lp.add_var(
                VarTag::FacilityRecourse {
                    facility: i,
                    scenario: k,
                },
                p * inst.scenario_cost(i, k),
            );
        }
        for i in 0..nf {
            for j in 0..nc {
                let d = if s.contains(j) { 1.0 } else { 0.0 };
                lp.add_var(
                    VarTag::Assign {
                        facility: i,
                        client: j,
                        scenario: k,
                    },
                    p * d * inst.dist(i, j),
                );
            }
        }
    }
    debug_assert_eq!(lp.num_vars(), layout.num_vars());
    for (k, s) in scen.iter().enumerate() {
        for j in 0..nc {
            let terms: Vec<_> = (0..nf).map(|i| (layout.xk(i, j, k), 1.0)).collect();
            lp.add_row(&terms, Sense::Ge, if s.contains(j) { 1.0 } else { 0.0 });
        }
    }
    for k in 0..m {
        for i in 0..nf {
            lp.add_row(
                &[(layout.yk(i, k), 1.0), (layout.y0(i), -1.0)],
                Sense::Le,
                0.0,
            );
        }
    }
    for k in 0..m {
        for i in 0..nf {
            for j in 0..nc {
                lp.add_row(
                    &[
                        (layout.xk(i, j, k), 1.0),
                        (layout.yk(i, k), -1.0),
                        (layout.zk(i, k), -1.0),
                    ],
                    Sense::Le,
                    0.0,
                );
            }
        }
    }
    Ok(lp)
}

/// Column positions of the single-stage facility-location LP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeterministicUflLayout {
    pub num_facilities: usize,
    pub num_clients: usize,
}

impl DeterministicUflLayout {
    pub fn y(&self, i: usize) -> usize {
        i
    }
    pub fn x(&self, i: usize, j: usize) -> usize {
        self.num_facilities + i * self.num_clients + j
    }
    /// Row index of client `j`'s coverage row; its dual is `α_j`.
    pub fn coverage_row(&self, j: usize) -> usize {
        j
    }
}

/// `min Σ f y + Σ d c x` s.t. `Σ_i x_ij >= 1`, `x_ij <= y_i`. Coverage rows
/// come first so their duals read off as `α_j`.
pub fn build_deterministic_ufl_lp(inst: &DeterministicUfl) -> Result<LinearProgram<f64>> {
    let (nf, nc) = (inst.num_facilities(), inst.num_clients());
    if inst.dist.len() != nf || inst.dist.iter().any(|r| r.len() != nc) {
        return Err(Error::Instance("distance matrix shape mismatch".into()));
    }
    if nf == 0 && nc > 0 {
        return Err(Error::Instance("clients but no facilities".into()));
    }
    let layout = DeterministicUflLayout {
        num_facilities: nf,
        num_clients: nc,
    };
    let mut lp = LinearProgram::new();
    for i in 0..nf {
        lp.add_var(VarTag::Open { facility: i }, inst.opening_cost[i]);
    }
    for i in 0..nf {
        for j in 0..nc {
            lp.add_var(
                VarTag::Connect {
                    facility: i,
                    client: j,
                },
                inst.demand[j] * inst.dist[i][j],
            );
        }
    }
    for j in 0..nc {
        let terms: Vec<_> = (0..nf).map(|i| (layout.x(i, j), 1.0)).collect();
        lp.add_row(&terms, Sense::Ge, 1.0);
    }
    for i in 0..nf {
        for j in 0..nc {
            lp.add_row(
                &[(layout.x(i, j), 1.0), (layout.y(i), -1.0)],
                Sense::Le,
                0.0,
            );
        }
    }
    Ok(lp)
}
