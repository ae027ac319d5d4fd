use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::complete::{make_complete, CompleteSolution};
use super::instance::DeterministicUfl;
use crate::error::{Error, Result};
use crate::lp::{build_deterministic_ufl_lp, solve_optimal, DeterministicUflLayout};
use crate::model::{seeded, SeededRng};

/// Complete optimal primal, coverage duals and fractional service costs of
/// a single-stage instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsInput {
    pub complete: CompleteSolution,
    /// Dual of client `j`'s coverage row.
    pub alpha: Vec<f64>,
    /// `C_j = Σ_i c_ij x_ij`.
    pub service: Vec<f64>,
    pub lp_opt: f64,
}

/// Solves the single-stage LP, trims each client's assignment to total
/// exactly 1 (farthest facilities first) and splits facilities into a
/// complete solution.
pub fn prepare_cs(inst: &DeterministicUfl) -> Result<CsInput> {
    let (nf, nc) = (inst.num_facilities(), inst.num_clients());
    let lp = build_deterministic_ufl_lp(inst)?;
    let (p, d) = solve_optimal(&lp)?;
    let layout = DeterministicUflLayout {
        num_facilities: nf,
        num_clients: nc,
    };
    let y: Vec<f64> = (0..nf)
        .map(|i| p.values[layout.y(i)].clamp(0.0, 1.0))
        .collect();
    let mut x: Vec<Vec<f64>> = (0..nf)
        .map(|i| {
            (0..nc)
                .map(|j| p.values[layout.x(i, j)].clamp(0.0, y[i]))
                .collect()
        })
        .collect();
    for j in 0..nc {
        let mut order: Vec<usize> = (0..nf).collect();
        order.sort_by(|&a, &b| inst.dist[b][j].total_cmp(&inst.dist[a][j]).then(b.cmp(&a)));
        let mut excess = (0..nf).map(|i| x[i][j]).sum::<f64>() - 1.0;
        for i in order {
            if excess <= 0.0 {
                break;
            }
            let cut = x[i][j].min(excess);
            x[i][j] -= cut;
            excess -= cut;
        }
    }
    let alpha = (0..nc).map(|j| d.duals[layout.coverage_row(j)]).collect();
    let service = (0..nc)
        .map(|j| (0..nf).map(|i| inst.dist[i][j] * x[i][j]).sum())
        .collect();
    Ok(CsInput {
        complete: make_complete(&y, &x),
        alpha,
        service,
        lp_opt: p.objective_value,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub center: usize,
    /// Copies in the center's support.
    pub copies: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsRounding {
    /// Original facilities with at least one opened copy.
    pub open: BTreeSet<usize>,
    pub open_copies: BTreeSet<usize>,
    pub clusters: Vec<Cluster>,
    /// Client to the cluster center it was attached to.
    pub representative: BTreeMap<usize, usize>,
    /// Client to its nearest open facility.
    pub assignment: BTreeMap<usize, usize>,
    /// `X_j`, the realised connection distance.
    pub connection: BTreeMap<usize, f64>,
}

/// Picks one index with probability proportional to `weights`; lowest
/// positive-weight index when the draw lands on the boundary.
pub(crate) fn categorical(rng: &mut SeededRng, weights: &[f64]) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let mut u = rng.gen::<f64>() * total;
    let mut last = None;
    for (t, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        if u < w {
            return Some(t);
        }
        u -= w;
        last = Some(t);
    }
    last
}

/// Clustered randomized rounding of a complete single-stage solution.
///
/// Clients are taken in increasing `C_j + α_j`; an unattached client
/// becomes a center whose support is its cluster, and every client whose
/// support meets it is attached to it. Each cluster opens exactly one copy
/// drawn with probability `y`; copies outside clusters open independently
/// with probability `y`. Clients connect to the nearest open facility.
pub fn cs_round_deterministic_ufl(
    inst: &DeterministicUfl,
    input: &CsInput,
    seed: u64,
) -> Result<CsRounding> {
    let c = &input.complete;
    if !c.is_complete() {
        return Err(Error::Structure("solution is not complete".into()));
    }
    let nc = inst.num_clients();
    if input.alpha.len() != nc || input.service.len() != nc {
        return Err(Error::Structure(
            "dual or service vector has the wrong length".into(),
        ));
    }
    let clients: Vec<usize> = (0..nc).filter(|&j| inst.demand[j] > 0.0).collect();
    let support: Vec<Vec<usize>> = (0..nc)
        .map(|j| (0..c.num_copies()).filter(|&t| c.x[t][j] > 0.0).collect())
        .collect();
    let mut order = clients.clone();
    let key = |j: usize| input.service[j] + input.alpha[j];
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));

    let mut representative = BTreeMap::new();
    let mut clusters = Vec::new();
    let mut in_cluster = vec![false; c.num_copies()];
    for j in order {
        if representative.contains_key(&j) {
            continue;
        }
        if support[j].is_empty() {
            return Err(Error::Structure(format!(
                "client {j} has no fractional assignment"
            )));
        }
        for &t in &support[j] {
            in_cluster[t] = true;
        }
        for &q in &clients {
            if !representative.contains_key(&q) && support[q].iter().any(|t| support[j].contains(t))
            {
                representative.insert(q, j);
            }
        }
        clusters.push(Cluster {
            center: j,
            copies: support[j].clone(),
        });
    }

    let mut rng = seeded(seed);
    let mut open_copies = BTreeSet::new();
    for cl in &clusters {
        let w: Vec<f64> = cl.copies.iter().map(|&t| c.y[t]).collect();
        let pick = categorical(&mut rng, &w)
            .ok_or_else(|| Error::Structure("cluster with no opening mass".into()))?;
        open_copies.insert(cl.copies[pick]);
    }
    for t in 0..c.num_copies() {
        if !in_cluster[t] && rng.gen::<f64>() < c.y[t] {
            open_copies.insert(t);
        }
    }
    let open: BTreeSet<usize> = open_copies.iter().map(|&t| c.copy_of[t]).collect();
    let mut assignment = BTreeMap::new();
    let mut connection = BTreeMap::new();
    for &j in &clients {
        let (i, d) = open
            .iter()
            .map(|&i| (i, inst.dist[i][j]))
            .fold(None, |best: Option<(usize, f64)>, (i, d)| match best {
                Some((_, bd)) if bd <= d => best,
                _ => Some((i, d)),
            })
            .expect("every cluster opens a facility");
        assignment.insert(j, i);
        connection.insert(j, d);
    }
    Ok(CsRounding {
        open,
        open_copies,
        clusters,
        representative,
        assignment,
        connection,
    })
}
