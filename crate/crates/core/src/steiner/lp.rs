use std::collections::BTreeMap;

use super::graph::MetricGraph;
use crate::cover::{CoverInstance, FractionalCoverSolution};
use crate::error::{Error, Result};
use crate::model::{CostPolicy, Scenario, ScenarioSet};

/// Largest graph the cut formulation will enumerate.
pub const MAX_CUT_LP_VERTICES: usize = 12;

/// Recasts connectivity as covering: each vertex set `S` avoiding the root
/// becomes an element, covered by the edges crossing it. A scenario demands
/// every `S` that holds one of its terminals.
pub fn cut_cover_instance(
    g: &MetricGraph,
    scen: &ScenarioSet,
) -> Result<(CoverInstance, ScenarioSet)> {
    let n = g.num_vertices();
    if n > MAX_CUT_LP_VERTICES {
        return Err(Error::OracleCap(format!(
            "{n} vertices exceed the cut LP cap of {MAX_CUT_LP_VERTICES}"
        )));
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != g.root()).collect();
    let inside = |cut: u32, v: usize| {
        others
            .iter()
            .position(|&o| o == v)
            .is_some_and(|b| cut >> b & 1 == 1)
    };
    let mut ids: BTreeMap<u32, usize> = BTreeMap::new();
    let mut mapped = Vec::with_capacity(scen.len());
    for s in scen.iter() {
        let mut elements = Vec::new();
        for cut in 1..1u32 << others.len() {
            if s.clients.iter().any(|&t| inside(cut, t)) {
                let next = ids.len();
                elements.push(*ids.entry(cut).or_insert(next));
            }
        }
        mapped.push(Scenario::new(s.probability, elements)?);
    }
    let mut sets = vec![Vec::new(); g.num_edges()];
    for (&cut, &id) in &ids {
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if inside(cut, u) != inside(cut, v) {
                sets[e].push(id);
            }
        }
    }
    let scen = if scen.is_empty() {
        ScenarioSet::empty()
    } else {
        ScenarioSet::new(mapped)?
    };
    Ok((CoverInstance::set_cover(ids.len(), sets)?, scen))
}

/// Optimum of the two-stage cut relaxation, a lower bound on any tree solution.
pub fn cut_lp_bound(g: &MetricGraph, policy: &CostPolicy, scen: &ScenarioSet) -> Result<f64> {
    for s in scen.iter() {
        g.check_terminals(&s.clients.iter().copied().collect())?;
    }
    let (inst, cut_scen) = cut_cover_instance(g, scen)?;
    Ok(FractionalCoverSolution::solve(&inst, policy, &cut_scen)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::MonotoneOracle;

    #[test]
    fn path_needs_every_edge() {
        let g = MetricGraph::new(3, vec![(0, 1), (1, 2)], vec![1.0, 2.0], 0).unwrap();
        let policy = CostPolicy::new(0.5, 2.0, vec![1.0, 2.0]).unwrap();
        let lp = cut_lp_bound(&g, &policy, &ScenarioSet::certain([2]).unwrap()).unwrap();
        assert!((lp - 3.0).abs() < 1e-9);
    }

    #[test]
    fn below_the_oracle() {
        let g = MetricGraph::new(
            5,
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4), (0, 4)],
            vec![1.0, 1.5, 1.0, 2.0, 1.0, 1.0, 3.0],
            0,
        )
        .unwrap();
        let policy = CostPolicy::new(0.4, 2.5, g.weights().to_vec()).unwrap();
        let scen = ScenarioSet::new(vec![
            Scenario::new(0.6, [3, 4]).unwrap(),
            Scenario::new(0.4, [2]).unwrap(),
        ])
        .unwrap();
        let lp = cut_lp_bound(&g, &policy, &scen).unwrap();
        let opt = MonotoneOracle::new(&g, &policy, &scen)
            .unwrap()
            .solve()
            .optimal_cost;
        assert!(lp > 0.0 && lp <= opt + 1e-7, "{lp} vs {opt}");
    }
}
