use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::graph::{shortest_paths, MetricGraph, UnionFind};
use crate::error::{Error, Result};
use crate::scalar::Weight;

/// Prim's algorithm from `order[0]` on the complete graph over `order`
/// with distances `d`; ties go to the lowest vertex id, then the lowest
/// parent id. Returns `(vertex, parent)` in insertion order.
fn prim<W: Weight>(order: &[usize], d: impl Fn(usize, usize) -> W) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(order.len().saturating_sub(1));
    let Some((&start, rest)) = order.split_first() else {
        return out;
    };
    let mut best: BTreeMap<usize, (W, usize)> =
        rest.iter().map(|&v| (v, (d(start, v), start))).collect();
    while !best.is_empty() {
        let (&v, &(_, parent)) = best
            .iter()
            .fold(None, |acc: Option<(&usize, &(W, usize))>, cur| match acc {
                Some(a) if a.1 .0 <= cur.1 .0 => Some(a),
                _ => Some(cur),
            })
            .expect("nonempty");
        best.remove(&v);
        out.push((v, parent));
        for (&u, slot) in best.iter_mut() {
            let du = d(v, u);
            if du < slot.0 || (du == slot.0 && v < slot.1) {
                *slot = (du, v);
            }
        }
    }
    out
}

/// Metric-closure MST 2-approximation for the rooted Steiner tree.
///
/// Builds the MST of `terminals ∪ {root}` under shortest-path distances
/// for `price`, expands each tree edge into its path, takes a minimum
/// spanning forest of the expanded edges and prunes non-terminal leaves.
pub fn mst_steiner_approx<W: Weight>(
    g: &MetricGraph<W>,
    terminals: &BTreeSet<usize>,
    price: impl Fn(usize) -> f64,
) -> Result<BTreeSet<usize>> {
    g.check_terminals(terminals)?;
    let root = g.root();
    let mut order = vec![root];
    order.extend(terminals.iter().copied().filter(|&t| t != root));
    if order.len() == 1 {
        return Ok(BTreeSet::new());
    }
    let closure = shortest_paths(g.num_vertices(), g.edges(), &price);
    for &t in &order {
        if closure.dist[root][t].is_none() {
            return Err(Error::Unreachable(t));
        }
    }
    let mut union = BTreeSet::new();
    for (v, parent) in prim(&order, |a, b| {
        closure.dist[a][b].expect("checked reachable")
    }) {
        union.extend(closure.path(g.edges(), parent, v));
    }
    // spanning forest of the expanded edges, cheapest first
    let mut sorted: Vec<usize> = union.into_iter().collect();
    sorted.sort_by(|&a, &b| price(a).total_cmp(&price(b)).then(a.cmp(&b)));
    let mut uf = UnionFind::new(g.num_vertices());
    let mut tree: BTreeSet<usize> = sorted
        .into_iter()
        .filter(|&e| {
            let (u, v) = g.edges()[e];
            uf.union(u, v)
        })
        .collect();
    let keep: BTreeSet<usize> = order.iter().copied().collect();
    loop {
        let mut degree = vec![0usize; g.num_vertices()];
        for &e in &tree {
            let (u, v) = g.edges()[e];
            degree[u] += 1;
            degree[v] += 1;
        }
        let leaf_edges: Vec<usize> = tree
            .iter()
            .copied()
            .filter(|&e| {
                let (u, v) = g.edges()[e];
                (degree[u] == 1 && !keep.contains(&u)) || (degree[v] == 1 && !keep.contains(&v))
            })
            .collect();
        if leaf_edges.is_empty() {
            break;
        }
        for e in leaf_edges {
            tree.remove(&e);
        }
    }
    Ok(tree)
}

/// Per-client shares of one client set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostShareLedger<W = f64> {
    pub shares: BTreeMap<usize, W>,
    /// MST weight of the client set plus the root in the metric closure.
    pub mst_cost: W,
}

impl<W: Weight> CostShareLedger<W> {
    pub fn total(&self) -> W {
        self.shares.values().fold(W::zero(), |a, &b| a + b)
    }
}

/// Half of each client's parent-edge weight in Prim's tree over the
/// metric closure of `clients ∪ {root}`, grown from the root.
pub fn prim_cost_shares<W: Weight>(
    g: &MetricGraph<W>,
    clients: &BTreeSet<usize>,
) -> Result<CostShareLedger<W>> {
    g.check_terminals(clients)?;
    let root = g.root();
    let mut order = vec![root];
    order.extend(clients.iter().copied().filter(|&t| t != root));
    let mut shares = BTreeMap::new();
    let mut mst_cost = W::zero();
    if clients.contains(&root) {
        shares.insert(root, W::zero());
    }
    for (v, parent) in prim(&order, |a, b| g.dist(a, b)) {
        let w = g.dist(parent, v);
        mst_cost = mst_cost + w;
        shares.insert(v, w.half());
    }
    Ok(CostShareLedger { shares, mst_cost })
}

/// Cheapest edge set joining `terminals` to the root, by enumerating all
/// subsets of at most 20 edges. Test and oracle helper.
pub fn exact_steiner(
    g: &MetricGraph<f64>,
    terminals: &BTreeSet<usize>,
    price: impl Fn(usize) -> f64,
) -> Result<f64> {
    let m = g.num_edges();
    if m > 20 {
        return Err(Error::OracleCap(format!(
            "{m} edges exceed the enumeration cap of 20"
        )));
    }
    let ts: Vec<usize> = terminals.iter().copied().collect();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << m) {
        let chosen: Vec<usize> = (0..m).filter(|e| mask >> e & 1 == 1).collect();
        let cost: f64 = chosen.iter().map(|&e| price(e)).sum();
        if cost < best && g.connects(&ts, chosen) {
            best = cost;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use num_rational::Ratio;

    use super::*;

    fn diamond() -> MetricGraph {
        // root 0, terminals 1 2 3 around a cheap hub 4
        MetricGraph::new(
            5,
            vec![
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (2, 3),
                (0, 4),
                (1, 4),
                (2, 4),
                (3, 4),
            ],
            vec![2.0, 2.0, 2.0, 2.0, 2.0, 1.0, 1.0, 1.0, 1.0],
            0,
        )
        .unwrap()
    }

    #[test]
    fn empty_terminals() {
        let g = diamond();
        assert!(mst_steiner_approx(&g, &BTreeSet::new(), |e| g.weights()[e])
            .unwrap()
            .is_empty());
        assert!(
            mst_steiner_approx(&g, &BTreeSet::from([0]), |e| g.weights()[e])
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn single_terminal_is_shortest_path() {
        let g = MetricGraph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![1.0, 1.0, 5.0], 0).unwrap();
        let t = mst_steiner_approx(&g, &BTreeSet::from([2]), |e| g.weights()[e]).unwrap();
        assert_eq!(t, BTreeSet::from([0, 1]));
    }

    #[test]
    fn within_twice_exact() {
        let g = diamond();
        let terms = BTreeSet::from([1, 2, 3]);
        let approx = mst_steiner_approx(&g, &terms, |e| g.weights()[e]).unwrap();
        assert!(g.connects(&[1, 2, 3], approx.iter().copied()));
        let cost = g.weight_of(&approx);
        let exact = exact_steiner(&g, &terms, |e| g.weights()[e]).unwrap();
        assert_eq!(exact, 4.0);
        assert!(cost <= 2.0 * exact);
    }

    #[test]
    fn unknown_terminal() {
        let g = diamond();
        assert!(matches!(
            mst_steiner_approx(&g, &BTreeSet::from([9]), |_| 1.0),
            Err(Error::Unreachable(9))
        ));
    }

    #[test]
    fn shares_on_a_path() {
        let g = MetricGraph::new(3, vec![(0, 1), (1, 2)], vec![1.0, 1.0], 0).unwrap();
        let l = prim_cost_shares(&g, &BTreeSet::from([1, 2])).unwrap();
        assert_eq!(l.shares, BTreeMap::from([(1, 0.5), (2, 0.5)]));
        assert_eq!(l.total(), 1.0);
        assert_eq!(l.mst_cost, 2.0);
    }

    #[test]
    fn shares_single_and_empty() {
        let g = MetricGraph::new(3, vec![(0, 1), (1, 2)], vec![1.5, 1.0], 0).unwrap();
        let l = prim_cost_shares(&g, &BTreeSet::from([2])).unwrap();
        assert_eq!(l.shares[&2], 1.25);
        assert!(prim_cost_shares(&g, &BTreeSet::new())
            .unwrap()
            .shares
            .is_empty());
    }

    #[test]
    fn exact_conservation_with_rationals() {
        let r = |n: i64, d: i64| Ratio::new(n, d);
        let g = MetricGraph::new(
            4,
            vec![(0, 1), (1, 2), (2, 3), (0, 3)],
            vec![r(1, 3), r(2, 7), r(5, 11), r(3, 2)],
            0,
        )
        .unwrap();
        for mask in 0u32..16 {
            let k: BTreeSet<usize> = (0..4).filter(|v| mask >> v & 1 == 1).collect();
            let l = prim_cost_shares(&g, &k).unwrap();
            assert_eq!(l.total() * r(2, 1), l.mst_cost);
        }
    }

    #[test]
    fn mst_heuristic_is_not_monotone() {
        // adding c lets the tree route through it, dropping the cost from 4 to 3.3
        let g = MetricGraph::new(
            4,
            vec![(0, 1), (0, 2), (1, 2), (3, 0), (3, 1), (3, 2)],
            vec![2.0, 2.0, 2.0, 1.1, 1.1, 1.1],
            0,
        )
        .unwrap();
        let price = |e: usize| g.weights()[e];
        let without = g.weight_of(&mst_steiner_approx(&g, &BTreeSet::from([1, 2]), price).unwrap());
        let with = g.weight_of(&mst_steiner_approx(&g, &BTreeSet::from([1, 2, 3]), price).unwrap());
        assert_eq!(without, 4.0);
        assert!((with - 3.3).abs() < 1e-12);
    }
}
