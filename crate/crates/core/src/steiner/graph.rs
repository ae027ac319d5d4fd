use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Weight;

/// Connected edge-weighted graph with a root and all-pairs shortest
/// distances under the edge weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricGraph<W = f64> {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<W>,
    root: usize,
    dist: Vec<Vec<W>>,
}

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl<W: Weight> MetricGraph<W> {
    pub fn new(
        num_vertices: usize,
        edges: Vec<(usize, usize)>,
        weights: Vec<W>,
        root: usize,
    ) -> Result<Self> {
        if root >= num_vertices {
            return Err(Error::Instance(format!("root {root} is not a vertex")));
        }
        if edges.len() != weights.len() {
            return Err(Error::Instance(format!(
                "{} edges but {} weights",
                edges.len(),
                weights.len()
            )));
        }
        for (e, (&(u, v), w)) in edges.iter().zip(&weights).enumerate() {
            if u >= num_vertices || v >= num_vertices || u == v {
                return Err(Error::Instance(format!(
                    "edge {e} has invalid endpoints ({u}, {v})"
                )));
            }
            if *w < W::zero() {
                return Err(Error::Instance(format!("edge {e} has negative weight")));
            }
        }
        let mut g = Self {
            num_vertices,
            edges,
            weights,
            root,
            dist: Vec::new(),
        };
        let closure = shortest_paths(num_vertices, &g.edges, |e| g.weights[e]);
        let mut dist = Vec::with_capacity(num_vertices);
        for (u, row) in closure.dist.into_iter().enumerate() {
            let row: Option<Vec<W>> = row.into_iter().collect();
            dist.push(
                row.ok_or_else(|| Error::Instance(format!("graph is disconnected at vertex {u}")))?,
            );
        }
        g.dist = dist;
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn dist(&self, u: usize, v: usize) -> W {
        self.dist[u][v]
    }

    /// Whether `chosen` edges join every terminal to the root.
    pub fn connects(&self, terminals: &[usize], chosen: impl IntoIterator<Item = usize>) -> bool {
        let mut uf = UnionFind::new(self.num_vertices);
        for e in chosen {
            let (u, v) = self.edges[e];
            uf.union(u, v);
        }
        let r = uf.find(self.root);
        terminals
            .iter()
            .all(|&t| t < self.num_vertices && uf.find(t) == r)
    }

    pub fn weight_of<'a>(&self, chosen: impl IntoIterator<Item = &'a usize>) -> W {
        chosen
            .into_iter()
            .fold(W::zero(), |acc, &e| acc + self.weights[e])
    }

    pub fn check_terminals(&self, terminals: &BTreeSet<usize>) -> Result<()> {
        match terminals.iter().find(|&&t| t >= self.num_vertices) {
            Some(&t) => Err(Error::Unreachable(t)),
            None => Ok(()),
        }
    }
}

/// All-pairs distances and, for each pair, the last edge on a shortest path.
pub(crate) struct Closure<W> {
    pub dist: Vec<Vec<Option<W>>>,
    pub last_edge: Vec<Vec<Option<usize>>>,
}

impl<W> Closure<W> {
    /// Edges of the stored shortest `s`-`t` path.
    pub fn path(&self, edges: &[(usize, usize)], s: usize, t: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = t;
        while cur != s {
            let e = self.last_edge[s][cur].expect("path exists between connected vertices");
            out.push(e);
            let (u, v) = edges[e];
            cur = if u == cur { v } else { u };
        }
        out
    }
}

/// Floyd-Warshall under `price`; the first shortest path found is kept.
pub(crate) fn shortest_paths<W: Weight>(
    n: usize,
    edges: &[(usize, usize)],
    price: impl Fn(usize) -> W,
) -> Closure<W> {
    let mut dist: Vec<Vec<Option<W>>> = vec![vec![None; n]; n];
    let mut last_edge = vec![vec![None; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = Some(W::zero());
    }
    for (e, &(u, v)) in edges.iter().enumerate() {
        let w = price(e);
        for (a, b) in [(u, v), (v, u)] {
            if dist[a][b].is_none_or(|d| w < d) {
                dist[a][b] = Some(w);
                last_edge[a][b] = Some(e);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = dist[i][k] else { continue };
            for j in 0..n {
                let Some(dkj) = dist[k][j] else { continue };
                let through = dik + dkj;
                if dist[i][j].is_none_or(|d| through < d) {
                    dist[i][j] = Some(through);
                    last_edge[i][j] = last_edge[k][j];
                }
            }
        }
    }
    Closure { dist, last_edge }
}

#[cfg(test)]
mod tests {
    use num_rational::Ratio;

    use super::*;

    #[test]
    fn path_distances() {
        let g = MetricGraph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![1.0, 1.0, 5.0], 0).unwrap();
        assert_eq!(g.dist(0, 2), 2.0);
        let c = shortest_paths(3, g.edges(), |e| g.weights()[e]);
        let mut p = c.path(g.edges(), 0, 2);
        p.sort_unstable();
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rejects_disconnected_and_bad_edges() {
        assert!(MetricGraph::new(3, vec![(0, 1)], vec![1.0], 0).is_err());
        assert!(MetricGraph::new(2, vec![(0, 0)], vec![1.0], 0).is_err());
        assert!(MetricGraph::new(2, vec![(0, 1)], vec![-1.0], 0).is_err());
        assert!(MetricGraph::new(2, vec![(0, 1)], vec![1.0], 2).is_err());
    }

    #[test]
    fn exact_weights() {
        let w = |n: i64, d: i64| Ratio::new(n, d);
        let g = MetricGraph::new(3, vec![(0, 1), (1, 2)], vec![w(1, 3), w(1, 6)], 0).unwrap();
        assert_eq!(g.dist(0, 2), w(1, 2));
    }

    #[test]
    fn connectivity() {
        let g = MetricGraph::new(4, vec![(0, 1), (1, 2), (2, 3)], vec![1.0; 3], 0).unwrap();
        assert!(g.connects(&[2], [0, 1]));
        assert!(!g.connects(&[3], [0, 1]));
        assert!(g.connects(&[], []));
    }
}
