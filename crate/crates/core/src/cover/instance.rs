use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverKind {
    Set,
    Vertex,
}

/// Ground set of elements and a family of covering items.
///
/// For vertex cover the elements are edges and item `v` covers the edges
/// incident to vertex `v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverInstance {
    kind: CoverKind,
    num_elements: usize,
    sets: Vec<Vec<usize>>,
    covering: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl CoverInstance {
    pub fn set_cover(num_elements: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut sets = sets;
        for (s, members) in sets.iter_mut().enumerate() {
            members.sort_unstable();
            members.dedup();
            if let Some(&e) = members.iter().find(|&&e| e >= num_elements) {
                return Err(Error::Instance(format!(
                    "set {s} contains unknown element {e}"
                )));
            }
        }
        let mut covering = vec![Vec::new(); num_elements];
        for (s, members) in sets.iter().enumerate() {
            for &e in members {
                covering[e].push(s);
            }
        }
        Ok(Self {
            kind: CoverKind::Set,
            num_elements,
            sets,
            covering,
            edges: Vec::new(),
        })
    }

    /// Elements are edge indices; items are vertices.
    pub fn vertex_cover(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut sets = vec![Vec::new(); num_vertices];
        let mut covering = Vec::with_capacity(edges.len());
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::Instance(format!("edge {e} has an unknown endpoint")));
            }
            if u == v {
                return Err(Error::Instance(format!("edge {e} is a self-loop")));
            }
            sets[u].push(e);
            sets[v].push(e);
            let mut c = vec![u, v];
            c.sort_unstable();
            covering.push(c);
        }
        Ok(Self {
            kind: CoverKind::Vertex,
            num_elements: edges.len(),
            sets,
            covering,
            edges,
        })
    }

    pub fn kind(&self) -> CoverKind {
        self.kind
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn members(&self, set: usize) -> &[usize] {
        &self.sets[set]
    }

    /// Items covering `element`, ascending.
    pub fn covering(&self, element: usize) -> &[usize] {
        &self.covering[element]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Largest number of items covering one element.
    pub fn max_frequency(&self) -> usize {
        self.covering.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_covered(&self, element: usize, chosen: &BTreeSet<usize>) -> bool {
        self.covering[element].iter().any(|s| chosen.contains(s))
    }

    pub fn covers(&self, elements: &[usize], chosen: &BTreeSet<usize>) -> bool {
        elements.iter().all(|&e| self.is_covered(e, chosen))
    }

    pub fn uncovered(&self, elements: &[usize], chosen: &BTreeSet<usize>) -> Vec<usize> {
        elements
            .iter()
            .copied()
            .filter(|&e| !self.is_covered(e, chosen))
            .collect()
    }

    /// Fails on the first referenced element that is out of range or has no cover.
    pub fn check_coverable(&self, elements: impl IntoIterator<Item = usize>) -> Result<()> {
        for e in elements {
            if e >= self.num_elements {
                return Err(Error::Instance(format!(
                    "scenario references unknown element {e}"
                )));
            }
            if self.covering[e].is_empty() {
                return Err(Error::Uncoverable { element: e });
            }
        }
        Ok(())
    }
}
