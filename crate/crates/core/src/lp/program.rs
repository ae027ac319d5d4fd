use serde::{Deserialize, Serialize};

use super::tag::VarTag;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint<T = f64> {
    pub coeffs: Vec<T>,
    pub sense: Sense,
    pub rhs: T,
}

/// Minimization LP `min c·x` subject to rows and `x >= lower`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram<T = f64> {
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
    lower_bounds: Vec<T>,
    tags: Vec<VarTag>,
}

impl<T: Scalar> Default for LinearProgram<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new() -> Self {
        Self {
            objective: Vec::new(),
            constraints: Vec::new(),
            lower_bounds: Vec::new(),
            tags: Vec::new(),
        }
    }

    /// Builds from dense data; columns get anonymous tags.
    pub fn from_dense(objective: Vec<T>, rows: Vec<(Vec<T>, Sense, T)>) -> Self {
        let mut lp = Self::new();
        for (j, c) in objective.into_iter().enumerate() {
            lp.add_var(VarTag::Var(j), c);
        }
        for (coeffs, sense, rhs) in rows {
            assert_eq!(coeffs.len(), lp.num_vars(), "row arity mismatch");
            lp.constraints.push(Constraint { coeffs, sense, rhs });
        }
        lp
    }

    /// Appends a column with lower bound 0; existing rows get a zero entry.
    pub fn add_var(&mut self, tag: VarTag, cost: T) -> usize {
        self.objective.push(cost);
        self.lower_bounds.push(T::zero());
        self.tags.push(tag);
        for row in &mut self.constraints {
            row.coeffs.push(T::zero());
        }
        self.objective.len() - 1
    }

    /// Appends a row from sparse `(column, coefficient)` terms. Repeated
    /// columns accumulate.
    pub fn add_row(&mut self, terms: &[(usize, T)], sense: Sense, rhs: T) -> usize {
        assert!(rhs.is_finite(), "rhs must be finite");
        let mut coeffs = vec![T::zero(); self.num_vars()];
        for &(j, a) in terms {
            coeffs[j] = coeffs[j] + a;
        }
        self.constraints.push(Constraint { coeffs, sense, rhs });
        self.constraints.len() - 1
    }

    pub fn set_lower_bound(&mut self, var: usize, lb: T) {
        self.lower_bounds[var] = lb;
    }

    pub fn set_cost(&mut self, var: usize, cost: T) {
        self.objective[var] = cost;
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn lower_bounds(&self) -> &[T] {
        &self.lower_bounds
    }

    pub fn tags(&self) -> &[VarTag] {
        &self.tags
    }

    pub fn tag(&self, var: usize) -> VarTag {
        self.tags[var]
    }

    pub fn find(&self, tag: VarTag) -> Option<usize> {
        self.tags.iter().position(|&t| t == tag)
    }

    pub fn evaluate(&self, x: &[T]) -> T {
        self.objective
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (&c, &v)| acc + c * v)
    }

    pub fn row_activity(&self, row: usize, x: &[T]) -> T {
        self.constraints[row]
            .coeffs
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (&a, &v)| acc + a * v)
    }

    /// Largest violation of any row or lower bound at `x` (0 when feasible).
    pub fn max_violation(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        for (i, c) in self.constraints.iter().enumerate() {
            let lhs = self.row_activity(i, x);
            let v = match c.sense {
                Sense::Ge => c.rhs - lhs,
                Sense::Le => lhs - c.rhs,
                Sense::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (&v, &lb) in x.iter().zip(&self.lower_bounds) {
            worst = worst.max(lb - v);
        }
        worst
    }
}
