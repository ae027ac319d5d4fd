use serde::{Deserialize, Serialize};

use super::program::{LinearProgram, Sense};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration cap hit or the final basis failed verification.
    NumericalFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution<T = f64> {
    pub values: Vec<T>,
    pub objective_value: T,
    pub status: LpStatus,
}

impl<T: Scalar> LpSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Row duals `y` and column reduced costs `c - Aᵀy`.
///
/// Sign convention for a minimization: `y >= 0` on `>=` rows, `y <= 0` on
/// `<=` rows, free on equalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSolution<T = f64> {
    pub duals: Vec<T>,
    pub reduced_costs: Vec<T>,
    pub objective_value: T,
}

impl<T: Scalar> DualSolution<T> {
    /// Largest sign or reduced-cost violation (0 when dual feasible).
    pub fn max_violation(&self, lp: &LinearProgram<T>) -> T {
        let mut worst = T::zero();
        for (y, c) in self.duals.iter().zip(lp.constraints()) {
            let v = match c.sense {
                Sense::Ge => -*y,
                Sense::Le => *y,
                Sense::Eq => T::zero(),
            };
            worst = worst.max(v);
        }
        for &r in &self.reduced_costs {
            worst = worst.max(-r);
        }
        worst
    }
}

/// Largest complementary-slackness product over rows and columns.
pub fn complementary_slackness_gap<T: Scalar>(
    lp: &LinearProgram<T>,
    primal: &LpSolution<T>,
    dual: &DualSolution<T>,
) -> T {
    let x = &primal.values;
    let mut worst = T::zero();
    for (i, c) in lp.constraints().iter().enumerate() {
        let slack = lp.row_activity(i, x) - c.rhs;
        worst = worst.max((dual.duals[i] * slack).abs());
    }
    for (j, &lb) in lp.lower_bounds().iter().enumerate() {
        worst = worst.max((dual.reduced_costs[j] * (x[j] - lb)).abs());
    }
    worst
}

/// Solves and insists on an optimal status.
pub fn solve_optimal<T: Scalar>(lp: &LinearProgram<T>) -> Result<(LpSolution<T>, DualSolution<T>)> {
    let (p, d) = solve_lp(lp);
    match p.status {
        LpStatus::Optimal => Ok((p, d)),
        s => Err(Error::LpStatus(s)),
    }
}

/// Two-phase dense primal simplex.
///
/// Dantzig pricing until a run of degenerate pivots is seen, then Bland's
/// rule for the rest of the solve.
pub fn solve_lp<T: Scalar>(lp: &LinearProgram<T>) -> (LpSolution<T>, DualSolution<T>) {
    match Tableau::build(lp).and_then(|t| t.solve(lp)) {
        Ok(out) => out,
        Err(status) => failed(lp, status),
    }
}

fn failed<T: Scalar>(lp: &LinearProgram<T>, status: LpStatus) -> (LpSolution<T>, DualSolution<T>) {
    let objective_value = if status == LpStatus::Unbounded {
        T::neg_infinity()
    } else {
        T::nan()
    };
    (
        LpSolution {
            values: Vec::new(),
            objective_value,
            status,
        },
        DualSolution {
            duals: Vec::new(),
            reduced_costs: vec![T::nan(); lp.num_vars()],
            objective_value: T::nan(),
        },
    )
}

const DEGENERATE_RUN: usize = 50;

struct Tableau<T> {
    m: usize,
    /// structural + slack/surplus + artificial columns
    ncols: usize,
    n_struct: usize,
    /// row-major, `ncols + 1` entries per row, rhs last
    a: Vec<T>,
    basis: Vec<usize>,
    d: Vec<T>,
    can_enter: Vec<bool>,
    is_artificial: Vec<bool>,
    /// column holding the identity entry of each row in the starting basis
    unit_col: Vec<usize>,
    /// -1 where a row was negated to make its rhs nonnegative
    flip: Vec<T>,
    bland: bool,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Result<Self, LpStatus> {
        let n = lp.num_vars();
        let m = lp.num_rows();
        let lb = lp.lower_bounds();

        let mut senses = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut flip = Vec::with_capacity(m);
        for (i, c) in lp.constraints().iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(LpStatus::NumericalFailure);
            }
            // shift x = lb + x'
            let b = c.rhs - lp.row_activity(i, lb);
            if b < T::zero() {
                flip.push(-T::one());
                rhs.push(-b);
                senses.push(match c.sense {
                    Sense::Ge => Sense::Le,
                    Sense::Le => Sense::Ge,
                    Sense::Eq => Sense::Eq,
                });
            } else {
                flip.push(T::one());
                rhs.push(b);
                senses.push(c.sense);
            }
        }

        let n_slack = senses.iter().filter(|s| **s != Sense::Eq).count();
        let n_art = senses.iter().filter(|s| **s != Sense::Le).count();
        let ncols = n + n_slack + n_art;
        let w = ncols + 1;
        let mut a = vec![T::zero(); m * w];
        let mut basis = vec![0; m];
        let mut unit_col = vec![0; m];
        let mut is_artificial = vec![false; ncols];
        let mut next_slack = n;
        let mut next_art = n + n_slack;

        for (i, c) in lp.constraints().iter().enumerate() {
            let row = &mut a[i * w..(i + 1) * w];
            for j in 0..n {
                row[j] = flip[i] * c.coeffs[j];
            }
            row[ncols] = rhs[i];
            match senses[i] {
                Sense::Le => {
                    row[next_slack] = T::one();
                    basis[i] = next_slack;
                    unit_col[i] = next_slack;
                    next_slack += 1;
                }
                Sense::Ge => {
                    row[next_slack] = -T::one();
                    next_slack += 1;
                    row[next_art] = T::one();
                    is_artificial[next_art] = true;
                    basis[i] = next_art;
                    unit_col[i] = next_art;
                    next_art += 1;
                }
                Sense::Eq => {
                    row[next_art] = T::one();
                    is_artificial[next_art] = true;
                    basis[i] = next_art;
                    unit_col[i] = next_art;
                    next_art += 1;
                }
            }
        }

        Ok(Self {
            m,
            ncols,
            n_struct: n,
            a,
            basis,
            d: vec![T::zero(); ncols],
            can_enter: vec![true; ncols],
            is_artificial,
            unit_col,
            flip,
            bland: false,
        })
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.a[i * (self.ncols + 1) + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> T {
        self.at(i, self.ncols)
    }

    fn price(&mut self, cost: &[T]) {
        for j in 0..self.ncols {
            let mut dj = cost[j];
            for i in 0..self.m {
                let a = self.at(i, j);
                if a != T::zero() {
                    dj = dj - cost[self.basis[i]] * a;
                }
            }
            self.d[j] = dj;
        }
    }

    fn objective(&self, cost: &[T]) -> T {
        (0..self.m).fold(T::zero(), |acc, i| acc + cost[self.basis[i]] * self.rhs(i))
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.ncols + 1;
        let piv = self.at(r, q);
        {
            let row = &mut self.a[r * w..(r + 1) * w];
            for v in row.iter_mut() {
                *v = *v / piv;
            }
            row[q] = T::one();
        }
        let pivot_row: Vec<T> = self.a[r * w..(r + 1) * w].to_vec();
        let feas = T::feasibility_tolerance();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * w + q];
            if f == T::zero() {
                continue;
            }
            let row = &mut self.a[i * w..(i + 1) * w];
            for (v, &p) in row.iter_mut().zip(&pivot_row) {
                if p != T::zero() {
                    *v = *v - f * p;
                }
            }
            row[q] = T::zero();
            let b = &mut row[w - 1];
            if *b < T::zero() && *b > -feas {
                *b = T::zero();
            }
        }
        let dq = self.d[q];
        if dq != T::zero() {
            for (dj, &p) in self.d.iter_mut().zip(&pivot_row[..w - 1]) {
                *dj = *dj - dq * p;
            }
            self.d[q] = T::zero();
        }
        self.basis[r] = q;
    }

    fn run(&mut self, cost_scale: T, max_iter: usize) -> Result<(), LpStatus> {
        let opt_tol = T::pivot_tolerance() * cost_scale;
        let piv_tol = T::pivot_tolerance();
        let mut degenerate = 0usize;
        for _ in 0..max_iter {
            let entering = if self.bland {
                (0..self.ncols).find(|&j| self.can_enter[j] && self.d[j] < -opt_tol)
            } else {
                (0..self.ncols)
                    .filter(|&j| self.can_enter[j] && self.d[j] < -opt_tol)
                    .min_by(|&a, &b| {
                        self.d[a]
                            .partial_cmp(&self.d[b])
                            .unwrap_or(std::cmp::Ordering::Equal)
                    })
            };
            let Some(q) = entering else { return Ok(()) };

            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.m {
                let aiq = self.at(i, q);
                if aiq > piv_tol {
                    let ratio = self.rhs(i) / aiq;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) => {
                            let tie = (ratio - best).abs() <= piv_tol * (T::one() + best.abs());
                            if (!tie && ratio < best) || (tie && self.basis[i] < self.basis[r]) {
                                Some((i, ratio))
                            } else {
                                Some((r, best))
                            }
                        }
                    };
                }
            }
            let Some((r, ratio)) = leave else {
                return Err(LpStatus::Unbounded);
            };

            if ratio <= piv_tol {
                degenerate += 1;
                if degenerate >= DEGENERATE_RUN {
                    self.bland = true;
                }
            } else {
                degenerate = 0;
            }
            self.pivot(r, q);
        }
        Err(LpStatus::NumericalFailure)
    }

    fn solve(
        mut self,
        lp: &LinearProgram<T>,
    ) -> Result<(LpSolution<T>, DualSolution<T>), LpStatus> {
        let max_iter = 50_000 + 50 * (self.m + self.ncols);
        let b_scale = (0..self.m).fold(T::one(), |acc, i| acc.max(self.rhs(i)));

        // phase 1
        if self.is_artificial.iter().any(|&a| a) {
            let cost: Vec<T> = self
                .is_artificial
                .iter()
                .map(|&a| if a { T::one() } else { T::zero() })
                .collect();
            self.price(&cost);
            self.run(T::one(), max_iter)?;
            if self.objective(&cost) > T::feasibility_tolerance() * b_scale {
                return Err(LpStatus::Infeasible);
            }
            // drive zero-level artificials out where a structural pivot exists
            for i in 0..self.m {
                if !self.is_artificial[self.basis[i]] {
                    continue;
                }
                let w = self.ncols + 1;
                self.a[i * w + self.ncols] = T::zero();
                let col = (0..self.ncols)
                    .filter(|&j| !self.is_artificial[j])
                    .max_by(|&x, &y| {
                        self.at(i, x)
                            .abs()
                            .partial_cmp(&self.at(i, y).abs())
                            .unwrap_or(std::cmp::Ordering::Equal)
                    })
                    .filter(|&j| self.at(i, j).abs() > T::pivot_tolerance());
                if let Some(j) = col {
                    self.pivot(i, j);
                }
            }
            for j in 0..self.ncols {
                if self.is_artificial[j] {
                    self.can_enter[j] = false;
                }
            }
            self.bland = false;
        }

        // phase 2
        let mut cost = vec![T::zero(); self.ncols];
        cost[..self.n_struct].copy_from_slice(lp.objective());
        let c_scale = lp
            .objective()
            .iter()
            .fold(T::one(), |acc, c| acc.max(c.abs()));
        self.price(&cost);
        self.run(c_scale, max_iter)?;

        let lb = lp.lower_bounds();
        let mut values = lb.to_vec();
        for i in 0..self.m {
            let j = self.basis[i];
            if j < self.n_struct {
                values[j] = lb[j] + self.rhs(i).max(T::zero());
            }
        }
        let rhs_scale = lp
            .constraints()
            .iter()
            .fold(T::one(), |acc, c| acc.max(c.rhs.abs()));
        if lp.max_violation(&values) > T::feasibility_tolerance() * rhs_scale {
            return Err(LpStatus::NumericalFailure);
        }

        let duals: Vec<T> = (0..self.m)
            .map(|i| -self.d[self.unit_col[i]] * self.flip[i])
            .collect();
        let mut reduced_costs = lp.objective().to_vec();
        for (i, c) in lp.constraints().iter().enumerate() {
            if duals[i] == T::zero() {
                continue;
            }
            for (r, &a) in reduced_costs.iter_mut().zip(&c.coeffs) {
                *r = *r - duals[i] * a;
            }
        }
        let dual_objective = lp
            .constraints()
            .iter()
            .zip(&duals)
            .fold(T::zero(), |acc, (c, &y)| acc + y * c.rhs)
            + reduced_costs
                .iter()
                .zip(lb)
                .fold(T::zero(), |acc, (&r, &l)| acc + r * l);

        Ok((
            LpSolution {
                objective_value: lp.evaluate(&values),
                values,
                status: LpStatus::Optimal,
            },
            DualSolution {
                duals,
                reduced_costs,
                objective_value: dual_objective,
            },
        ))
    }
}
