//! Small dense exact linear programming.
//!
//! Two-phase tableau simplex with Bland's pivoting rule over any [`Scalar`].
//! Problems are `maximize c·x` subject to linear rows and `x >= 0`. Sizes are
//! desk-scale; there is no factorization or sparsity handling.

use crate::error::{guard, Result};
use crate::scalar::Scalar;

/// Default cap on both the variable and the constraint count.
pub const DEFAULT_CAP: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub sense: Sense,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    pub fn new(coeffs: Vec<T>, sense: Sense, rhs: T) -> Self {
        Self { coeffs, sense, rhs }
    }

    /// Whether `x` satisfies the row exactly.
    pub fn holds(&self, x: &[T]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
            Sense::Ge => lhs >= self.rhs,
        }
    }
}

/// `maximize objective·x` subject to `constraints`, `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram<T> {
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
}

impl<T: Scalar> LinearProgram<T> {
    /// A program over `vars` variables with a zero objective.
    pub fn new(vars: usize) -> Self {
        Self {
            objective: vec![T::zero(); vars],
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.objective.len()
    }

    pub fn maximize(mut self, objective: Vec<T>) -> Self {
        assert_eq!(objective.len(), self.vars(), "objective length");
        self.objective = objective;
        self
    }

    pub fn add(&mut self, coeffs: Vec<T>, sense: Sense, rhs: T) {
        assert_eq!(coeffs.len(), self.vars(), "constraint length");
        self.constraints.push(Constraint::new(coeffs, sense, rhs));
    }

    /// Whether `x` is non-negative and satisfies every row.
    pub fn is_feasible_point(&self, x: &[T]) -> bool {
        x.len() == self.vars()
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| c.holds(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome<T> {
    pub status: LpStatus,
    /// Optimal value; present iff `status` is `Optimal`.
    pub value: Option<T>,
    /// An optimal vertex; present iff `status` is `Optimal`.
    pub solution: Option<Vec<T>>,
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpOutcome<T>> {
    solve_with_cap(lp, DEFAULT_CAP)
}

pub fn solve_with_cap<T: Scalar>(lp: &LinearProgram<T>, cap: usize) -> Result<LpOutcome<T>> {
    guard("LP variables", lp.vars(), cap)?;
    guard("LP constraints", lp.constraints.len(), cap)?;
    Ok(Tableau::build(lp).run(&lp.objective))
}

/// Phase-one feasibility: an exact point satisfying every row with `x >= 0`,
/// or `None`.
pub fn feasible<T: Scalar>(vars: usize, constraints: &[Constraint<T>]) -> Result<Option<Vec<T>>> {
    let lp = LinearProgram {
        objective: vec![T::zero(); vars],
        constraints: constraints.to_vec(),
    };
    Ok(solve(&lp)?.solution)
}

struct Tableau<T> {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    vars: usize,
    /// Columns at or beyond this index are artificial.
    first_artificial: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let vars = lp.vars();
        // Normalize to non-negative right-hand sides.
        let normalized: Vec<(Vec<T>, Sense, T)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flipped = match c.sense {
                        Sense::Le => Sense::Ge,
                        Sense::Ge => Sense::Le,
                        Sense::Eq => Sense::Eq,
                    };
                    (
                        c.coeffs.iter().map(|v| -v.clone()).collect(),
                        flipped,
                        -c.rhs.clone(),
                    )
                } else {
                    (c.coeffs.clone(), c.sense, c.rhs.clone())
                }
            })
            .collect();
        let slacks = normalized.iter().filter(|c| c.1 != Sense::Eq).count();
        let artificials = normalized.iter().filter(|c| c.1 != Sense::Le).count();
        let first_artificial = vars + slacks;
        let width = first_artificial + artificials + 1;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut slack, mut art) = (vars, first_artificial);
        for (coeffs, sense, rhs) in normalized {
            let mut row = vec![T::zero(); width];
            row[..vars].clone_from_slice(&coeffs);
            match sense {
                Sense::Le => {
                    row[slack] = T::one();
                    basis.push(slack);
                    slack += 1;
                }
                Sense::Ge => {
                    row[slack] = -T::one();
                    slack += 1;
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
                Sense::Eq => {
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
            }
            row[width - 1] = rhs;
            rows.push(row);
        }
        Self {
            rows,
            basis,
            vars,
            first_artificial,
        }
    }

    fn width(&self) -> usize {
        self.rows
            .first()
            .map_or(self.first_artificial + 1, Vec::len)
    }

    fn rhs(&self, r: usize) -> &T {
        self.rows[r].last().expect("rhs column")
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - factor.clone() * pv.clone();
                }
            }
        }
        self.basis[r] = col;
    }

    /// Maximizes `cost·x` over columns `0..limit` from the current basis.
    /// Returns `false` if unbounded.
    fn optimize(&mut self, cost: &[T], limit: usize) -> bool {
        loop {
            // Bland: the lowest-index column with positive reduced cost enters.
            let entering = (0..limit).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[r][j].is_zero() {
                        reduced = reduced - cost[b].clone() * self.rows[r][j].clone();
                    }
                }
                reduced.is_positive()
            });
            let Some(col) = entering else {
                return true;
            };
            // Minimum ratio, ties broken by the lowest basic index.
            let mut leaving: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r).clone() / a.clone();
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[r] < self.basis[*best])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            let Some((r, _)) = leaving else {
                return false;
            };
            self.pivot(r, col);
        }
    }

    fn objective_value(&self, cost: &[T]) -> T {
        self.basis
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (r, &b)| {
                acc + cost[b].clone() * self.rhs(r).clone()
            })
    }

    fn run(mut self, objective: &[T]) -> LpOutcome<T> {
        let width = self.width();
        let columns = width - 1;
        if self.first_artificial < columns {
            let mut phase1 = vec![T::zero(); columns];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = -T::one();
            }
            self.optimize(&phase1, columns);
            if self.objective_value(&phase1).is_negative() {
                return LpOutcome {
                    status: LpStatus::Infeasible,
                    value: None,
                    solution: None,
                };
            }
            // Pivot zero-level artificials out of the basis; drop rows that
            // turn out to be redundant.
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(j) => {
                            self.pivot(r, j);
                            r += 1;
                        }
                        None => {
                            self.rows.remove(r);
                            self.basis.remove(r);
                        }
                    }
                } else {
                    r += 1;
                }
            }
        }
        let mut cost = vec![T::zero(); columns];
        cost[..self.vars].clone_from_slice(objective);
        if !self.optimize(&cost, self.first_artificial) {
            return LpOutcome {
                status: LpStatus::Unbounded,
                value: None,
                solution: None,
            };
        }
        let mut x = vec![T::zero(); self.vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.vars {
                x[b] = self.rhs(r).clone();
            }
        }
        LpOutcome {
            status: LpStatus::Optimal,
            value: Some(dot(objective, &x)),
            solution: Some(x),
        }
    }
}
