//! Independent oracles for the acceptance suite.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use probrank::lp::{Constraint, LinearProgram, Sense};
use probrank::{Assignment, Problem, Rational, Scalar};

/// Unique solution of the square system `a x = b`, by Gauss-Jordan
/// elimination.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for c in col..n {
            a[col][c] = &a[col][c] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some(b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Brute {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

fn all_rows(lp: &LinearProgram<Rational>) -> Vec<Constraint<Rational>> {
    let n = lp.vars();
    let mut rows = lp.constraints.clone();
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        rows.push(Constraint::new(e, Sense::Ge, Rational::zero()));
    }
    rows
}

/// Best objective value over all basic feasible points, or `None` if there
/// are none. With `x >= 0` the feasible region is pointed, so no vertex
/// means infeasible.
fn best_vertex(lp: &LinearProgram<Rational>) -> Option<Rational> {
    let n = lp.vars();
    let rows = all_rows(lp);
    let mut best: Option<Rational> = None;
    for subset in (0..rows.len()).combinations(n) {
        let a = subset.iter().map(|&r| rows[r].coeffs.clone()).collect();
        let b = subset.iter().map(|&r| rows[r].rhs.clone()).collect();
        let Some(x) = solve_square(a, b) else {
            continue;
        };
        if !rows.iter().all(|c| c.holds(&x)) {
            continue;
        }
        let v = probrank::lp::dot(&lp.objective, &x);
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best
}

/// Decides an LP by vertex enumeration. Unboundedness is detected through
/// the normalized recession cone `{d >= 0, A d (sense) 0, sum d = 1}`.
pub fn brute_force(lp: &LinearProgram<Rational>) -> Brute {
    let Some(value) = best_vertex(lp) else {
        return Brute::Infeasible;
    };
    let n = lp.vars();
    let mut cone = LinearProgram::new(n).maximize(lp.objective.clone());
    for c in &lp.constraints {
        cone.add(c.coeffs.clone(), c.sense, Rational::zero());
    }
    cone.add(vec![Rational::one(); n], Sense::Eq, Rational::one());
    match best_vertex(&cone) {
        Some(slope) if slope.is_positive() => Brute::Unbounded,
        _ => Brute::Optimal(value),
    }
}

/// Water-filling with speeds: claimant `i` gets `min(d_i, s_i * level)`.
pub fn weighted_waterfill(
    demands: &[Rational],
    speeds: &[Rational],
    capacity: &Rational,
) -> Vec<Rational> {
    let total: Rational = demands.iter().cloned().sum();
    if total <= *capacity {
        return demands.to_vec();
    }
    let mut order: Vec<usize> = (0..demands.len()).collect();
    order.sort_by_key(|&i| &demands[i] / &speeds[i]);
    let mut left = capacity.clone();
    let mut weight: Rational = speeds.iter().cloned().sum();
    let mut level = None;
    for &i in &order {
        let candidate = &left / &weight;
        if demands[i] <= &speeds[i] * &candidate {
            left -= &demands[i];
            weight -= &speeds[i];
        } else {
            level = Some(candidate);
            break;
        }
    }
    let level = level.expect("demand exceeds capacity");
    demands
        .iter()
        .zip(speeds)
        .map(|(d, s)| d.clone().min(s * &level))
        .collect()
}

/// The probabilistic rank procedure with per-agent eating speeds.
pub fn pr_with_speeds(problem: &Problem, speeds: &[Rational]) -> Assignment {
    let (n, m) = (problem.n(), problem.m());
    let mut out = vec![vec![Rational::zero(); m]; n];
    let mut supply: Vec<Rational> = problem
        .quotas()
        .iter()
        .map(|&q| Rational::from_count(q))
        .collect();
    let mut held = vec![Rational::zero(); n];
    for k in 0..m {
        let mut claims: Vec<Vec<usize>> = vec![Vec::new(); m];
        for i in 0..n {
            if held[i] < Rational::one() {
                claims[problem.preference(i).order()[k]].push(i);
            }
        }
        for (o, agents) in claims.iter().enumerate() {
            if agents.is_empty() || supply[o].is_zero() {
                continue;
            }
            let demands: Vec<Rational> =
                agents.iter().map(|&i| Rational::one() - &held[i]).collect();
            let s: Vec<Rational> = agents.iter().map(|&i| speeds[i].clone()).collect();
            let got = weighted_waterfill(&demands, &s, &supply[o]);
            for (&i, g) in agents.iter().zip(got) {
                supply[o] -= &g;
                held[i] += &g;
                out[i][o] += g;
            }
        }
    }
    Assignment::new(out).expect("rectangular")
}

/// Speed 1 for even agent indices, 2 for odd ones.
pub fn alternating_speeds(n: usize) -> Vec<Rational> {
    (0..n).map(|i| Rational::from_count(1 + i % 2)).collect()
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

pub fn matrix(rows: &[[(i64, i64); 4]]) -> Assignment {
    Assignment::new(
        rows.iter()
            .map(|row| row.iter().map(|&(n, d)| r(n, d)).collect())
            .collect(),
    )
    .unwrap()
}
