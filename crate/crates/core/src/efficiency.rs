//! Global efficiency notions and the generalized Birkhoff-von Neumann
//! decomposition.
//!
//! The LP oracles decide the definitions directly over the feasible
//! assignment polytope using [`crate::lp`]; [`sd_efficient_cycle_check`] is
//! the combinatorial fast path cross-validated against
//! [`sd_efficient_lp_oracle`].

use crate::axioms::{non_wasteful, verdict_from, Axiom, AxiomVerdict, CycleStep, Witness};
use crate::error::{guard, Error, Result};
use crate::lp::{self, dot, LinearProgram, LpStatus, Sense};
use crate::model::{
    cumulative, validate_assignment, DeterministicAssignment, Problem, RandomAssignment,
};
use crate::scalar::Scalar;
use std::sync::OnceLock;

/// Size limits for brute-force and LP oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_agents: usize,
    pub max_objects: usize,
    pub max_quota: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Self {
            max_agents: 5,
            max_objects: 5,
            max_quota: 3,
        }
    }
}

impl Guard {
    pub fn unbounded() -> Self {
        UNBOUNDED
    }

    pub fn check(&self, problem: &Problem) -> Result<()> {
        guard("agents", problem.n(), self.max_agents)?;
        guard("objects", problem.m(), self.max_objects)?;
        guard(
            "largest quota",
            problem.quotas().iter().copied().max().unwrap_or(0),
            self.max_quota,
        )
    }
}

/// `N(k)`: total expected mass of agents receiving a `k`-th or better choice,
/// for `k = 1..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankDistribution<T>(pub Vec<T>);

impl<T: Scalar> RankDistribution<T> {
    pub fn values(&self) -> &[T] {
        &self.0
    }

    /// Componentwise `>=` with at least one strict coordinate.
    pub fn dominates(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b) && self.0 != other.0
    }
}

pub fn rank_distribution<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
) -> RankDistribution<T> {
    let m = problem.m();
    let mut totals = vec![T::zero(); m];
    for i in 0..problem.n() {
        for (k, c) in cumulative(matrix.row(i), problem.preference(i))
            .into_iter()
            .enumerate()
        {
            totals[k] = totals[k].clone() + c;
        }
    }
    RankDistribution(totals)
}

/// `first` rank-dominates `second`.
pub fn rank_dominates<T: Scalar>(
    problem: &Problem,
    first: &RandomAssignment<T>,
    second: &RandomAssignment<T>,
) -> bool {
    rank_distribution(problem, first).dominates(&rank_distribution(problem, second))
}

/// sd-efficiency by its combinatorial characterization: non-wasteful, and the
/// relation "some holder of `a` prefers `b`" has no cycle over objects.
pub fn sd_efficient_cycle_check<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
) -> AxiomVerdict<T> {
    let waste = non_wasteful(problem, matrix);
    if let Some(w) = waste.witness {
        return AxiomVerdict::fail(Axiom::SdEfficient, w);
    }
    let m = problem.m();
    // edges[a][b] = an agent holding a positive share of a who prefers b.
    let mut edges: Vec<Vec<Option<usize>>> = vec![vec![None; m]; m];
    for i in 0..problem.n() {
        let pref = problem.preference(i);
        for a in 0..m {
            if matrix.get(i, a).is_positive() {
                for &b in pref.order().iter().take_while(|&&b| b != a) {
                    edges[a][b].get_or_insert(i);
                }
            }
        }
    }
    verdict_from(
        Axiom::SdEfficient,
        find_cycle(&edges).map(|steps| Witness::TradingCycle { steps }),
    )
}

fn find_cycle(edges: &[Vec<Option<usize>>]) -> Option<Vec<CycleStep>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    fn visit(
        a: usize,
        edges: &[Vec<Option<usize>>],
        marks: &mut [Mark],
        stack: &mut Vec<usize>,
    ) -> Option<usize> {
        marks[a] = Mark::Open;
        stack.push(a);
        for b in 0..edges.len() {
            if edges[a][b].is_none() {
                continue;
            }
            match marks[b] {
                Mark::Open => return Some(b),
                Mark::New => {
                    if let Some(start) = visit(b, edges, marks, stack) {
                        return Some(start);
                    }
                }
                Mark::Done => {}
            }
        }
        stack.pop();
        marks[a] = Mark::Done;
        None
    }
    let m = edges.len();
    let mut marks = vec![Mark::New; m];
    for a in 0..m {
        if marks[a] != Mark::New {
            continue;
        }
        let mut stack = Vec::new();
        if let Some(start) = visit(a, edges, &mut marks, &mut stack) {
            let pos = stack.iter().position(|&x| x == start).expect("on stack");
            let cycle = &stack[pos..];
            return Some(
                cycle
                    .iter()
                    .enumerate()
                    .map(|(t, &obj)| {
                        let next = cycle[(t + 1) % cycle.len()];
                        CycleStep {
                            agent: edges[obj][next].expect("edge"),
                            object: obj,
                        }
                    })
                    .collect(),
            );
        }
    }
    None
}

/// Variables `x[i * m + a]` with rows summing to one and columns within
/// quota.
fn feasibility_program<T: Scalar>(problem: &Problem) -> LinearProgram<T> {
    let (n, m) = (problem.n(), problem.m());
    let mut lp = LinearProgram::new(n * m);
    for i in 0..n {
        let mut c = vec![T::zero(); n * m];
        for v in &mut c[i * m..(i + 1) * m] {
            *v = T::one();
        }
        lp.add(c, Sense::Eq, T::one());
    }
    for a in 0..m {
        let mut c = vec![T::zero(); n * m];
        for i in 0..n {
            c[i * m + a] = T::one();
        }
        lp.add(c, Sense::Le, T::from_count(problem.quota(a)));
    }
    lp
}

fn to_matrix<T: Scalar>(x: Vec<T>, m: usize) -> RandomAssignment<T> {
    RandomAssignment::new(x.chunks(m).map(<[T]>::to_vec).collect::<Vec<_>>()).expect("rectangular")
}

fn solve_optimal<T: Scalar>(lp: &LinearProgram<T>) -> Result<(T, Vec<T>)> {
    let out = lp::solve(lp)?;
    match out.status {
        LpStatus::Optimal => Ok((out.value.expect("value"), out.solution.expect("solution"))),
        status => Err(Error::Internal(format!(
            "bounded feasible program reported {status:?}"
        ))),
    }
}

fn check_input<T: Scalar>(problem: &Problem, matrix: &RandomAssignment<T>) -> Result<()> {
    let violations = validate_assignment(problem, matrix);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidAssignment(violations))
    }
}

/// sd-efficiency decided from the definition: is there a feasible assignment,
/// different from `matrix`, whose every row weakly dominates `matrix`'s?
///
/// Since rows sum to one, such an assignment exists iff some cumulative share
/// can be raised while none is lowered; one LP maximizing the total of all
/// cumulative shares decides this.
pub fn sd_efficient_lp_oracle<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
    limits: &Guard,
) -> Result<AxiomVerdict<T>> {
    limits.check(problem)?;
    check_input(problem, matrix)?;
    let (n, m) = (problem.n(), problem.m());
    let mut lp = feasibility_program::<T>(problem);
    let mut objective = vec![T::zero(); n * m];
    let mut baseline = T::zero();
    let mut cums = Vec::with_capacity(n);
    for i in 0..n {
        let pref = problem.preference(i);
        let cum = cumulative(matrix.row(i), pref);
        for k in 1..m {
            let mut c = vec![T::zero(); n * m];
            for &a in &pref.order()[..k] {
                c[i * m + a] = T::one();
                objective[i * m + a] = objective[i * m + a].clone() + T::one();
            }
            lp.add(c, Sense::Ge, cum[k - 1].clone());
            baseline = baseline + cum[k - 1].clone();
        }
        cums.push(cum);
    }
    let lp = lp.maximize(objective);
    let (best, x) = solve_optimal(&lp)?;
    if best <= baseline {
        return Ok(AxiomVerdict::pass(Axiom::SdEfficient));
    }
    let by = to_matrix(x, m);
    for (i, cum) in cums.iter().enumerate() {
        let improved = cumulative(by.row(i), problem.preference(i));
        if let Some(k) = (0..m).find(|&k| improved[k] > cum[k]) {
            return Ok(AxiomVerdict::fail(
                Axiom::SdEfficient,
                Witness::SdDominated {
                    object: problem.preference(i).order()[k],
                    agent: i,
                    improved: improved[k].clone(),
                    original: cum[k].clone(),
                    by,
                },
            ));
        }
    }
    Err(Error::Internal(
        "sd oracle improved the total without improving any row".into(),
    ))
}

/// Rank efficiency decided by one LP over the feasible polytope: maximize
/// `sum_k N'(k)` subject to `N'(k) >= N(k)` for all `k`.
pub fn rank_efficient_check<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
    limits: &Guard,
) -> Result<AxiomVerdict<T>> {
    limits.check(problem)?;
    check_input(problem, matrix)?;
    let (n, m) = (problem.n(), problem.m());
    let current = rank_distribution(problem, matrix);
    let mut lp = feasibility_program::<T>(problem);
    let mut objective = vec![T::zero(); n * m];
    for k in 1..m {
        let mut c = vec![T::zero(); n * m];
        for i in 0..n {
            for &a in &problem.preference(i).order()[..k] {
                c[i * m + a] = T::one();
                objective[i * m + a] = objective[i * m + a].clone() + T::one();
            }
        }
        lp.add(c, Sense::Ge, current.0[k - 1].clone());
    }
    let baseline: T = current.0[..m.saturating_sub(1)].iter().cloned().sum();
    let lp = lp.maximize(objective);
    let (best, x) = solve_optimal(&lp)?;
    if best <= baseline {
        return Ok(AxiomVerdict::pass(Axiom::RankEfficient));
    }
    let by = to_matrix(x, m);
    let by_distribution = rank_distribution(problem, &by).0;
    Ok(AxiomVerdict::fail(
        Axiom::RankEfficient,
        Witness::RankDominated {
            by,
            by_distribution,
            distribution: current.0,
        },
    ))
}

/// Every feasible deterministic assignment, in lexicographic order.
pub fn deterministic_assignments(
    problem: &Problem,
    limits: &Guard,
) -> Result<Vec<DeterministicAssignment>> {
    limits.check(problem)?;
    let (n, m) = (problem.n(), problem.m());
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut left = problem.quotas().to_vec();
    fn rec(
        m: usize,
        n: usize,
        current: &mut Vec<usize>,
        left: &mut [usize],
        out: &mut Vec<DeterministicAssignment>,
    ) {
        if current.len() == n {
            out.push(DeterministicAssignment::new(current.clone(), m).expect("in range"));
            return;
        }
        for a in 0..m {
            if left[a] > 0 {
                left[a] -= 1;
                current.push(a);
                rec(m, n, current, left, out);
                current.pop();
                left[a] += 1;
            }
        }
    }
    rec(m, n, &mut current, &mut left, &mut out);
    Ok(out)
}

/// `by` makes every agent weakly better off and someone strictly.
pub fn pareto_improves(
    problem: &Problem,
    by: &DeterministicAssignment,
    d: &DeterministicAssignment,
) -> bool {
    let mut strict = false;
    for i in 0..problem.n() {
        let pref = problem.preference(i);
        let (new, old) = (by.object_of(i), d.object_of(i));
        if pref.prefers(old, new) {
            return false;
        }
        strict |= new != old;
    }
    strict
}

const UNBOUNDED: Guard = Guard {
    max_agents: usize::MAX,
    max_objects: usize::MAX,
    max_quota: usize::MAX,
};

fn pareto_filter(
    problem: &Problem,
    all: &[DeterministicAssignment],
) -> Vec<DeterministicAssignment> {
    all.iter()
        .filter(|d| !all.iter().any(|other| pareto_improves(problem, other, d)))
        .cloned()
        .collect()
}

/// Brute-force Pareto efficiency over all feasible deterministic assignments
/// (no size guard; callers bound the instance).
pub fn is_pareto_efficient_brute(problem: &Problem, d: &DeterministicAssignment) -> bool {
    deterministic_assignments(problem, &UNBOUNDED)
        .expect("unbounded guard")
        .iter()
        .all(|other| !pareto_improves(problem, other, d))
}

/// Every Pareto efficient deterministic assignment (no size guard).
pub fn pareto_set_brute(problem: &Problem) -> Vec<DeterministicAssignment> {
    pareto_filter(
        problem,
        &deterministic_assignments(problem, &UNBOUNDED).expect("unbounded guard"),
    )
}

pub fn pareto_efficient<T: Scalar>(
    problem: &Problem,
    d: &DeterministicAssignment,
    limits: &Guard,
) -> Result<AxiomVerdict<T>> {
    let all = deterministic_assignments(problem, limits)?;
    Ok(verdict_from(
        Axiom::ParetoEfficient,
        all.into_iter()
            .find(|other| pareto_improves(problem, other, d))
            .map(|by| Witness::ParetoImproved { by }),
    ))
}

/// Per-problem oracle context; caches the Pareto efficient set so repeated
/// ex post checks on the same problem enumerate it once.
pub struct EfficiencyContext<'a> {
    problem: &'a Problem,
    limits: Guard,
    pareto: OnceLock<Vec<DeterministicAssignment>>,
}

impl<'a> EfficiencyContext<'a> {
    pub fn new(problem: &'a Problem, limits: Guard) -> Self {
        Self {
            problem,
            limits,
            pareto: OnceLock::new(),
        }
    }

    pub fn problem(&self) -> &Problem {
        self.problem
    }

    pub fn limits(&self) -> Guard {
        self.limits
    }

    pub fn pareto_efficient_assignments(&self) -> Result<&[DeterministicAssignment]> {
        if let Some(cached) = self.pareto.get() {
            return Ok(cached);
        }
        let all = deterministic_assignments(self.problem, &self.limits)?;
        let efficient = pareto_filter(self.problem, &all);
        Ok(self.pareto.get_or_init(|| efficient))
    }

    /// Is `matrix` a convex combination of Pareto efficient deterministic
    /// assignments? A failure carries a separating hyperplane.
    pub fn ex_post_efficient_check<T: Scalar>(
        &self,
        matrix: &RandomAssignment<T>,
    ) -> Result<AxiomVerdict<T>> {
        let problem = self.problem;
        check_input(problem, matrix)?;
        let efficient = self.pareto_efficient_assignments()?;
        let (n, m) = (problem.n(), problem.m());
        // Only assignments inside the support of `matrix` can carry weight.
        let usable: Vec<&DeterministicAssignment> = efficient
            .iter()
            .filter(|d| (0..n).all(|i| matrix.get(i, d.object_of(i)).is_positive()))
            .collect();
        let mut cons = Vec::with_capacity(n * m + 1);
        cons.push(lp::Constraint::new(
            vec![T::one(); usable.len()],
            Sense::Eq,
            T::one(),
        ));
        for i in 0..n {
            for a in 0..m {
                let coeffs = usable
                    .iter()
                    .map(|d| {
                        if d.object_of(i) == a {
                            T::one()
                        } else {
                            T::zero()
                        }
                    })
                    .collect();
                cons.push(lp::Constraint::new(
                    coeffs,
                    Sense::Eq,
                    matrix.get(i, a).clone(),
                ));
            }
        }
        if !usable.is_empty() && lp::feasible(usable.len(), &cons)?.is_some() {
            return Ok(AxiomVerdict::pass(Axiom::ExPostEfficient));
        }
        let (weights, offset) = separating_hyperplane(problem, matrix, efficient)?;
        Ok(AxiomVerdict::fail(
            Axiom::ExPostEfficient,
            Witness::NoEfficientDecomposition {
                weights,
                offset,
                efficient: efficient.to_vec(),
            },
        ))
    }
}

/// Finds `(Y, z)` with `Y·D + z <= 0` for every listed `D` and
/// `Y·matrix + z > 0`, with `Y` in `[-1, 1]`.
fn separating_hyperplane<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
    efficient: &[DeterministicAssignment],
) -> Result<(Vec<Vec<T>>, T)> {
    let (n, m) = (problem.n(), problem.m());
    let cells = n * m;
    // Variables: y+ (cells), y- (cells), z+, z-.
    let vars = 2 * cells + 2;
    let mut objective = vec![T::zero(); vars];
    for i in 0..n {
        for a in 0..m {
            objective[i * m + a] = matrix.get(i, a).clone();
            objective[cells + i * m + a] = -matrix.get(i, a).clone();
        }
    }
    objective[2 * cells] = T::one();
    objective[2 * cells + 1] = -T::one();
    let mut lp = LinearProgram::new(vars).maximize(objective);
    for d in efficient {
        let mut c = vec![T::zero(); vars];
        for i in 0..n {
            let a = d.object_of(i);
            c[i * m + a] = T::one();
            c[cells + i * m + a] = -T::one();
        }
        c[2 * cells] = T::one();
        c[2 * cells + 1] = -T::one();
        lp.add(c, Sense::Le, T::zero());
    }
    let bound = T::from_count(cells + 1);
    for v in 0..vars {
        let mut c = vec![T::zero(); vars];
        c[v] = T::one();
        let rhs = if v >= 2 * cells {
            bound.clone()
        } else {
            T::one()
        };
        lp.add(c, Sense::Le, rhs);
    }
    let (best, x) = solve_optimal(&lp)?;
    if !best.is_positive() {
        return Err(Error::Internal(
            "decomposition infeasible but no separating hyperplane found".into(),
        ));
    }
    let weights = (0..n)
        .map(|i| {
            (0..m)
                .map(|a| x[i * m + a].clone() - x[cells + i * m + a].clone())
                .collect()
        })
        .collect();
    Ok((weights, x[2 * cells].clone() - x[2 * cells + 1].clone()))
}

pub fn ex_post_efficient_check<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
    limits: &Guard,
) -> Result<AxiomVerdict<T>> {
    EfficiencyContext::new(problem, *limits).ex_post_efficient_check(matrix)
}

/// A convex combination of deterministic assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<T> {
    pub parts: Vec<(T, DeterministicAssignment)>,
}

impl<T: Scalar> Decomposition<T> {
    pub fn total_weight(&self) -> T {
        self.parts.iter().map(|(w, _)| w.clone()).sum()
    }

    /// `sum_t w_t D_t`.
    pub fn reconstruct(&self, n: usize, m: usize) -> RandomAssignment<T> {
        let mut out = RandomAssignment::<T>::zeros(n, m);
        for (w, d) in &self.parts {
            for (i, &a) in d.assigned().iter().enumerate() {
                *out.get_mut(i, a) = out.get(i, a).clone() + w.clone();
            }
        }
        out
    }
}

/// Writes `matrix` as a convex combination of feasible deterministic
/// assignments.
///
/// Each round extracts an assignment supported on the positive residual
/// entries that fills every column already at its scaled quota, with the
/// largest weight keeping the scaled residual feasible. Every round zeroes an
/// entry or fills a column, so the loop terminates.
pub fn bvn_decompose<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
) -> Result<Decomposition<T>> {
    check_input(problem, matrix)?;
    let (n, m) = (problem.n(), problem.m());
    let quotas: Vec<T> = problem.quotas().iter().map(|&q| T::from_count(q)).collect();
    let mut residual = matrix.clone();
    let mut remaining = T::one();
    let mut parts = Vec::new();
    while remaining.is_positive() {
        let columns = residual.column_sums();
        let tight: Vec<bool> = (0..m)
            .map(|a| columns[a] == quotas[a].clone() * remaining.clone())
            .collect();
        let d = supported_assignment(problem, &residual, &tight).ok_or_else(|| {
            Error::Internal("no feasible assignment on the residual support".into())
        })?;
        let mut weight = remaining.clone();
        for i in 0..n {
            let v = residual.get(i, d.object_of(i));
            if *v < weight {
                weight = v.clone();
            }
        }
        for a in 0..m {
            let load = d.load(a);
            if !tight[a] && load < problem.quota(a) {
                let slack = quotas[a].clone() * remaining.clone() - columns[a].clone();
                let limit = slack / T::from_count(problem.quota(a) - load);
                if limit < weight {
                    weight = limit;
                }
            }
        }
        for i in 0..n {
            let a = d.object_of(i);
            *residual.get_mut(i, a) = residual.get(i, a).clone() - weight.clone();
        }
        remaining = remaining - weight.clone();
        parts.push((weight, d));
    }
    Ok(Decomposition { parts })
}

/// b-matching of agents into objects on the positive entries of `residual`
/// that saturates every `tight` object.
fn supported_assignment<T: Scalar>(
    problem: &Problem,
    residual: &RandomAssignment<T>,
    tight: &[bool],
) -> Option<DeterministicAssignment> {
    let (n, m) = (problem.n(), problem.m());
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..m).map(|a| residual.get(i, a).is_positive()).collect())
        .collect();
    let mut holder_of: Vec<Option<usize>> = vec![None; n];
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); m];

    fn move_agent(i: usize, a: usize, holder_of: &mut [Option<usize>], holders: &mut [Vec<usize>]) {
        if let Some(old) = holder_of[i] {
            holders[old].retain(|&x| x != i);
        }
        holder_of[i] = Some(a);
        holders[a].push(i);
    }

    // Find an agent for one more seat of `a`; seats already taken stay taken.
    fn grow_object(
        a: usize,
        adj: &[Vec<bool>],
        seen: &mut [bool],
        holder_of: &mut [Option<usize>],
        holders: &mut [Vec<usize>],
    ) -> bool {
        for i in 0..adj.len() {
            if !adj[i][a] || seen[i] || holder_of[i] == Some(a) {
                continue;
            }
            seen[i] = true;
            let free = match holder_of[i] {
                None => true,
                Some(b) => grow_object(b, adj, seen, holder_of, holders),
            };
            if free {
                move_agent(i, a, holder_of, holders);
                return true;
            }
        }
        false
    }

    // Seat agent `i`; object loads never decrease.
    fn seat_agent(
        i: usize,
        adj: &[Vec<bool>],
        caps: &[usize],
        seen: &mut [bool],
        holder_of: &mut [Option<usize>],
        holders: &mut [Vec<usize>],
    ) -> bool {
        for a in 0..caps.len() {
            if !adj[i][a] || seen[a] {
                continue;
            }
            seen[a] = true;
            if holders[a].len() < caps[a] {
                move_agent(i, a, holder_of, holders);
                return true;
            }
            for h in holders[a].clone() {
                if seat_agent(h, adj, caps, seen, holder_of, holders) {
                    move_agent(i, a, holder_of, holders);
                    return true;
                }
            }
        }
        false
    }

    for a in 0..m {
        if !tight[a] {
            continue;
        }
        for _ in 0..problem.quota(a) {
            let mut seen = vec![false; n];
            if !grow_object(a, &adj, &mut seen, &mut holder_of, &mut holders) {
                return None;
            }
        }
    }
    for i in 0..n {
        if holder_of[i].is_none() {
            let mut seen = vec![false; m];
            if !seat_agent(
                i,
                &adj,
                problem.quotas(),
                &mut seen,
                &mut holder_of,
                &mut holders,
            ) {
                return None;
            }
        }
    }
    let assigned = holder_of.into_iter().collect::<Option<Vec<_>>>()?;
    DeterministicAssignment::new(assigned, m).ok()
}

/// `true` iff `rows` sum entrywise to `matrix` after weighting.
pub fn decomposition_matches<T: Scalar>(
    decomposition: &Decomposition<T>,
    matrix: &RandomAssignment<T>,
) -> bool {
    decomposition.reconstruct(matrix.n(), matrix.m()) == *matrix
        && decomposition.total_weight().is_one()
}

/// Inner product of two equally shaped matrices.
pub fn frobenius<T: Scalar>(x: &RandomAssignment<T>, y: &RandomAssignment<T>) -> T {
    x.rows()
        .iter()
        .zip(y.rows())
        .fold(T::zero(), |acc, (a, b)| acc + dot(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::*;
    use crate::model::validate_deterministic;
    use crate::rules::{pr, ps, ria, rsd, uniform};
    use crate::Rational;
    use num_traits::Signed;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn dominating_pi() -> RandomAssignment<Rational> {
        let z = || r(0, 1);
        RandomAssignment::new(vec![
            vec![r(1, 1), z(), z(), z()],
            vec![z(), z(), r(1, 2), r(1, 2)],
            vec![z(), z(), r(1, 2), r(1, 2)],
            vec![z(), r(1, 1), z(), z()],
        ])
        .unwrap()
    }

    #[test]
    fn rank_distributions_from_example2() {
        let p = example2();
        let pi = dominating_pi();
        assert_eq!(
            rank_distribution(&p, &pi).0,
            vec![r(2, 1), r(3, 1), r(4, 1), r(4, 1)]
        );
        let out: RandomAssignment<Rational> = pr(&p);
        assert_eq!(
            rank_distribution(&p, &out).0,
            vec![r(2, 1), r(3, 1), r(10, 3), r(4, 1)]
        );
        assert!(rank_dominates(&p, &pi, &out));
        assert!(!rank_dominates(&p, &pi, &pi));
        assert!(!rank_dominates(&p, &out, &pi));
        let tops = unit_problem(&["ab", "ba"]);
        let d = DeterministicAssignment::new(vec![0, 1], 2)
            .unwrap()
            .to_random::<Rational>();
        assert_eq!(rank_distribution(&tops, &d).0, vec![r(2, 1), r(2, 1)]);
    }

    #[test]
    fn ria_example1_has_trading_cycle() {
        let p = example1();
        let pi: RandomAssignment<Rational> = ria(&p).unwrap();
        let v = sd_efficient_cycle_check(&p, &pi);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(matches!(w, Witness::TradingCycle { .. }));
        assert!(w.confirms(&p, &pi));
        let lp = sd_efficient_lp_oracle(&p, &pi, &Guard::default()).unwrap();
        assert!(!lp.holds);
        assert!(lp.witness.unwrap().confirms(&p, &pi));
    }

    #[test]
    fn pr_example2_is_sd_efficient_but_not_rank_efficient() {
        let p = example2();
        let out: RandomAssignment<Rational> = pr(&p);
        assert!(sd_efficient_cycle_check(&p, &out).holds);
        assert!(
            sd_efficient_lp_oracle(&p, &out, &Guard::default())
                .unwrap()
                .holds
        );
        let v = rank_efficient_check(&p, &out, &Guard::default()).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(w.confirms(&p, &out));
        // A hand-built dominating assignment also passes the witness check.
        let alt = Witness::RankDominated {
            by: dominating_pi(),
            by_distribution: vec![],
            distribution: vec![],
        };
        assert!(alt.confirms(&p, &out));
    }

    #[test]
    fn top_choices_are_fully_efficient() {
        let p = unit_problem(&["abc", "bca", "cab"]);
        let d = DeterministicAssignment::new(vec![0, 1, 2], 3).unwrap();
        let m = d.to_random::<Rational>();
        let g = Guard::default();
        assert!(sd_efficient_cycle_check(&p, &m).holds);
        assert!(sd_efficient_lp_oracle(&p, &m, &g).unwrap().holds);
        assert!(rank_efficient_check(&p, &m, &g).unwrap().holds);
        assert!(pareto_efficient::<Rational>(&p, &d, &g).unwrap().holds);
        assert!(ex_post_efficient_check(&p, &m, &g).unwrap().holds);
    }

    #[test]
    fn ps_example1_rank_verdict() {
        // PS on example1() equals the split-pairs matrix; its rank distribution
        // (2, 4, 4, 4) is already maximal, so it is rank efficient.
        let p = example1();
        let m: RandomAssignment<Rational> = ps(&p);
        assert_eq!(
            rank_distribution(&p, &m).0,
            vec![r(2, 1), r(4, 1), r(4, 1), r(4, 1)]
        );
        assert!(
            rank_efficient_check(&p, &m, &Guard::default())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn unfair_pareto_assignment_is_efficient() {
        let p = three_agent_counterexample();
        let d = DeterministicAssignment::new(vec![2, 0, 1], 3).unwrap();
        let g = Guard::default();
        assert!(pareto_efficient::<Rational>(&p, &d, &g).unwrap().holds);
        let m = d.to_random::<Rational>();
        assert!(sd_efficient_lp_oracle(&p, &m, &g).unwrap().holds);
        assert!(ex_post_efficient_check(&p, &m, &g).unwrap().holds);
    }

    #[test]
    fn swap_improvement_is_found() {
        let p = unit_problem(&["ab", "ba"]);
        let d = DeterministicAssignment::new(vec![1, 0], 2).unwrap();
        let v = pareto_efficient::<Rational>(&p, &d, &Guard::default()).unwrap();
        assert!(!v.holds);
        assert!(v.witness.unwrap().confirms(&p, &d.to_random()));
    }

    #[test]
    fn dominated_lottery_is_not_ex_post() {
        // Half of each assignment of a 2x2 problem with opposed tops: the
        // swapped assignment is Pareto dominated, so the half-half lottery is
        // not ex post efficient.
        let p = unit_problem(&["ab", "ba"]);
        let half =
            RandomAssignment::new(vec![vec![r(1, 2), r(1, 2)], vec![r(1, 2), r(1, 2)]]).unwrap();
        let v = ex_post_efficient_check(&p, &half, &Guard::default()).unwrap();
        assert!(!v.holds);
        assert!(v.witness.unwrap().confirms(&p, &half));
    }

    #[test]
    fn rsd_is_ex_post_efficient_on_examples() {
        for p in [example1(), example2(), three_agent_counterexample()] {
            let m: RandomAssignment<Rational> = rsd(&p).unwrap();
            assert!(
                ex_post_efficient_check(&p, &m, &Guard::default())
                    .unwrap()
                    .holds
            );
        }
    }

    #[test]
    fn guard_blocks_large_instances() {
        let p = unit_problem(&["abcdef"; 6]);
        let m: RandomAssignment<Rational> = uniform(&p);
        assert!(matches!(
            sd_efficient_lp_oracle(&p, &m, &Guard::default()),
            Err(Error::SizeGuard { .. })
        ));
        assert!(deterministic_assignments(&p, &Guard::default()).is_err());
    }

    #[test]
    fn bvn_examples() {
        let p = unit_problem(&["ab", "ba"]);
        let half =
            RandomAssignment::new(vec![vec![r(1, 2), r(1, 2)], vec![r(1, 2), r(1, 2)]]).unwrap();
        let dec = bvn_decompose(&p, &half).unwrap();
        assert_eq!(dec.parts.len(), 2);
        assert!(dec.parts.iter().all(|(w, _)| *w == r(1, 2)));
        assert!(decomposition_matches(&dec, &half));

        let d = DeterministicAssignment::new(vec![1, 0], 2).unwrap();
        let dec = bvn_decompose(&p, &d.to_random::<Rational>()).unwrap();
        assert_eq!(dec.parts, vec![(r(1, 1), d)]);

        let p1 = example1();
        let pi: RandomAssignment<Rational> = ria(&p1).unwrap();
        let dec = bvn_decompose(&p1, &pi).unwrap();
        assert!(decomposition_matches(&dec, &pi));
        assert!(dec.parts.len() <= 4 * 4 + 1);
        for (_, d) in &dec.parts {
            assert!(validate_deterministic(&p1, d).is_empty());
        }
    }

    #[test]
    fn bvn_with_excess_supply_and_quotas() {
        let p = problem_with_quotas(&["abc", "bca", "acb"], &[2, 1, 2]);
        for m in [uniform::<Rational>(&p), ps(&p), rsd(&p).unwrap()] {
            let dec = bvn_decompose(&p, &m).unwrap();
            assert!(decomposition_matches(&dec, &m));
            for (w, d) in &dec.parts {
                assert!(w.is_positive());
                assert!(validate_deterministic(&p, d).is_empty());
            }
        }
    }

    #[test]
    fn pareto_cache_is_reused() {
        let p = example2();
        let ctx = EfficiencyContext::new(&p, Guard::default());
        let first = ctx.pareto_efficient_assignments().unwrap().as_ptr();
        let second = ctx.pareto_efficient_assignments().unwrap().as_ptr();
        assert_eq!(first, second);
        for d in ctx.pareto_efficient_assignments().unwrap() {
            assert!(is_pareto_efficient_brute(&p, d));
        }
    }
}
