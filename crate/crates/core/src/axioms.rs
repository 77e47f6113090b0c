//! Fairness and efficiency axioms as predicates on a single assignment.
//!
//! Every failing verdict carries a [`Witness`] with the agents, objects and
//! both sides of the violated inequality, so it can be replayed against the
//! raw definition with [`Witness::confirms`].

use crate::lp::dot;
use crate::model::{
    cumulative, surplus, validate_assignment, DeterministicAssignment, Problem, RandomAssignment,
};
use crate::scalar::{sum_refs, Scalar};
use serde::{Serialize, Serializer};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    NonWasteful,
    SdRankFair,
    EqualRankEnvyFree,
    EqualTreatmentOfEquals,
    WeakSdEnvyFree,
    SdEnvyFree,
    FavorsHigherRanks,
    SdEfficient,
    RankEfficient,
    ParetoEfficient,
    ExPostEfficient,
}

impl Axiom {
    pub const ALL: [Axiom; 11] = [
        Axiom::NonWasteful,
        Axiom::SdRankFair,
        Axiom::EqualRankEnvyFree,
        Axiom::EqualTreatmentOfEquals,
        Axiom::WeakSdEnvyFree,
        Axiom::SdEnvyFree,
        Axiom::FavorsHigherRanks,
        Axiom::SdEfficient,
        Axiom::RankEfficient,
        Axiom::ParetoEfficient,
        Axiom::ExPostEfficient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::NonWasteful => "non-wasteful",
            Axiom::SdRankFair => "sd-rank-fair",
            Axiom::EqualRankEnvyFree => "equal-rank-envy-free",
            Axiom::EqualTreatmentOfEquals => "equal-treatment-of-equals",
            Axiom::WeakSdEnvyFree => "weak-sd-envy-free",
            Axiom::SdEnvyFree => "sd-envy-free",
            Axiom::FavorsHigherRanks => "favors-higher-ranks",
            Axiom::SdEfficient => "sd-efficient",
            Axiom::RankEfficient => "rank-efficient",
            Axiom::ParetoEfficient => "pareto-efficient",
            Axiom::ExPostEfficient => "ex-post-efficient",
        }
    }

    pub fn from_name(name: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.name() == name)
    }

    /// Axioms that only make sense for deterministic assignments.
    pub fn deterministic_only(self) -> bool {
        matches!(self, Axiom::FavorsHigherRanks | Axiom::ParetoEfficient)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn ser_fraction<T: Scalar, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn ser_fractions<T: Scalar, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_fraction_rows<T: Scalar, S: Serializer>(v: &[Vec<T>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        v.iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    )
}

/// One step `(agent, object)` of a trading cycle: the agent holds a positive
/// share of the object and prefers the object of the next step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleStep {
    pub agent: usize,
    pub object: usize,
}

/// Evidence that an axiom fails. Indices refer to the problem's agents and
/// objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(
    tag = "kind",
    rename_all = "kebab-case",
    bound(serialize = "T: Scalar")
)]
pub enum Witness<T> {
    /// `agent` holds some of `object` while the better `better` is not
    /// fully allocated.
    Waste {
        agent: usize,
        object: usize,
        better: usize,
        #[serde(serialize_with = "ser_fraction")]
        allocated: T,
        quota: usize,
    },
    /// `agent` holds some of `object` although `higher_ranker` ranks it
    /// better and is not satiated at it.
    Unsatiated {
        agent: usize,
        object: usize,
        higher_ranker: usize,
        #[serde(serialize_with = "ser_fraction")]
        surplus: T,
    },
    /// `min(U_agent + share_other, 1) > Û_agent` at an equally ranked object.
    EqualRankEnvy {
        agent: usize,
        other: usize,
        object: usize,
        #[serde(serialize_with = "ser_fraction")]
        lhs: T,
        #[serde(serialize_with = "ser_fraction")]
        rhs: T,
    },
    UnequalTreatment {
        agent: usize,
        other: usize,
    },
    /// `envied`'s row strictly dominates `agent`'s under `agent`'s order.
    StrictEnvy {
        agent: usize,
        envied: usize,
    },
    /// `agent`'s row fails to weakly dominate `other`'s at `object`.
    Envy {
        agent: usize,
        other: usize,
        object: usize,
        #[serde(serialize_with = "ser_fraction")]
        own: T,
        #[serde(serialize_with = "ser_fraction")]
        others: T,
    },
    /// `agent` prefers `object` to her assignment while it has a free seat.
    UnfilledBetter {
        agent: usize,
        object: usize,
        load: usize,
        quota: usize,
    },
    /// `agent` prefers `object`, held by `holder` who ranks it lower.
    LowerRankHolder {
        agent: usize,
        object: usize,
        holder: usize,
    },
    TradingCycle {
        steps: Vec<CycleStep>,
    },
    /// `by` weakly dominates every row and strictly improves `agent`'s
    /// cumulative share at `object`.
    SdDominated {
        by: RandomAssignment<T>,
        agent: usize,
        object: usize,
        #[serde(serialize_with = "ser_fraction")]
        improved: T,
        #[serde(serialize_with = "ser_fraction")]
        original: T,
    },
    RankDominated {
        by: RandomAssignment<T>,
        #[serde(serialize_with = "ser_fractions")]
        by_distribution: Vec<T>,
        #[serde(serialize_with = "ser_fractions")]
        distribution: Vec<T>,
    },
    ParetoImproved {
        by: DeterministicAssignment,
    },
    /// A hyperplane `weights·X + offset` that is `<= 0` on every Pareto
    /// efficient deterministic assignment and positive on the input.
    NoEfficientDecomposition {
        #[serde(serialize_with = "ser_fraction_rows")]
        weights: Vec<Vec<T>>,
        #[serde(serialize_with = "ser_fraction")]
        offset: T,
        efficient: Vec<DeterministicAssignment>,
    },
}

impl<T: Scalar> Witness<T> {
    /// Re-checks the witness against the raw definitions on `matrix`.
    pub fn confirms(&self, problem: &Problem, matrix: &RandomAssignment<T>) -> bool {
        let pref = |i: usize| problem.preference(i);
        match self {
            Witness::Waste {
                agent,
                object,
                better,
                ..
            } => {
                matrix.get(*agent, *object).is_positive()
                    && pref(*agent).prefers(*better, *object)
                    && matrix.column_sum(*better) != T::from_count(problem.quota(*better))
            }
            Witness::Unsatiated {
                agent,
                object,
                higher_ranker,
                ..
            } => {
                matrix.get(*agent, *object).is_positive()
                    && pref(*higher_ranker).rank_of(*object) < pref(*agent).rank_of(*object)
                    && !surplus(matrix.row(*higher_ranker), pref(*higher_ranker), *object)
                        .map(|s| s.is_one())
                        .unwrap_or(true)
            }
            Witness::EqualRankEnvy {
                agent,
                other,
                object,
                ..
            } => {
                pref(*agent).rank_of(*object) == pref(*other).rank_of(*object)
                    && !equal_rank_pair_holds(problem, matrix, *agent, *other, *object).0
            }
            Witness::UnequalTreatment { agent, other } => {
                pref(*agent) == pref(*other) && matrix.row(*agent) != matrix.row(*other)
            }
            Witness::StrictEnvy { agent, envied } => {
                sd_strictly_dominates(pref(*agent), matrix.row(*envied), matrix.row(*agent))
            }
            Witness::Envy { agent, other, .. } => {
                !sd_weakly_dominates(pref(*agent), matrix.row(*agent), matrix.row(*other))
            }
            Witness::UnfilledBetter { agent, object, .. }
            | Witness::LowerRankHolder { agent, object, .. } => {
                let Some(d) = matrix.to_deterministic() else {
                    return false;
                };
                let mine = d.object_of(*agent);
                if !pref(*agent).prefers(*object, mine) {
                    return false;
                }
                match self {
                    Witness::UnfilledBetter { .. } => d.load(*object) < problem.quota(*object),
                    Witness::LowerRankHolder { holder, .. } => {
                        d.object_of(*holder) == *object
                            && pref(*holder).rank_of(*object) > pref(*agent).rank_of(*object)
                    }
                    _ => unreachable!(),
                }
            }
            Witness::TradingCycle { steps } => {
                !steps.is_empty()
                    && steps.iter().enumerate().all(|(t, step)| {
                        let next = &steps[(t + 1) % steps.len()];
                        matrix.get(step.agent, step.object).is_positive()
                            && pref(step.agent).prefers(next.object, step.object)
                    })
            }
            Witness::SdDominated { by, .. } => {
                validate_assignment(problem, by).is_empty()
                    && by != matrix
                    && (0..problem.n())
                        .all(|i| sd_weakly_dominates(pref(i), by.row(i), matrix.row(i)))
            }
            Witness::RankDominated { by, .. } => {
                validate_assignment(problem, by).is_empty()
                    && crate::efficiency::rank_dominates(problem, by, matrix)
            }
            Witness::ParetoImproved { by } => {
                let Some(d) = matrix.to_deterministic() else {
                    return false;
                };
                crate::model::validate_deterministic(problem, by).is_empty()
                    && crate::efficiency::pareto_improves(problem, by, &d)
            }
            Witness::NoEfficientDecomposition {
                weights,
                offset,
                efficient,
            } => {
                let value = |rows: &[Vec<T>]| {
                    weights
                        .iter()
                        .zip(rows)
                        .fold(offset.clone(), |acc, (w, r)| acc + dot(w, r))
                };
                let pareto = crate::efficiency::pareto_set_brute(problem);
                value(matrix.rows()).is_positive()
                    && efficient.len() == pareto.len()
                    && pareto.iter().all(|d| {
                        efficient.contains(d) && !value(d.to_random::<T>().rows()).is_positive()
                    })
            }
        }
    }

    /// One-line human description using the problem's ids.
    pub fn describe(&self, problem: &Problem) -> String {
        let ag = |i: &usize| problem.agents()[*i].as_str();
        let ob = |a: &usize| problem.objects()[*a].as_str();
        match self {
            Witness::Waste {
                agent,
                object,
                better,
                allocated,
                quota,
            } => format!(
                "agent {} holds {} while better {} is allocated {allocated} of {quota}",
                ag(agent),
                ob(object),
                ob(better)
            ),
            Witness::Unsatiated {
                agent,
                object,
                higher_ranker,
                surplus,
            } => format!(
                "agent {} holds {} but agent {} ranks it higher and has surplus {surplus} there",
                ag(agent),
                ob(object),
                ag(higher_ranker)
            ),
            Witness::EqualRankEnvy {
                agent,
                other,
                object,
                lhs,
                rhs,
            } => format!(
                "agents {} and {} rank {} equally: min(U + share, 1) = {lhs} > {rhs}",
                ag(agent),
                ag(other),
                ob(object)
            ),
            Witness::UnequalTreatment { agent, other } => format!(
                "agents {} and {} report the same preference but get different rows",
                ag(agent),
                ag(other)
            ),
            Witness::StrictEnvy { agent, envied } => format!(
                "agent {}'s row strictly dominates agent {}'s under {}'s preference",
                ag(envied),
                ag(agent),
                ag(agent)
            ),
            Witness::Envy {
                agent,
                other,
                object,
                own,
                others,
            } => format!(
                "at {} agent {} has cumulative {own} but agent {}'s row gives {others}",
                ob(object),
                ag(agent),
                ag(other)
            ),
            Witness::UnfilledBetter {
                agent,
                object,
                load,
                quota,
            } => format!(
                "agent {} prefers {} which has {load} of {quota} seats taken",
                ag(agent),
                ob(object)
            ),
            Witness::LowerRankHolder {
                agent,
                object,
                holder,
            } => format!(
                "agent {} prefers {} which agent {} holds at a lower rank",
                ag(agent),
                ob(object),
                ag(holder)
            ),
            Witness::TradingCycle { steps } => {
                let parts: Vec<String> = steps
                    .iter()
                    .map(|s| format!("{}:{}", ag(&s.agent), ob(&s.object)))
                    .collect();
                format!("trading cycle {}", parts.join(" -> "))
            }
            Witness::SdDominated {
                agent,
                object,
                improved,
                original,
                ..
            } => format!(
                "a feasible assignment weakly dominates every row and raises agent {}'s share up to {} from {original} to {improved}",
                ag(agent),
                ob(object)
            ),
            Witness::RankDominated {
                by_distribution,
                distribution,
                ..
            } => format!(
                "rank distribution ({}) dominates ({})",
                join(by_distribution),
                join(distribution)
            ),
            Witness::ParetoImproved { by } => format!(
                "deterministic assignment [{}] is a Pareto improvement",
                by.assigned().iter().map(ob).collect::<Vec<_>>().join(", ")
            ),
            Witness::NoEfficientDecomposition { efficient, .. } => format!(
                "a separating hyperplane excludes the hull of the {} Pareto efficient assignments",
                efficient.len()
            ),
        }
    }
}

fn join<T: Scalar>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Verdict of one axiom on one assignment. `witness` is present iff the
/// axiom fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct AxiomVerdict<T> {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Witness<T>>,
}

impl<T: Scalar> AxiomVerdict<T> {
    pub fn pass(axiom: Axiom) -> Self {
        Self {
            axiom,
            holds: true,
            witness: None,
        }
    }

    pub fn fail(axiom: Axiom, witness: Witness<T>) -> Self {
        Self {
            axiom,
            holds: false,
            witness: Some(witness),
        }
    }

    fn from_witness(axiom: Axiom, witness: Option<Witness<T>>) -> Self {
        match witness {
            Some(w) => Self::fail(axiom, w),
            None => Self::pass(axiom),
        }
    }
}

/// `row1` weakly stochastically dominates `row2` under `pref`.
pub fn sd_weakly_dominates<T: Scalar>(
    pref: &crate::model::Preference,
    row1: &[T],
    row2: &[T],
) -> bool {
    let mut a1 = T::zero();
    let mut a2 = T::zero();
    for &a in pref.order() {
        a1 = a1 + row1[a].clone();
        a2 = a2 + row2[a].clone();
        if a1 < a2 {
            return false;
        }
    }
    true
}

/// Weak dominance with `row1 != row2`.
pub fn sd_strictly_dominates<T: Scalar>(
    pref: &crate::model::Preference,
    row1: &[T],
    row2: &[T],
) -> bool {
    row1 != row2 && sd_weakly_dominates(pref, row1, row2)
}

fn waste_witness<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
    columns: &[T],
    agent: usize,
    object: usize,
) -> Option<Witness<T>> {
    let pref = problem.preference(agent);
    pref.order()
        .iter()
        .take_while(|&&b| b != object)
        .find(|&&b| columns[b] != T::from_count(problem.quota(b)))
        .map(|&b| Witness::Waste {
            agent,
            object,
            better: b,
            allocated: columns[b].clone(),
            quota: problem.quota(b),
        })
        .filter(|_| matrix.get(agent, object).is_positive())
}

/// A positive share of an object implies every better object is fully
/// allocated.
pub fn non_wasteful<T: Scalar>(problem: &Problem, matrix: &RandomAssignment<T>) -> AxiomVerdict<T> {
    let columns = matrix.column_sums();
    for i in 0..problem.n() {
        for a in 0..problem.m() {
            if let Some(w) = waste_witness(problem, matrix, &columns, i, a) {
                return AxiomVerdict::fail(Axiom::NonWasteful, w);
            }
        }
    }
    AxiomVerdict::pass(Axiom::NonWasteful)
}

/// A positive share of `a` for `i` requires every object `i` prefers to `a`
/// to be exhausted and every agent ranking `a` above `i`'s rank of it to be
/// satiated at `a`.
pub fn sd_rank_fair<T: Scalar>(problem: &Problem, matrix: &RandomAssignment<T>) -> AxiomVerdict<T> {
    let columns = matrix.column_sums();
    let cums: Vec<Vec<T>> = (0..problem.n())
        .map(|j| cumulative(matrix.row(j), problem.preference(j)))
        .collect();
    for i in 0..problem.n() {
        for a in 0..problem.m() {
            if !matrix.get(i, a).is_positive() {
                continue;
            }
            if let Some(w) = waste_witness(problem, matrix, &columns, i, a) {
                return AxiomVerdict::fail(Axiom::SdRankFair, w);
            }
            let rank_i = problem.preference(i).rank_of(a);
            for (j, cum) in cums.iter().enumerate() {
                let rank_j = problem.preference(j).rank_of(a);
                if rank_j < rank_i && !cum[rank_j - 1].is_one() {
                    return AxiomVerdict::fail(
                        Axiom::SdRankFair,
                        Witness::Unsatiated {
                            agent: i,
                            object: a,
                            higher_ranker: j,
                            surplus: cum[rank_j - 1].clone(),
                        },
                    );
                }
            }
        }
    }
    AxiomVerdict::pass(Axiom::SdRankFair)
}

/// Returns whether the equal-rank inequality holds for the ordered pair and
/// both of its sides.
fn equal_rank_pair_holds<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
    agent: usize,
    other: usize,
    object: usize,
) -> (bool, T, T) {
    let pref = problem.preference(agent);
    let r = pref.rank_of(object);
    let strict: T = sum_refs(pref.order()[..r - 1].iter().map(|&b| matrix.get(agent, b)));
    let weak = strict.clone() + matrix.get(agent, object).clone();
    let lhs = (strict + matrix.get(other, object).clone()).min(T::one());
    (lhs <= weak, lhs, weak)
}

/// For every object and every pair ranking it equally, swapping shares of it
/// cannot raise either agent's surplus there.
pub fn equal_rank_envy_free<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
) -> AxiomVerdict<T> {
    for a in 0..problem.m() {
        for i in 0..problem.n() {
            for j in 0..problem.n() {
                if i == j || problem.preference(i).rank_of(a) != problem.preference(j).rank_of(a) {
                    continue;
                }
                let (ok, lhs, rhs) = equal_rank_pair_holds(problem, matrix, i, j, a);
                if !ok {
                    return AxiomVerdict::fail(
                        Axiom::EqualRankEnvyFree,
                        Witness::EqualRankEnvy {
                            agent: i,
                            other: j,
                            object: a,
                            lhs,
                            rhs,
                        },
                    );
                }
            }
        }
    }
    AxiomVerdict::pass(Axiom::EqualRankEnvyFree)
}

pub fn equal_treatment_of_equals<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
) -> AxiomVerdict<T> {
    for i in 0..problem.n() {
        for j in i + 1..problem.n() {
            if problem.preference(i) == problem.preference(j) && matrix.row(i) != matrix.row(j) {
                return AxiomVerdict::fail(
                    Axiom::EqualTreatmentOfEquals,
                    Witness::UnequalTreatment { agent: i, other: j },
                );
            }
        }
    }
    AxiomVerdict::pass(Axiom::EqualTreatmentOfEquals)
}

/// No agent's row is strictly dominated, under her own preference, by
/// another agent's row.
pub fn weak_sd_envy_free<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
) -> AxiomVerdict<T> {
    for i in 0..problem.n() {
        for j in 0..problem.n() {
            if i != j && sd_strictly_dominates(problem.preference(i), matrix.row(j), matrix.row(i))
            {
                return AxiomVerdict::fail(
                    Axiom::WeakSdEnvyFree,
                    Witness::StrictEnvy {
                        agent: i,
                        envied: j,
                    },
                );
            }
        }
    }
    AxiomVerdict::pass(Axiom::WeakSdEnvyFree)
}

/// Every agent's row weakly dominates every other row under her preference.
pub fn sd_envy_free<T: Scalar>(problem: &Problem, matrix: &RandomAssignment<T>) -> AxiomVerdict<T> {
    for i in 0..problem.n() {
        let pref = problem.preference(i);
        let own = cumulative(matrix.row(i), pref);
        for j in 0..problem.n() {
            if i == j {
                continue;
            }
            let other = cumulative(matrix.row(j), pref);
            if let Some(k) = (0..own.len()).find(|&k| own[k] < other[k]) {
                return AxiomVerdict::fail(
                    Axiom::SdEnvyFree,
                    Witness::Envy {
                        agent: i,
                        other: j,
                        object: pref.order()[k],
                        own: own[k].clone(),
                        others: other[k].clone(),
                    },
                );
            }
        }
    }
    AxiomVerdict::pass(Axiom::SdEnvyFree)
}

/// If `i` prefers `a` to her assignment then `a` is full and held only by
/// agents ranking it at least as high as `i` does.
pub fn favors_higher_ranks<T: Scalar>(
    problem: &Problem,
    d: &DeterministicAssignment,
) -> AxiomVerdict<T> {
    let axiom = Axiom::FavorsHigherRanks;
    for i in 0..problem.n() {
        let pref = problem.preference(i);
        let mine = d.object_of(i);
        for &a in pref.order().iter().take_while(|&&a| a != mine) {
            let load = d.load(a);
            if load < problem.quota(a) {
                return AxiomVerdict::fail(
                    axiom,
                    Witness::UnfilledBetter {
                        agent: i,
                        object: a,
                        load,
                        quota: problem.quota(a),
                    },
                );
            }
            if let Some(holder) = d
                .holders(a)
                .into_iter()
                .find(|&j| problem.preference(j).rank_of(a) > pref.rank_of(a))
            {
                return AxiomVerdict::fail(
                    axiom,
                    Witness::LowerRankHolder {
                        agent: i,
                        object: a,
                        holder,
                    },
                );
            }
        }
    }
    AxiomVerdict::pass(axiom)
}

pub(crate) fn verdict_from<T: Scalar>(
    axiom: Axiom,
    witness: Option<Witness<T>>,
) -> AxiomVerdict<T> {
    AxiomVerdict::from_witness(axiom, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::*;
    use crate::rules::{pr, ria, simple_ia, uniform, AgentOrder};
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn pi_prime() -> RandomAssignment<Rational> {
        pr(&example1())
    }

    fn det(p: &Problem, objs: &str) -> DeterministicAssignment {
        DeterministicAssignment::new(
            objs.chars()
                .map(|c| p.object_index(&c.to_string()).unwrap())
                .collect(),
            p.m(),
        )
        .unwrap()
    }

    #[test]
    fn dominance_basics() {
        let p = example1();
        let pref = p.preference(0);
        let pi: RandomAssignment<Rational> = ria(&p).unwrap();
        let pp = pi_prime();
        assert!(sd_weakly_dominates(pref, pi.row(0), pi.row(0)));
        assert!(!sd_strictly_dominates(pref, pi.row(0), pi.row(0)));
        for i in 0..4 {
            let pref = p.preference(i);
            assert!(sd_weakly_dominates(pref, pp.row(i), pi.row(i)));
            assert!(sd_strictly_dominates(pref, pp.row(i), pi.row(i)));
        }
        let top = [r(1, 1), r(0, 1), r(0, 1), r(0, 1)];
        let second = [r(0, 1), r(0, 1), r(1, 1), r(0, 1)];
        assert!(sd_weakly_dominates(pref, &top, &second));
        assert!(!sd_weakly_dominates(pref, &second, &top));
    }

    #[test]
    fn pr_example2_rows_dominate_agent1() {
        let p = example2();
        let out: RandomAssignment<Rational> = pr(&p);
        for j in [1, 2] {
            assert!(sd_strictly_dominates(
                p.preference(0),
                out.row(j),
                out.row(0)
            ));
        }
    }

    #[test]
    fn pr_example2_verdicts() {
        let p = example2();
        let out: RandomAssignment<Rational> = pr(&p);
        assert!(non_wasteful(&p, &out).holds);
        assert!(sd_rank_fair(&p, &out).holds);
        assert!(equal_rank_envy_free(&p, &out).holds);
        assert!(equal_treatment_of_equals(&p, &out).holds);
        let weak = weak_sd_envy_free(&p, &out);
        assert!(!weak.holds);
        assert_eq!(
            weak.witness,
            Some(Witness::StrictEnvy {
                agent: 0,
                envied: 1
            })
        );
        assert!(weak.witness.unwrap().confirms(&p, &out));
        assert!(!sd_envy_free(&p, &out).holds);
    }

    #[test]
    fn equal_rank_pair_substitution() {
        // Agents 2 and 3 at a: min(0 + 1/3, 1) = 1/3 <= 1/3.
        let p = example2();
        let out: RandomAssignment<Rational> = pr(&p);
        let (ok, lhs, rhs) = equal_rank_pair_holds(&p, &out, 1, 2, 0);
        assert!(ok);
        assert_eq!(lhs, r(1, 3));
        assert_eq!(rhs, r(1, 3));
    }

    #[test]
    fn equal_rank_envy_with_deterministic_tie() {
        // Both rank a first; agent 1 gets it, agent 2 gets b.
        let p = unit_problem(&["ab", "ab"]);
        let d = DeterministicAssignment::new(vec![0, 1], 2)
            .unwrap()
            .to_random::<Rational>();
        let v = equal_rank_envy_free(&p, &d);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(
            w,
            Witness::EqualRankEnvy {
                agent: 1,
                other: 0,
                object: 0,
                lhs: r(1, 1),
                rhs: r(0, 1)
            }
        );
        assert!(w.confirms(&p, &d));
    }

    #[test]
    fn ria_is_not_sd_rank_fair() {
        let p = example1();
        let pi: RandomAssignment<Rational> = ria(&p).unwrap();
        let v = sd_rank_fair(&p, &pi);
        assert!(!v.holds);
        assert!(v.witness.unwrap().confirms(&p, &pi));
        assert!(equal_treatment_of_equals(&p, &pi).holds);
    }

    #[test]
    fn sd_efficient_but_rank_unfair_assignment() {
        let p = three_agent_counterexample();
        let d = det(&p, "cab");
        let m = d.to_random::<Rational>();
        let v = sd_rank_fair(&p, &m);
        assert_eq!(
            v.witness,
            Some(Witness::Unsatiated {
                agent: 1,
                object: 0,
                higher_ranker: 0,
                surplus: r(0, 1)
            })
        );
        let f = favors_higher_ranks::<Rational>(&p, &d);
        assert!(!f.holds);
        assert!(f.witness.unwrap().confirms(&p, &m));
    }

    #[test]
    fn simple_ia_favors_higher_ranks() {
        let p = example1();
        for order in AgentOrder::all(4) {
            let d = simple_ia(&p, &order).unwrap();
            assert!(favors_higher_ranks::<Rational>(&p, &d).holds);
        }
        let single = unit_problem(&["ba"]);
        let d = DeterministicAssignment::new(vec![1], 2).unwrap();
        assert!(favors_higher_ranks::<Rational>(&single, &d).holds);
    }

    #[test]
    fn waste_is_detected() {
        // Agent 1 holds half of b while her top a is half empty.
        let p = unit_problem(&["ab", "ba"]);
        let m =
            RandomAssignment::new(vec![vec![r(1, 2), r(1, 2)], vec![r(0, 1), r(1, 2)]]).unwrap();
        let v = non_wasteful(&p, &m);
        assert!(!v.holds);
        assert!(v.witness.unwrap().confirms(&p, &m));
    }

    #[test]
    fn uniform_is_wasteful_on_example1() {
        let p = example1();
        let u: RandomAssignment<Rational> = uniform(&p);
        let v = non_wasteful(&p, &u);
        assert!(v.holds, "every column of the uniform matrix is full here");
        let v = sd_rank_fair(&p, &u);
        assert!(!v.holds);
        assert!(v.witness.unwrap().confirms(&p, &u));
        assert!(equal_rank_envy_free(&p, &u).holds);
    }

    #[test]
    fn unequal_treatment_for_dictatorial_tie() {
        let p = unit_problem(&["ab", "ab"]);
        let d = simple_ia(&p, &AgentOrder::identity(2))
            .unwrap()
            .to_random::<Rational>();
        let v = equal_treatment_of_equals(&p, &d);
        assert!(!v.holds);
        let out: RandomAssignment<Rational> = pr(&p);
        assert!(equal_treatment_of_equals(&p, &out).holds);
    }

    #[test]
    fn single_agent_is_envy_free() {
        let p = unit_problem(&["ab"]);
        let out: RandomAssignment<Rational> = pr(&p);
        assert!(weak_sd_envy_free(&p, &out).holds);
        assert!(sd_envy_free(&p, &out).holds);
    }
}
