//! Assignment rules.
//!
//! Deterministic rules ([`simple_ia`], [`serial_dictatorship`]) take an agent
//! order; their lotteries ([`ria`], [`rsd`]) average over all `n!` orders
//! exactly. The eating rules ([`pr`], [`ps`]) are simulated event by event in
//! exact arithmetic.

use crate::error::{guard, Error, Result};
use crate::model::{DeterministicAssignment, Problem, RandomAssignment};
use crate::scalar::{sum_refs, Scalar};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Largest `n` for which [`ria`] and [`rsd`] enumerate orderings.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// A priority order over agents: `sequence[0]` has the highest priority.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AgentOrder {
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl AgentOrder {
    pub fn new(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (pos, &i) in sequence.iter().enumerate() {
            if i >= n || position[i] != usize::MAX {
                return Err(Error::InvalidPreference(format!(
                    "agent order {sequence:?} is not a permutation of 0..{n}"
                )));
            }
            position[i] = pos;
        }
        Ok(Self { sequence, position })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sequence: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// Position of `agent` in the order; smaller is higher priority.
    pub fn position(&self, agent: usize) -> usize {
        self.position[agent]
    }

    /// Every order over `n` agents.
    pub fn all(n: usize) -> impl Iterator<Item = AgentOrder> {
        (0..n)
            .permutations(n)
            .map(|s| AgentOrder::new(s).expect("permutation"))
    }

    fn check(&self, problem: &Problem) -> Result<()> {
        if self.len() != problem.n() {
            return Err(Error::Shape {
                expected: format!("order over {} agents", problem.n()),
                found: format!("order over {} agents", self.len()),
            });
        }
        Ok(())
    }
}

/// Immediate acceptance under a fixed priority order.
///
/// At step `t` every unassigned agent applies to her `t`-th choice; an object
/// with `r` seats left accepts its `r` highest-priority applicants for good.
/// Because total supply covers the agents, everyone is placed within `m`
/// steps.
pub fn simple_ia(problem: &Problem, order: &AgentOrder) -> Result<DeterministicAssignment> {
    order.check(problem)?;
    let (n, m) = (problem.n(), problem.m());
    let mut left: Vec<usize> = problem.quotas().to_vec();
    let mut assigned: Vec<Option<usize>> = vec![None; n];
    for step in 1..=m {
        let mut applicants: Vec<Vec<usize>> = vec![Vec::new(); m];
        for i in order.sequence() {
            if assigned[*i].is_none() {
                let a = problem.preference(*i).object_at(step).expect("step <= m");
                applicants[a].push(*i);
            }
        }
        for (a, list) in applicants.into_iter().enumerate() {
            // `list` is already in priority order.
            for i in list.into_iter().take(left[a]) {
                assigned[i] = Some(a);
                left[a] -= 1;
            }
        }
        if assigned.iter().all(Option::is_some) {
            break;
        }
    }
    let assigned = assigned
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Internal("immediate acceptance left an agent unassigned".into()))?;
    DeterministicAssignment::new(assigned, m)
}

/// Serial dictatorship: agents pick their best remaining object in order.
pub fn serial_dictatorship(
    problem: &Problem,
    order: &AgentOrder,
) -> Result<DeterministicAssignment> {
    order.check(problem)?;
    let mut left: Vec<usize> = problem.quotas().to_vec();
    let mut assigned = vec![0; problem.n()];
    for &i in order.sequence() {
        let a = *problem
            .preference(i)
            .order()
            .iter()
            .find(|&&a| left[a] > 0)
            .ok_or_else(|| Error::Internal("serial dictatorship ran out of objects".into()))?;
        left[a] -= 1;
        assigned[i] = a;
    }
    DeterministicAssignment::new(assigned, problem.m())
}

fn average_over_orders<T: Scalar>(
    problem: &Problem,
    orders: impl Iterator<Item = AgentOrder>,
    rule: impl Fn(&Problem, &AgentOrder) -> Result<DeterministicAssignment>,
) -> Result<RandomAssignment<T>> {
    let (n, m) = (problem.n(), problem.m());
    let mut counts = vec![vec![0usize; m]; n];
    let mut total = 0usize;
    for order in orders {
        let d = rule(problem, &order)?;
        for (i, &a) in d.assigned().iter().enumerate() {
            counts[i][a] += 1;
        }
        total += 1;
    }
    if total == 0 {
        return Err(Error::Shape {
            expected: "at least one ordering".into(),
            found: "none".into(),
        });
    }
    let total = T::from_count(total);
    let rows = counts
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| T::from_count(c) / total.clone())
                .collect()
        })
        .collect();
    RandomAssignment::new(rows)
}

fn exact_average<T: Scalar>(
    problem: &Problem,
    cap: usize,
    rule: impl Fn(&Problem, &AgentOrder) -> Result<DeterministicAssignment>,
) -> Result<RandomAssignment<T>> {
    guard("agents for ordering enumeration", problem.n(), cap)?;
    average_over_orders(problem, AgentOrder::all(problem.n()), rule)
}

/// Monte Carlo estimate of [`ria`] (or of [`rsd`] when `serial`): the exact
/// average over `samples` uniformly drawn orderings from a seeded generator.
pub fn sampled_order_average<T: Scalar>(
    problem: &Problem,
    serial: bool,
    samples: usize,
    seed: u64,
) -> Result<RandomAssignment<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = problem.n();
    let orders = (0..samples).map(move |_| {
        let mut s: Vec<usize> = (0..n).collect();
        s.shuffle(&mut rng);
        AgentOrder::new(s).expect("permutation")
    });
    if serial {
        average_over_orders(problem, orders, serial_dictatorship)
    } else {
        average_over_orders(problem, orders, simple_ia)
    }
}

/// Random immediate acceptance: the uniform average of [`simple_ia`] over all
/// priority orders.
pub fn ria<T: Scalar>(problem: &Problem) -> Result<RandomAssignment<T>> {
    ria_with_cap(problem, DEFAULT_ENUMERATION_CAP)
}

pub fn ria_with_cap<T: Scalar>(problem: &Problem, cap: usize) -> Result<RandomAssignment<T>> {
    exact_average(problem, cap, simple_ia)
}

/// Random serial dictatorship.
pub fn rsd<T: Scalar>(problem: &Problem) -> Result<RandomAssignment<T>> {
    rsd_with_cap(problem, DEFAULT_ENUMERATION_CAP)
}

pub fn rsd_with_cap<T: Scalar>(problem: &Problem, cap: usize) -> Result<RandomAssignment<T>> {
    exact_average(problem, cap, serial_dictatorship)
}

/// Equal-speed consumption of `capacity` by claimants with the given
/// remaining `demands`.
///
/// If the demands fit, everybody is served in full. Otherwise each claimant
/// gets `min(d, level)` where `level` is the unique value exhausting the
/// capacity.
pub fn waterfill<T: Scalar>(demands: &[T], capacity: &T) -> Vec<T> {
    let total: T = sum_refs(demands);
    if total <= *capacity {
        return demands.to_vec();
    }
    let mut sorted: Vec<usize> = (0..demands.len()).collect();
    sorted.sort_by(|&x, &y| demands[x].cmp(&demands[y]));
    let mut left = capacity.clone();
    let mut remaining = demands.len();
    let mut level = None;
    for &idx in &sorted {
        let share = left.clone() / T::from_count(remaining);
        if demands[idx] <= share {
            left = left - demands[idx].clone();
            remaining -= 1;
        } else {
            level = Some(share);
            break;
        }
    }
    let level = level.expect("demands exceed capacity");
    demands
        .iter()
        .map(|d| {
            if *d <= level {
                d.clone()
            } else {
                level.clone()
            }
        })
        .collect()
}

/// What happened to one object during one eating stage or interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectStage<T> {
    pub object: usize,
    pub eaters: Vec<usize>,
    pub residual_before: T,
    pub residual_after: T,
}

/// Diagnostic record of one stage of [`pr`] (indexed by rank) or one
/// constant-menu interval of [`ps`] (with its time interval).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EatingStageTrace<T> {
    pub stage: usize,
    pub interval: Option<(T, T)>,
    pub objects: Vec<ObjectStage<T>>,
    /// Amount each agent consumed during the stage.
    pub consumed: Vec<T>,
}

/// The probabilistic rank rule.
pub fn pr<T: Scalar>(problem: &Problem) -> RandomAssignment<T> {
    pr_with_trace(problem).0
}

/// [`pr`] together with its stage-by-stage trace.
///
/// At stage `k` every unsatiated agent eats her `k`-th choice; each object is
/// shared by [`waterfill`] among the agents ranking it `k`-th. An agent whose
/// `k`-th object is already gone eats nothing and waits for stage `k + 1`.
pub fn pr_with_trace<T: Scalar>(
    problem: &Problem,
) -> (RandomAssignment<T>, Vec<EatingStageTrace<T>>) {
    let (n, m) = (problem.n(), problem.m());
    let mut residual: Vec<T> = problem.quotas().iter().map(|&q| T::from_count(q)).collect();
    let mut eaten: Vec<T> = vec![T::zero(); n];
    let mut out = RandomAssignment::<T>::zeros(n, m);
    let mut trace = Vec::with_capacity(m);
    for k in 1..=m {
        let mut eaters: Vec<Vec<usize>> = vec![Vec::new(); m];
        for i in 0..n {
            if !eaten[i].is_one() {
                let a = problem.preference(i).object_at(k).expect("k <= m");
                eaters[a].push(i);
            }
        }
        let mut stage = EatingStageTrace {
            stage: k,
            interval: None,
            objects: Vec::new(),
            consumed: vec![T::zero(); n],
        };
        for (a, group) in eaters.into_iter().enumerate() {
            if group.is_empty() {
                continue;
            }
            let demands: Vec<T> = group.iter().map(|&i| T::one() - eaten[i].clone()).collect();
            let amounts = waterfill(&demands, &residual[a]);
            let before = residual[a].clone();
            for (&i, amount) in group.iter().zip(amounts) {
                residual[a] = residual[a].clone() - amount.clone();
                eaten[i] = eaten[i].clone() + amount.clone();
                *out.get_mut(i, a) = out.get(i, a).clone() + amount.clone();
                stage.consumed[i] = amount;
            }
            stage.objects.push(ObjectStage {
                object: a,
                eaters: group,
                residual_before: before,
                residual_after: residual[a].clone(),
            });
        }
        trace.push(stage);
    }
    debug_assert!(eaten.iter().all(|e| e.is_one()), "every agent is served");
    (out, trace)
}

/// The probabilistic serial rule (unit eating speeds).
pub fn ps<T: Scalar>(problem: &Problem) -> RandomAssignment<T> {
    ps_with_trace(problem).0
}

/// [`ps`] with one trace entry per interval between exhaustion events.
pub fn ps_with_trace<T: Scalar>(
    problem: &Problem,
) -> (RandomAssignment<T>, Vec<EatingStageTrace<T>>) {
    let (n, m) = (problem.n(), problem.m());
    let mut residual: Vec<T> = problem.quotas().iter().map(|&q| T::from_count(q)).collect();
    let mut out = RandomAssignment::<T>::zeros(n, m);
    let mut trace = Vec::new();
    let mut now = T::zero();
    while now < T::one() {
        // Remaining supply always exceeds remaining demand, so every agent
        // finds an object with positive residual.
        let targets: Vec<usize> = (0..n)
            .map(|i| {
                *problem
                    .preference(i)
                    .order()
                    .iter()
                    .find(|&&a| residual[a].is_positive())
                    .expect("supply covers demand")
            })
            .collect();
        let mut eaters: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (i, &a) in targets.iter().enumerate() {
            eaters[a].push(i);
        }
        let mut step = T::one() - now.clone();
        for (a, group) in eaters.iter().enumerate() {
            if !group.is_empty() {
                let exhaust = residual[a].clone() / T::from_count(group.len());
                if exhaust < step {
                    step = exhaust;
                }
            }
        }
        let end = now.clone() + step.clone();
        let mut objects = Vec::new();
        for (a, group) in eaters.into_iter().enumerate() {
            if group.is_empty() {
                continue;
            }
            let before = residual[a].clone();
            for &i in &group {
                *out.get_mut(i, a) = out.get(i, a).clone() + step.clone();
            }
            residual[a] = residual[a].clone() - step.clone() * T::from_count(group.len());
            objects.push(ObjectStage {
                object: a,
                eaters: group,
                residual_before: before,
                residual_after: residual[a].clone(),
            });
        }
        trace.push(EatingStageTrace {
            stage: trace.len() + 1,
            interval: Some((now.clone(), end.clone())),
            objects,
            consumed: vec![step.clone(); n],
        });
        now = end;
    }
    (out, trace)
}

/// Every agent receives object `a` with probability `q_a / sum(q)`.
pub fn uniform<T: Scalar>(problem: &Problem) -> RandomAssignment<T> {
    let total = T::from_count(problem.total_supply());
    let row: Vec<T> = problem
        .quotas()
        .iter()
        .map(|&q| T::from_count(q) / total.clone())
        .collect();
    RandomAssignment::new(vec![row; problem.n()]).expect("rectangular")
}

/// A named rule, applicable to any problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Pr,
    Ps,
    Ria,
    Rsd,
    Uniform,
    SimpleIa(AgentOrder),
    SerialDictatorship(AgentOrder),
}

impl Rule {
    pub fn apply<T: Scalar>(&self, problem: &Problem) -> Result<RandomAssignment<T>> {
        match self {
            Rule::Pr => Ok(pr(problem)),
            Rule::Ps => Ok(ps(problem)),
            Rule::Ria => ria(problem),
            Rule::Rsd => rsd(problem),
            Rule::Uniform => Ok(uniform(problem)),
            Rule::SimpleIa(order) => Ok(simple_ia(problem, order)?.to_random()),
            Rule::SerialDictatorship(order) => Ok(serial_dictatorship(problem, order)?.to_random()),
        }
    }

    /// Invariant under relabeling agents and relabeling objects (among
    /// objects with equal quotas).
    pub fn is_symmetric(&self) -> bool {
        !matches!(self, Rule::SimpleIa(_) | Rule::SerialDictatorship(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Pr => "pr",
            Rule::Ps => "ps",
            Rule::Ria => "ria",
            Rule::Rsd => "rsd",
            Rule::Uniform => "uniform",
            Rule::SimpleIa(_) => "simple-ia",
            Rule::SerialDictatorship(_) => "sd",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
