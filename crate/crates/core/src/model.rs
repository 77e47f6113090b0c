//! Problems, preferences and assignments.
//!
//! Agents and objects are addressed by dense indices `0..n` and `0..m`; the
//! string ids supplied by the user live only in [`Problem`] for rendering and
//! lookup. Ranks are 1-based: the most preferred object has rank 1.

use crate::error::{Error, Result};
use crate::scalar::{sum_refs, Scalar};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use std::collections::HashSet;
use std::fmt;

/// A strict total order over the objects, stored as a permutation of `0..m`
/// (best first) together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Preference {
    order: Vec<usize>,
    ranks: Vec<usize>,
}

impl Preference {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let m = order.len();
        let mut ranks = vec![0; m];
        for (pos, &a) in order.iter().enumerate() {
            if a >= m {
                return Err(Error::InvalidPreference(format!(
                    "object index {a} out of range for {m} objects"
                )));
            }
            if ranks[a] != 0 {
                return Err(Error::InvalidPreference(format!(
                    "object index {a} listed twice"
                )));
            }
            ranks[a] = pos + 1;
        }
        Ok(Self { order, ranks })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            order: (0..m).collect(),
            ranks: (1..=m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Objects from best to worst.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn rank(&self, object: usize) -> Result<usize> {
        self.ranks
            .get(object)
            .copied()
            .ok_or(Error::ObjectOutOfRange {
                index: object,
                count: self.len(),
            })
    }

    /// Rank lookup for indices already known to be in range.
    pub(crate) fn rank_of(&self, object: usize) -> usize {
        self.ranks[object]
    }

    /// The object ranked `rank` (1-based).
    pub fn object_at(&self, rank: usize) -> Option<usize> {
        rank.checked_sub(1).and_then(|r| self.order.get(r).copied())
    }

    pub fn top(&self) -> usize {
        self.order[0]
    }

    /// `a` is strictly preferred to `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.ranks[a] < self.ranks[b]
    }

    /// Objects strictly better than `object`, or weakly better when `weak`.
    pub fn upper_contour(&self, object: usize, weak: bool) -> Result<Vec<usize>> {
        let r = self.rank(object)?;
        let end = if weak { r } else { r - 1 };
        Ok(self.order[..end].to_vec())
    }
}

/// Cumulative share of `row` over the weak upper contour set of `object`.
pub fn surplus<T: Scalar>(row: &[T], pref: &Preference, object: usize) -> Result<T> {
    if row.len() != pref.len() {
        return Err(Error::Shape {
            expected: format!("row of length {}", pref.len()),
            found: format!("row of length {}", row.len()),
        });
    }
    let r = pref.rank(object)?;
    Ok(sum_refs(pref.order[..r].iter().map(|&a| &row[a])))
}

/// Prefix sums of `row` along `pref`: entry `k - 1` is the share of the
/// agent's `k` best objects.
pub(crate) fn cumulative<T: Scalar>(row: &[T], pref: &Preference) -> Vec<T> {
    let mut acc = T::zero();
    pref.order
        .iter()
        .map(|&a| {
            acc = acc.clone() + row[a].clone();
            acc.clone()
        })
        .collect()
}

/// A feasibility problem as read from user input, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub agents: Vec<String>,
    pub objects: Vec<(String, i64)>,
    /// One entry per agent id, objects listed best first.
    pub preferences: Vec<(String, Vec<String>)>,
}

/// One violated feasibility condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    NoAgents,
    NoObjects,
    DuplicateAgent {
        agent: String,
    },
    DuplicateObject {
        object: String,
    },
    NonPositiveQuota {
        object: String,
        quota: i64,
    },
    InsufficientSupply {
        supply: i64,
        agents: usize,
    },
    MissingPreference {
        agent: String,
    },
    UnknownAgentPreference {
        agent: String,
    },
    DuplicatePreference {
        agent: String,
    },
    NotAPermutation {
        agent: String,
        detail: String,
    },
    Shape {
        expected: String,
        found: String,
    },
    EntryOutOfRange {
        agent: usize,
        object: usize,
        value: String,
    },
    RowSum {
        agent: usize,
        sum: String,
    },
    OverQuota {
        object: usize,
        sum: String,
        quota: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAgents => write!(f, "no agents"),
            Violation::NoObjects => write!(f, "no objects"),
            Violation::DuplicateAgent { agent } => write!(f, "agent `{agent}` listed twice"),
            Violation::DuplicateObject { object } => write!(f, "object `{object}` listed twice"),
            Violation::NonPositiveQuota { object, quota } => {
                write!(
                    f,
                    "object `{object}` has quota {quota}; quotas must be positive"
                )
            }
            Violation::InsufficientSupply { supply, agents } => {
                write!(f, "total supply {supply} is less than the {agents} agents")
            }
            Violation::MissingPreference { agent } => {
                write!(f, "agent `{agent}` has no preference")
            }
            Violation::UnknownAgentPreference { agent } => {
                write!(f, "preference given for unknown agent `{agent}`")
            }
            Violation::DuplicatePreference { agent } => {
                write!(f, "agent `{agent}` has two preferences")
            }
            Violation::NotAPermutation { agent, detail } => {
                write!(
                    f,
                    "preference of agent `{agent}` is not an order over all objects: {detail}"
                )
            }
            Violation::Shape { expected, found } => {
                write!(f, "shape mismatch: expected {expected}, found {found}")
            }
            Violation::EntryOutOfRange {
                agent,
                object,
                value,
            } => {
                write!(f, "entry ({agent}, {object}) = {value} is outside [0, 1]")
            }
            Violation::RowSum { agent, sum } => write!(f, "row {agent} sums to {sum}, not 1"),
            Violation::OverQuota { object, sum, quota } => {
                write!(f, "column {object} sums to {sum}, above quota {quota}")
            }
        }
    }
}

/// Checks a raw problem and lists every violated condition.
pub fn validate(spec: &ProblemSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    if spec.agents.is_empty() {
        out.push(Violation::NoAgents);
    }
    if spec.objects.is_empty() {
        out.push(Violation::NoObjects);
    }
    let mut seen = HashSet::new();
    for a in &spec.agents {
        if !seen.insert(a.as_str()) {
            out.push(Violation::DuplicateAgent { agent: a.clone() });
        }
    }
    let mut objects = HashSet::new();
    for (o, q) in &spec.objects {
        if !objects.insert(o.as_str()) {
            out.push(Violation::DuplicateObject { object: o.clone() });
        }
        if *q <= 0 {
            out.push(Violation::NonPositiveQuota {
                object: o.clone(),
                quota: *q,
            });
        }
    }
    let supply: i64 = spec.objects.iter().map(|(_, q)| (*q).max(0)).sum();
    if supply < spec.agents.len() as i64 {
        out.push(Violation::InsufficientSupply {
            supply,
            agents: spec.agents.len(),
        });
    }
    let mut given = HashSet::new();
    for (agent, list) in &spec.preferences {
        if !seen.contains(agent.as_str()) {
            out.push(Violation::UnknownAgentPreference {
                agent: agent.clone(),
            });
            continue;
        }
        if !given.insert(agent.as_str()) {
            out.push(Violation::DuplicatePreference {
                agent: agent.clone(),
            });
            continue;
        }
        let mut listed = HashSet::new();
        for o in list {
            if !objects.contains(o.as_str()) {
                out.push(Violation::NotAPermutation {
                    agent: agent.clone(),
                    detail: format!("unknown object `{o}`"),
                });
            } else if !listed.insert(o.as_str()) {
                out.push(Violation::NotAPermutation {
                    agent: agent.clone(),
                    detail: format!("object `{o}` listed twice"),
                });
            }
        }
        for (o, _) in &spec.objects {
            if !listed.contains(o.as_str()) {
                out.push(Violation::NotAPermutation {
                    agent: agent.clone(),
                    detail: format!("object `{o}` missing"),
                });
            }
        }
    }
    for a in &spec.agents {
        if !given.contains(a.as_str()) {
            out.push(Violation::MissingPreference { agent: a.clone() });
        }
    }
    out
}

/// A validated assignment problem: agents, objects with positive integer
/// quotas whose total covers the agents, and one strict preference per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Problem {
    agents: Vec<String>,
    objects: Vec<String>,
    quotas: Vec<usize>,
    profile: Vec<Preference>,
}

/// Default object names: `a`, `b`, ... then `o27`, `o28`, ...
pub fn object_name(index: usize) -> String {
    if index < 26 {
        ((b'a' + index as u8) as char).to_string()
    } else {
        format!("o{}", index + 1)
    }
}

impl Problem {
    pub fn from_spec(spec: &ProblemSpec) -> Result<Self> {
        let violations = validate(spec);
        if !violations.is_empty() {
            return Err(Error::InvalidProblem(violations));
        }
        let objects: Vec<String> = spec.objects.iter().map(|(o, _)| o.clone()).collect();
        let quotas = spec.objects.iter().map(|(_, q)| *q as usize).collect();
        let lookup = |o: &str| objects.iter().position(|x| x == o).expect("validated");
        let profile = spec
            .agents
            .iter()
            .map(|agent| {
                let (_, list) = spec
                    .preferences
                    .iter()
                    .find(|(a, _)| a == agent)
                    .expect("validated");
                Preference::new(list.iter().map(|o| lookup(o)).collect()).expect("validated")
            })
            .collect();
        Ok(Self {
            agents: spec.agents.clone(),
            objects,
            quotas,
            profile,
        })
    }

    /// Builds a problem over index-named agents (`1..=n`) and objects
    /// (`a`, `b`, ...).
    pub fn from_indices(quotas: Vec<usize>, profile: Vec<Preference>) -> Result<Self> {
        let m = quotas.len();
        let mut violations = Vec::new();
        if profile.is_empty() {
            violations.push(Violation::NoAgents);
        }
        if m == 0 {
            violations.push(Violation::NoObjects);
        }
        for (a, &q) in quotas.iter().enumerate() {
            if q == 0 {
                violations.push(Violation::NonPositiveQuota {
                    object: object_name(a),
                    quota: 0,
                });
            }
        }
        let supply: usize = quotas.iter().sum();
        if supply < profile.len() {
            violations.push(Violation::InsufficientSupply {
                supply: supply as i64,
                agents: profile.len(),
            });
        }
        for (i, p) in profile.iter().enumerate() {
            if p.len() != m {
                violations.push(Violation::NotAPermutation {
                    agent: (i + 1).to_string(),
                    detail: format!("ranks {} objects, expected {m}", p.len()),
                });
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidProblem(violations));
        }
        Ok(Self {
            agents: (1..=profile.len()).map(|i| i.to_string()).collect(),
            objects: (0..m).map(object_name).collect(),
            quotas,
            profile,
        })
    }

    pub fn to_spec(&self) -> ProblemSpec {
        ProblemSpec {
            agents: self.agents.clone(),
            objects: self
                .objects
                .iter()
                .zip(&self.quotas)
                .map(|(o, &q)| (o.clone(), q as i64))
                .collect(),
            preferences: self
                .agents
                .iter()
                .zip(&self.profile)
                .map(|(a, p)| {
                    (
                        a.clone(),
                        p.order().iter().map(|&o| self.objects[o].clone()).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn m(&self) -> usize {
        self.objects.len()
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn quotas(&self) -> &[usize] {
        &self.quotas
    }

    pub fn quota(&self, object: usize) -> usize {
        self.quotas[object]
    }

    pub fn total_supply(&self) -> usize {
        self.quotas.iter().sum()
    }

    pub fn profile(&self) -> &[Preference] {
        &self.profile
    }

    pub fn preference(&self, agent: usize) -> &Preference {
        &self.profile[agent]
    }

    pub fn agent_index(&self, id: &str) -> Result<usize> {
        self.agents
            .iter()
            .position(|a| a == id)
            .ok_or_else(|| Error::UnknownAgent(id.to_string()))
    }

    pub fn object_index(&self, id: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == id)
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    /// The same problem with agent `agent` reporting `pref` instead.
    pub fn with_preference(&self, agent: usize, pref: Preference) -> Self {
        let mut next = self.clone();
        next.profile[agent] = pref;
        next
    }

    /// Agents that rank `object` exactly `k`-th.
    pub fn equal_rank_set(&self, object: usize, k: usize) -> Result<Vec<usize>> {
        if object >= self.m() {
            return Err(Error::ObjectOutOfRange {
                index: object,
                count: self.m(),
            });
        }
        if k == 0 || k > self.m() {
            return Err(Error::RankOutOfRange {
                rank: k,
                count: self.m(),
            });
        }
        Ok((0..self.n())
            .filter(|&i| self.profile[i].rank_of(object) == k)
            .collect())
    }

    pub(crate) fn check_shape<T>(&self, rows: &[Vec<T>]) -> Result<()> {
        let ok = rows.len() == self.n() && rows.iter().all(|r| r.len() == self.m());
        if ok {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: format!("{}x{} matrix", self.n(), self.m()),
                found: format!(
                    "{} rows of lengths {:?}",
                    rows.len(),
                    rows.iter().map(Vec::len).collect::<Vec<_>>()
                ),
            })
        }
    }
}

/// An `n x m` matrix of shares; row `i` is agent `i`'s lottery.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RandomAssignment<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> RandomAssignment<T> {
    /// Wraps a rectangular matrix. Feasibility is checked separately by
    /// [`validate_assignment`].
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        if let Some(first) = rows.first() {
            if let Some(bad) = rows.iter().find(|r| r.len() != first.len()) {
                return Err(Error::Shape {
                    expected: format!("rows of length {}", first.len()),
                    found: format!("a row of length {}", bad.len()),
                });
            }
        }
        Ok(Self { rows })
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self {
            rows: vec![vec![T::zero(); m]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, agent: usize, object: usize) -> &T {
        &self.rows[agent][object]
    }

    pub(crate) fn get_mut(&mut self, agent: usize, object: usize) -> &mut T {
        &mut self.rows[agent][object]
    }

    pub fn row(&self, agent: usize) -> &[T] {
        &self.rows[agent]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.rows
    }

    pub fn column_sum(&self, object: usize) -> T {
        sum_refs(self.rows.iter().map(|r| &r[object]))
    }

    pub fn column_sums(&self) -> Vec<T> {
        (0..self.m()).map(|a| self.column_sum(a)).collect()
    }

    /// Reinterprets a 0/1 matrix with one 1 per row as a deterministic
    /// assignment.
    pub fn to_deterministic(&self) -> Option<DeterministicAssignment> {
        let mut assigned = Vec::with_capacity(self.n());
        for row in &self.rows {
            let mut holder = None;
            for (a, v) in row.iter().enumerate() {
                if v.is_one() {
                    if holder.is_some() {
                        return None;
                    }
                    holder = Some(a);
                } else if !v.is_zero() {
                    return None;
                }
            }
            assigned.push(holder?);
        }
        Some(DeterministicAssignment {
            assigned,
            m: self.m(),
        })
    }
}

impl<T: Scalar> Serialize for RandomAssignment<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows.len()))?;
        for row in &self.rows {
            let strings: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            seq.serialize_element(&strings)?;
        }
        seq.end()
    }
}

/// One object per agent, stored as the object index held by each agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DeterministicAssignment {
    assigned: Vec<usize>,
    #[serde(skip)]
    m: usize,
}

impl DeterministicAssignment {
    pub fn new(assigned: Vec<usize>, m: usize) -> Result<Self> {
        if let Some(&bad) = assigned.iter().find(|&&a| a >= m) {
            return Err(Error::ObjectOutOfRange {
                index: bad,
                count: m,
            });
        }
        Ok(Self { assigned, m })
    }

    pub fn n(&self) -> usize {
        self.assigned.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn object_of(&self, agent: usize) -> usize {
        self.assigned[agent]
    }

    pub fn assigned(&self) -> &[usize] {
        &self.assigned
    }

    pub fn holders(&self, object: usize) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| self.assigned[i] == object)
            .collect()
    }

    pub fn load(&self, object: usize) -> usize {
        self.assigned.iter().filter(|&&a| a == object).count()
    }

    pub fn to_random<T: Scalar>(&self) -> RandomAssignment<T> {
        let mut out = RandomAssignment::zeros(self.n(), self.m);
        for (i, &a) in self.assigned.iter().enumerate() {
            *out.get_mut(i, a) = T::one();
        }
        out
    }
}

/// Lists every feasibility violation of `matrix` against `problem`.
pub fn validate_assignment<T: Scalar>(
    problem: &Problem,
    matrix: &RandomAssignment<T>,
) -> Vec<Violation> {
    if let Err(Error::Shape { expected, found }) = problem.check_shape(matrix.rows()) {
        return vec![Violation::Shape { expected, found }];
    }
    let mut out = Vec::new();
    for (i, row) in matrix.rows().iter().enumerate() {
        for (a, v) in row.iter().enumerate() {
            if v.is_negative() || *v > T::one() {
                out.push(Violation::EntryOutOfRange {
                    agent: i,
                    object: a,
                    value: v.to_string(),
                });
            }
        }
        let sum: T = sum_refs(row);
        if !sum.is_one() {
            out.push(Violation::RowSum {
                agent: i,
                sum: sum.to_string(),
            });
        }
    }
    for a in 0..problem.m() {
        let sum = matrix.column_sum(a);
        if sum > T::from_count(problem.quota(a)) {
            out.push(Violation::OverQuota {
                object: a,
                sum: sum.to_string(),
                quota: problem.quota(a),
            });
        }
    }
    out
}

/// Lists every feasibility violation of a deterministic assignment.
pub fn validate_deterministic(problem: &Problem, d: &DeterministicAssignment) -> Vec<Violation> {
    if d.n() != problem.n() || d.m() != problem.m() {
        return vec![Violation::Shape {
            expected: format!("{}x{}", problem.n(), problem.m()),
            found: format!("{}x{}", d.n(), d.m()),
        }];
    }
    (0..problem.m())
        .filter(|&a| d.load(a) > problem.quota(a))
        .map(|a| Violation::OverQuota {
            object: a,
            sum: d.load(a).to_string(),
            quota: problem.quota(a),
        })
        .collect()
}
