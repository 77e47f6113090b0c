//! The worked instances used throughout the tests and shipped as problem
//! files.

use crate::model::{Problem, ProblemSpec};

fn build(profile: &[&str], quotas: &[i64]) -> Problem {
    let m = quotas.len();
    let objects: Vec<(String, i64)> = (0..m)
        .map(|a| (crate::model::object_name(a), quotas[a]))
        .collect();
    let agents: Vec<String> = (1..=profile.len()).map(|i| i.to_string()).collect();
    let preferences = agents
        .iter()
        .zip(profile)
        .map(|(a, p)| (a.clone(), p.chars().map(|c| c.to_string()).collect()))
        .collect();
    Problem::from_spec(&ProblemSpec {
        agents,
        objects,
        preferences,
    })
    .expect("fixture is valid")
}

/// Builds a unit-quota problem from compact preference strings such as
/// `"acbd"` (best first, objects `a`, `b`, ...).
pub fn unit_problem(profile: &[&str]) -> Problem {
    let m = profile[0].len();
    build(profile, &vec![1; m])
}

/// As [`unit_problem`] with explicit quotas.
pub fn problem_with_quotas(profile: &[&str], quotas: &[i64]) -> Problem {
    build(profile, quotas)
}

/// Four agents, four unit objects; random immediate acceptance is
/// dominated here.
pub fn example1() -> Problem {
    unit_problem(&["acbd", "adbc", "bcad", "bdac"])
}

/// Four agents, four unit objects; the probabilistic rank walk-through.
pub fn example2() -> Problem {
    unit_problem(&["abcd", "acdb", "acdb", "bacd"])
}

/// [`example2`] with agent 1 reporting `a c b d`.
pub fn example2_misreport() -> Problem {
    unit_problem(&["acbd", "acdb", "acdb", "bacd"])
}

/// [`example2`] with agent 1 reporting `a c d b`.
pub fn example2_misreport_alt() -> Problem {
    unit_problem(&["acdb", "acdb", "acdb", "bacd"])
}

/// Three agents, three unit objects: `a b c`, `b a c`, `b a c`.
pub fn three_agent_counterexample() -> Problem {
    unit_problem(&["abc", "bac", "bac"])
}
