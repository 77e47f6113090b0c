//! Problem and assignment files (TOML).
//!
//! ```toml
//! agents = ["1", "2"]
//!
//! [[objects]]
//! id = "a"
//! quota = 1
//!
//! [preferences]
//! "1" = ["a", "b"]
//! ```

use probrank::model::ProblemSpec;
use probrank::{validate, Assignment, Problem, Rational, Scalar, Violation};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use toml::Spanned;

/// A parse or validation failure, with a 1-based line and column when the
/// offending item can be located.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub source: String,
    pub position: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((line, col)) => write!(f, "{}:{line}:{col}: {}", self.source, self.message),
            None => write!(f, "{}: {}", self.source, self.message),
        }
    }
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn toml_error(source: &str, text: &str, err: toml::de::Error) -> InputError {
    InputError {
        source: source.to_string(),
        position: err.span().map(|s| position(text, s.start)),
        message: err.message().trim().to_string(),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObject {
    id: String,
    quota: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    agents: Vec<Spanned<String>>,
    objects: Vec<Spanned<RawObject>>,
    preferences: BTreeMap<String, Spanned<Vec<String>>>,
}

#[derive(Debug, Serialize)]
struct ObjectOut<'a> {
    id: &'a str,
    quota: usize,
}

#[derive(Debug, Serialize)]
struct ProblemOut<'a> {
    agents: &'a [String],
    objects: Vec<ObjectOut<'a>>,
    preferences: BTreeMap<&'a str, Vec<&'a str>>,
}

/// Parses and validates a problem file.
pub fn parse_problem(source: &str, text: &str) -> Result<Problem, InputError> {
    let raw: RawProblem = toml::from_str(text).map_err(|e| toml_error(source, text, e))?;
    let spec = ProblemSpec {
        agents: raw.agents.iter().map(|a| a.get_ref().clone()).collect(),
        objects: raw
            .objects
            .iter()
            .map(|o| (o.get_ref().id.clone(), o.get_ref().quota))
            .collect(),
        preferences: raw
            .preferences
            .iter()
            .map(|(a, list)| (a.clone(), list.get_ref().clone()))
            .collect(),
    };
    let violations = validate(&spec);
    if let Some(first) = violations.first() {
        let span = locate(&raw, first);
        let message = violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(InputError {
            source: source.to_string(),
            position: span.map(|s| position(text, s.start)),
            message,
        });
    }
    Ok(Problem::from_spec(&spec).expect("validated"))
}

fn locate(raw: &RawProblem, violation: &Violation) -> Option<Range<usize>> {
    let agent_span = |agent: &str| {
        raw.agents
            .iter()
            .rev()
            .find(|a| a.get_ref() == agent)
            .map(|a| a.span())
    };
    let object_span = |object: &str| {
        raw.objects
            .iter()
            .rev()
            .find(|o| o.get_ref().id == object)
            .map(|o| o.span())
    };
    match violation {
        Violation::DuplicateAgent { agent } | Violation::MissingPreference { agent } => {
            agent_span(agent)
        }
        Violation::DuplicateObject { object } | Violation::NonPositiveQuota { object, .. } => {
            object_span(object)
        }
        Violation::UnknownAgentPreference { agent }
        | Violation::DuplicatePreference { agent }
        | Violation::NotAPermutation { agent, .. } => raw.preferences.get(agent).map(|l| l.span()),
        _ => None,
    }
}

/// Renders a problem in the file format; [`parse_problem`] inverts it.
pub fn render_problem(problem: &Problem) -> String {
    let objects = problem
        .objects()
        .iter()
        .zip(problem.quotas())
        .map(|(id, &quota)| ObjectOut { id, quota })
        .collect();
    let preferences = problem
        .agents()
        .iter()
        .zip(problem.profile())
        .map(|(agent, pref)| {
            (
                agent.as_str(),
                pref.order()
                    .iter()
                    .map(|&a| problem.objects()[a].as_str())
                    .collect(),
            )
        })
        .collect();
    toml::to_string(&ProblemOut {
        agents: problem.agents(),
        objects,
        preferences,
    })
    .expect("problem serializes")
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Text(String),
    Integer(i64),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAssignment {
    matrix: Spanned<Vec<Vec<Spanned<Entry>>>>,
}

/// Parses an assignment file: `matrix = [["1/2", "1/2"], ...]`, rows in
/// agent order, columns in object order. Integers are accepted as entries.
/// Only the shape is checked here.
pub fn parse_assignment(
    source: &str,
    text: &str,
    problem: &Problem,
) -> Result<Assignment, InputError> {
    let raw: RawAssignment = toml::from_str(text).map_err(|e| toml_error(source, text, e))?;
    let err = |span: Range<usize>, message: String| InputError {
        source: source.to_string(),
        position: Some(position(text, span.start)),
        message,
    };
    let rows = raw.matrix.get_ref();
    if rows.len() != problem.n() {
        return Err(err(
            raw.matrix.span(),
            format!("expected {} rows, found {}", problem.n(), rows.len()),
        ));
    }
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != problem.m() {
            let span = row.first().map_or(raw.matrix.span(), |e| e.span());
            return Err(err(
                span,
                format!(
                    "expected {} entries per row, found {}",
                    problem.m(),
                    row.len()
                ),
            ));
        }
        let mut parsed = Vec::with_capacity(row.len());
        for entry in row {
            let value = match entry.get_ref() {
                Entry::Text(s) => Rational::parse_exact(s)
                    .ok_or_else(|| err(entry.span(), format!("`{s}` is not a fraction")))?,
                Entry::Integer(i) => Rational::from_integer((*i).into()),
            };
            parsed.push(value);
        }
        out.push(parsed);
    }
    Ok(Assignment::new(out).expect("rectangular"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use probrank::instances::{example1, example2};

    #[test]
    fn problem_round_trip() {
        for p in [example1(), example2()] {
            let text = render_problem(&p);
            assert_eq!(parse_problem("x", &text).unwrap(), p);
        }
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_problem("f.problem", "agents = [\"1\"\n").unwrap_err();
        assert!(e.position.is_some());
        assert!(e.to_string().starts_with("f.problem:"));
    }

    #[test]
    fn unknown_object_is_located() {
        let text = "agents = [\"1\"]\n\n[[objects]]\nid = \"a\"\nquota = 1\n\n[preferences]\n\"1\" = [\"z\"]\n";
        let e = parse_problem("p", text).unwrap_err();
        assert_eq!(e.position.map(|p| p.0), Some(8));
        assert!(e.message.contains("unknown object `z`"));
    }

    #[test]
    fn assignment_entries() {
        let p = example1();
        let text = "matrix = [[1, 0, 0, 0], [0, 1, 0, 0], [\"0\", 0, \"1/2\", \"1/2\"], [0, 0, \"1/2\", \"1/2\"]]";
        let a = parse_assignment("m", text, &p).unwrap();
        assert_eq!(a.get(2, 2), &Rational::new(1.into(), 2.into()));
        let bad = "matrix = [[\"x\", 0, 0, 0]]";
        assert!(parse_assignment("m", bad, &p).is_err());
    }
}
