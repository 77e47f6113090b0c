//! Strategy-proofness audits by exhaustive misreport enumeration.

use crate::axioms::{sd_strictly_dominates, sd_weakly_dominates, ser_fractions};
use crate::corpus::{all_preferences, MAX_ENUMERATED_OBJECTS};
use crate::error::{guard, Result};
use crate::model::{Preference, Problem};
use crate::rules::Rule;
use crate::scalar::Scalar;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Which notion a witness refutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManipulationMode {
    /// The misreport's row strictly sd-dominates the truthful row; refutes
    /// weak strategy-proofness.
    Weak,
    /// The truthful row does not weakly sd-dominate the misreport's row;
    /// refutes strategy-proofness.
    Strict,
    /// The misreport's row weakly sd-dominates the truthful row. This is the
    /// word-for-word reading, under which any misreport leaving the row
    /// unchanged counts; the truthful report itself is never tried.
    Literal,
}

impl ManipulationMode {
    pub fn name(self) -> &'static str {
        match self {
            ManipulationMode::Weak => "weak",
            ManipulationMode::Strict => "strict",
            ManipulationMode::Literal => "literal",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Self::Weak, Self::Strict, Self::Literal]
            .into_iter()
            .find(|m| m.name() == name)
    }

    /// Does reporting into `manipulated` refute the mode at `truthful`?
    pub fn refutes<T: Scalar>(self, truth: &Preference, truthful: &[T], manipulated: &[T]) -> bool {
        match self {
            ManipulationMode::Weak => sd_strictly_dominates(truth, manipulated, truthful),
            ManipulationMode::Strict => !sd_weakly_dominates(truth, truthful, manipulated),
            ManipulationMode::Literal => sd_weakly_dominates(truth, manipulated, truthful),
        }
    }
}

impl fmt::Display for ManipulationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct ManipulationWitness<T> {
    pub agent: usize,
    pub truth: Vec<usize>,
    pub misreport: Vec<usize>,
    #[serde(serialize_with = "ser_fractions")]
    pub truthful_row: Vec<T>,
    #[serde(serialize_with = "ser_fractions")]
    pub manipulated_row: Vec<T>,
    pub mode: ManipulationMode,
}

impl<T: Scalar> ManipulationWitness<T> {
    /// Reruns `rule` on the truthful and misreported profiles and checks
    /// that both rows and the verdict are reproduced.
    pub fn replay(&self, problem: &Problem, rule: &Rule) -> Result<bool> {
        let truth = problem.preference(self.agent);
        if truth.order() != self.truth.as_slice() || self.truth == self.misreport {
            return Ok(false);
        }
        let misreport = Preference::new(self.misreport.clone())?;
        let truthful = rule.apply::<T>(problem)?;
        let manipulated = rule.apply::<T>(&problem.with_preference(self.agent, misreport))?;
        Ok(truthful.row(self.agent) == self.truthful_row.as_slice()
            && manipulated.row(self.agent) == self.manipulated_row.as_slice()
            && self
                .mode
                .refutes(truth, &self.truthful_row, &self.manipulated_row))
    }
}

/// First profitable misreport over agents in index order and misreports in
/// lexicographic order.
pub fn find_manipulation<T: Scalar>(
    problem: &Problem,
    rule: &Rule,
    mode: ManipulationMode,
) -> Result<Option<ManipulationWitness<T>>> {
    guard("objects", problem.m(), MAX_ENUMERATED_OBJECTS)?;
    let truthful = rule.apply::<T>(problem)?;
    let reports = all_preferences(problem.m())?;
    for agent in 0..problem.n() {
        let truth = problem.preference(agent);
        for report in &reports {
            if report == truth {
                continue;
            }
            let outcome = rule.apply::<T>(&problem.with_preference(agent, report.clone()))?;
            if mode.refutes(truth, truthful.row(agent), outcome.row(agent)) {
                return Ok(Some(ManipulationWitness {
                    agent,
                    truth: truth.order().to_vec(),
                    misreport: report.order().to_vec(),
                    truthful_row: truthful.row(agent).to_vec(),
                    manipulated_row: outcome.row(agent).to_vec(),
                    mode,
                }));
            }
        }
    }
    Ok(None)
}

/// Outcome of [`audit_rule_sp`] over a corpus.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct SpSummary<T> {
    pub rule: String,
    pub mode: ManipulationMode,
    pub instances: usize,
    /// `(corpus index, witness)` in corpus order.
    pub witnesses: Vec<(usize, ManipulationWitness<T>)>,
}

impl<T> SpSummary<T> {
    pub fn manipulable(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_strategy_proof(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Runs [`find_manipulation`] on every problem; instances are checked in
/// parallel but witnesses are reported in corpus order.
pub fn audit_rule_sp<T: Scalar>(
    corpus: &[Problem],
    rule: &Rule,
    mode: ManipulationMode,
) -> Result<SpSummary<T>> {
    let found: Vec<Option<ManipulationWitness<T>>> = corpus
        .par_iter()
        .map(|p| find_manipulation(p, rule, mode))
        .collect::<Result<_>>()?;
    Ok(SpSummary {
        rule: rule.name().to_string(),
        mode,
        instances: corpus.len(),
        witnesses: found
            .into_iter()
            .enumerate()
            .filter_map(|(i, w)| w.map(|w| (i, w)))
            .collect(),
    })
}
