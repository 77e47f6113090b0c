//! Exact random assignment: the probabilistic rank rule and its competitors,
//! fairness and efficiency axioms as checkable predicates, exact LP oracles,
//! a generalized Birkhoff-von Neumann decomposer, and corpus-level audits.
//!
//! All math is generic over an exact [`Scalar`]; [`Rational`] is the
//! arbitrary-precision instantiation used by the audits and the CLI.

pub mod audit;
pub mod axioms;
pub mod corpus;
pub mod efficiency;
pub mod error;
pub mod instances;
pub mod lp;
pub mod manipulation;
pub mod model;
pub mod rules;
pub mod scalar;

pub use error::{Error, Result};
pub use model::{
    surplus, validate, validate_assignment, validate_deterministic, DeterministicAssignment,
    Preference, Problem, ProblemSpec, RandomAssignment, Violation,
};
pub use rules::{AgentOrder, Rule};
pub use scalar::Scalar;

/// Arbitrary-precision rational, the default scalar.
pub type Rational = num_rational::BigRational;

/// Random assignment over [`Rational`].
pub type Assignment = RandomAssignment<Rational>;

/// Axiom verdict over [`Rational`].
pub type Verdict = axioms::AxiomVerdict<Rational>;
