//! Corpus-level drivers: axiom reports for one assignment, counterexample
//! search for rule-level properties, the rule-by-axiom table and Monte Carlo
//! comparison of rank distributions.

use crate::axioms::{self, ser_fractions, Axiom, AxiomVerdict, Witness};
use crate::corpus::{random_corpus, unit_sizes, ProfileSpace, QuotaRule};
use crate::efficiency::{
    ex_post_efficient_check, pareto_efficient, rank_distribution, rank_efficient_check,
    sd_efficient_cycle_check, EfficiencyContext, Guard,
};
use crate::error::{Error, Result};
use crate::manipulation::{find_manipulation, ManipulationMode, ManipulationWitness};
use crate::model::{validate_assignment, Problem};
use crate::rules::Rule;
use crate::{Assignment, Rational, Verdict};
use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Evaluates one axiom on one assignment. `None` when the axiom only applies
/// to deterministic assignments and `matrix` is not one.
pub fn check_axiom(
    ctx: &EfficiencyContext<'_>,
    matrix: &Assignment,
    axiom: Axiom,
) -> Result<Option<Verdict>> {
    let problem = ctx.problem();
    let verdict = match axiom {
        Axiom::NonWasteful => axioms::non_wasteful(problem, matrix),
        Axiom::SdRankFair => axioms::sd_rank_fair(problem, matrix),
        Axiom::EqualRankEnvyFree => axioms::equal_rank_envy_free(problem, matrix),
        Axiom::EqualTreatmentOfEquals => axioms::equal_treatment_of_equals(problem, matrix),
        Axiom::WeakSdEnvyFree => axioms::weak_sd_envy_free(problem, matrix),
        Axiom::SdEnvyFree => axioms::sd_envy_free(problem, matrix),
        Axiom::SdEfficient => sd_efficient_cycle_check(problem, matrix),
        Axiom::RankEfficient => rank_efficient_check(problem, matrix, &ctx.limits())?,
        Axiom::ExPostEfficient => ctx.ex_post_efficient_check(matrix)?,
        Axiom::FavorsHigherRanks | Axiom::ParetoEfficient => {
            let Some(d) = matrix.to_deterministic() else {
                return Ok(None);
            };
            if axiom == Axiom::FavorsHigherRanks {
                axioms::favors_higher_ranks(problem, &d)
            } else {
                pareto_efficient(problem, &d, &ctx.limits())?
            }
        }
    };
    Ok(Some(verdict))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditEntry {
    pub axiom: Axiom,
    pub status: Status,
    pub witness: Option<Witness<Rational>>,
    pub description: Option<String>,
}

/// Axiom-by-axiom verdicts for one assignment.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub rule: Option<String>,
    pub assignment: Assignment,
    #[serde(serialize_with = "ser_fractions")]
    pub rank_distribution: Vec<Rational>,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn status(&self, axiom: Axiom) -> Option<Status> {
        self.entries
            .iter()
            .find(|e| e.axiom == axiom)
            .map(|e| e.status)
    }
}

/// Checks `axioms` on `matrix` in the given order.
pub fn audit_assignment(
    problem: &Problem,
    matrix: &Assignment,
    axioms: &[Axiom],
    limits: &Guard,
    rule: Option<&Rule>,
) -> Result<AuditReport> {
    let violations = validate_assignment(problem, matrix);
    if !violations.is_empty() {
        return Err(Error::InvalidAssignment(violations));
    }
    let global = axioms.iter().any(|a| {
        matches!(
            a,
            Axiom::RankEfficient | Axiom::ExPostEfficient | Axiom::ParetoEfficient
        )
    });
    if global {
        limits.check(problem)?;
    }
    let ctx = EfficiencyContext::new(problem, *limits);
    let mut entries = Vec::with_capacity(axioms.len());
    for &axiom in axioms {
        let entry = match check_axiom(&ctx, matrix, axiom)? {
            None => AuditEntry {
                axiom,
                status: Status::NotApplicable,
                witness: None,
                description: None,
            },
            Some(AxiomVerdict { holds, witness, .. }) => AuditEntry {
                axiom,
                status: if holds { Status::Pass } else { Status::Fail },
                description: witness.as_ref().map(|w| w.describe(problem)),
                witness,
            },
        };
        entries.push(entry);
    }
    Ok(AuditReport {
        rule: rule.map(|r| r.name().to_string()),
        assignment: matrix.clone(),
        rank_distribution: rank_distribution(problem, matrix).0,
        entries,
    })
}

/// Rule-level properties, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    WeakStrategyProof,
    StrategyProof,
    EqualTreatmentOfEquals,
    WeakSdEnvyFree,
    SdEnvyFree,
    EqualRankEnvyFree,
    ExPostEfficient,
    SdEfficient,
    SdRankFair,
    RankEfficient,
}

impl Property {
    pub const TABLE: [Property; 10] = [
        Property::WeakStrategyProof,
        Property::StrategyProof,
        Property::EqualTreatmentOfEquals,
        Property::WeakSdEnvyFree,
        Property::SdEnvyFree,
        Property::EqualRankEnvyFree,
        Property::ExPostEfficient,
        Property::SdEfficient,
        Property::SdRankFair,
        Property::RankEfficient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::WeakStrategyProof => "weak-strategy-proof",
            Property::StrategyProof => "strategy-proof",
            other => other.axiom().expect("axiom property").name(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Property::WeakStrategyProof => "Weak strategy-proofness",
            Property::StrategyProof => "Strategy-proofness",
            Property::EqualTreatmentOfEquals => "Equal treatment of equals",
            Property::WeakSdEnvyFree => "Weak sd-envy-freeness",
            Property::SdEnvyFree => "Sd-envy-freeness",
            Property::EqualRankEnvyFree => "Equal-rank envy-freeness",
            Property::ExPostEfficient => "Ex post efficiency",
            Property::SdEfficient => "Sd-efficiency",
            Property::SdRankFair => "Sd-rank-fairness",
            Property::RankEfficient => "Rank efficiency",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::TABLE.into_iter().find(|p| p.name() == name)
    }

    pub fn axiom(self) -> Option<Axiom> {
        Some(match self {
            Property::WeakStrategyProof | Property::StrategyProof => return None,
            Property::EqualTreatmentOfEquals => Axiom::EqualTreatmentOfEquals,
            Property::WeakSdEnvyFree => Axiom::WeakSdEnvyFree,
            Property::SdEnvyFree => Axiom::SdEnvyFree,
            Property::EqualRankEnvyFree => Axiom::EqualRankEnvyFree,
            Property::ExPostEfficient => Axiom::ExPostEfficient,
            Property::SdEfficient => Axiom::SdEfficient,
            Property::SdRankFair => Axiom::SdRankFair,
            Property::RankEfficient => Axiom::RankEfficient,
        })
    }

    pub fn manipulation_mode(self) -> Option<ManipulationMode> {
        match self {
            Property::WeakStrategyProof => Some(ManipulationMode::Weak),
            Property::StrategyProof => Some(ManipulationMode::Strict),
            _ => None,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    Axiom(Witness<Rational>),
    Manipulation(ManipulationWitness<Rational>),
}

/// A problem on which `rule` violates `property`.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub rule: String,
    pub property: Property,
    pub agents: usize,
    pub quotas: Vec<usize>,
    /// One `a>b>c` string per agent.
    pub profile: Vec<String>,
    pub assignment: Assignment,
    pub evidence: Evidence,
    #[serde(skip)]
    pub problem: Problem,
}

impl Counterexample {
    /// Re-derives the evidence from the raw definitions.
    pub fn confirms(&self, rule: &Rule) -> Result<bool> {
        let out: Assignment = rule.apply(&self.problem)?;
        if out != self.assignment {
            return Ok(false);
        }
        match &self.evidence {
            Evidence::Axiom(w) => Ok(w.confirms(&self.problem, &self.assignment)),
            Evidence::Manipulation(w) => w.replay(&self.problem, rule),
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violates {} on {} agents, quotas {:?}, profile [{}]",
            self.rule,
            self.property,
            self.agents,
            self.quotas,
            self.profile.join(", ")
        )?;
        match &self.evidence {
            Evidence::Axiom(w) => write!(f, ": {}", w.describe(&self.problem)),
            Evidence::Manipulation(w) => write!(
                f,
                ": agent {} reports {} instead of {}",
                self.problem.agents()[w.agent],
                order_string(&self.problem, &w.misreport),
                order_string(&self.problem, &w.truth)
            ),
        }
    }
}

fn order_string(problem: &Problem, order: &[usize]) -> String {
    order
        .iter()
        .map(|&a| problem.objects()[a].as_str())
        .join(">")
}

/// Checks one rule-level property on one problem.
pub fn check_property(
    problem: &Problem,
    rule: &Rule,
    property: Property,
    limits: &Guard,
) -> Result<Option<Counterexample>> {
    let assignment: Assignment = rule.apply(problem)?;
    let evidence = if let Some(mode) = property.manipulation_mode() {
        find_manipulation::<Rational>(problem, rule, mode)?.map(Evidence::Manipulation)
    } else {
        let axiom = property.axiom().expect("axiom property");
        let verdict = match axiom {
            Axiom::ExPostEfficient => ex_post_efficient_check(problem, &assignment, limits)?,
            Axiom::RankEfficient => rank_efficient_check(problem, &assignment, limits)?,
            _ => {
                let ctx = EfficiencyContext::new(problem, *limits);
                check_axiom(&ctx, &assignment, axiom)?.expect("applies to every assignment")
            }
        };
        verdict.witness.map(Evidence::Axiom)
    };
    Ok(evidence.map(|evidence| Counterexample {
        rule: rule.name().to_string(),
        property,
        agents: problem.n(),
        quotas: problem.quotas().to_vec(),
        profile: problem
            .profile()
            .iter()
            .map(|p| order_string(problem, p.order()))
            .collect(),
        assignment,
        evidence,
        problem: problem.clone(),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Random { seed: u64, samples: usize },
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_agents: usize,
    pub max_objects: usize,
    pub quotas: QuotaRule,
    pub mode: SearchMode,
    pub limits: Guard,
}

impl SearchConfig {
    pub fn exhaustive(max_agents: usize, max_objects: usize) -> Self {
        Self {
            max_agents,
            max_objects,
            quotas: QuotaRule::Unit,
            mode: SearchMode::Exhaustive,
            limits: Guard::default(),
        }
    }

    pub fn bounds(&self) -> String {
        let quotas = match &self.quotas {
            QuotaRule::Unit => "unit quotas".to_string(),
            QuotaRule::Fixed(q) => format!("quotas {q:?}"),
            QuotaRule::Random { max } => format!("quotas 1..={max}"),
        };
        match self.mode {
            SearchMode::Exhaustive => format!(
                "exhaustive up to {} agents x {} objects, {quotas}",
                self.max_agents, self.max_objects
            ),
            SearchMode::Random { seed, samples } => format!(
                "{samples} random {} agents x {} objects, {quotas}, seed {seed}",
                self.max_agents, self.max_objects
            ),
        }
    }

    /// `(agents, quotas)` shapes of the exhaustive sweep, smallest first.
    pub fn shapes(&self) -> Vec<(usize, Vec<usize>)> {
        let per_quotas = |q: Vec<usize>| {
            let supply = q.iter().sum::<usize>().min(self.max_agents);
            (1..=supply).map(move |n| (n, q.clone()))
        };
        let mut shapes: Vec<(usize, Vec<usize>)> = match &self.quotas {
            QuotaRule::Unit => unit_sizes(self.max_agents, self.max_objects)
                .into_iter()
                .map(|(n, m)| (n, vec![1; m]))
                .collect(),
            QuotaRule::Fixed(q) => per_quotas(q.clone()).collect(),
            QuotaRule::Random { max } => (1..=self.max_objects)
                .flat_map(|m| {
                    (0..m)
                        .map(|_| 1..=*max)
                        .multi_cartesian_product()
                        .collect::<Vec<_>>()
                })
                .flat_map(per_quotas)
                .collect(),
        };
        shapes.sort_by(|a, b| (a.0, a.1.len(), &a.1).cmp(&(b.0, b.1.len(), &b.1)));
        shapes
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub rule: String,
    pub property: Property,
    pub bounds: String,
    /// Problems examined, counting the counterexample itself.
    pub examined: usize,
    pub counterexample: Option<Counterexample>,
}

/// Index-ordered parallel search: returns the smallest index whose check
/// yields a value, independent of scheduling.
fn first_hit<X: Send>(
    len: usize,
    check: impl Fn(usize) -> Result<Option<X>> + Sync,
) -> Result<Option<(usize, X)>> {
    (0..len)
        .into_par_iter()
        .find_map_first(|i| match check(i) {
            Ok(None) => None,
            Ok(Some(x)) => Some(Ok((i, x))),
            Err(e) => Some(Err(e)),
        })
        .transpose()
}

/// Searches for a problem on which `rule` violates `property`. Exhaustive
/// sweeps go through shapes smallest first and canonicalize profiles when
/// the rule is symmetric.
pub fn search(rule: &Rule, property: Property, config: &SearchConfig) -> Result<SearchOutcome> {
    let mut examined = 0;
    let mut found = None;
    match &config.mode {
        SearchMode::Exhaustive => {
            for (n, quotas) in config.shapes() {
                let space = if rule.is_symmetric() {
                    ProfileSpace::canonical(n, quotas)?
                } else {
                    ProfileSpace::full(n, quotas)?
                };
                let hit = first_hit(space.len(), |i| {
                    check_property(&space.problem(i), rule, property, &config.limits)
                })?;
                match hit {
                    Some((i, c)) => {
                        examined += i + 1;
                        found = Some(c);
                        break;
                    }
                    None => examined += space.len(),
                }
            }
        }
        SearchMode::Random { seed, samples } => {
            let (n, m) = (config.max_agents, config.max_objects);
            if config.quotas == QuotaRule::Unit && m < n {
                return Err(Error::Shape {
                    expected: format!("at least {n} objects for unit quotas"),
                    found: format!("{m} objects"),
                });
            }
            let corpus = random_corpus(*seed, *samples, n, m, &config.quotas);
            let hit = first_hit(corpus.len(), |i| {
                check_property(&corpus[i], rule, property, &config.limits)
            })?;
            examined = hit.as_ref().map_or(corpus.len(), |(i, _)| i + 1);
            found = hit.map(|(_, c)| c);
        }
    }
    Ok(SearchOutcome {
        rule: rule.name().to_string(),
        property,
        bounds: config.bounds(),
        examined,
        counterexample: found,
    })
}

/// The four rules compared in the table, in column order.
pub fn table_rules() -> [Rule; 4] {
    [Rule::Rsd, Rule::Ps, Rule::Ria, Rule::Pr]
}

#[derive(Debug, Clone, Serialize)]
pub struct TableCell {
    pub holds: bool,
    pub outcome: SearchOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleTable {
    pub bounds: String,
    pub rules: Vec<String>,
    /// `rows[p][r]` for property `Property::TABLE[p]` and rule `r`.
    pub rows: Vec<(Property, Vec<TableCell>)>,
}

impl RuleTable {
    pub fn cell(&self, property: Property, rule: &str) -> Option<&TableCell> {
        let r = self.rules.iter().position(|x| x == rule)?;
        self.rows
            .iter()
            .find(|(p, _)| *p == property)
            .map(|(_, cells)| &cells[r])
    }

    /// Plain-text table; a mark of `x` is followed by the size of the first
    /// counterexample.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let width = Property::TABLE
            .iter()
            .map(|p| p.label().len())
            .max()
            .unwrap_or(0);
        out.push_str(&format!("{:width$}", "Axiom"));
        for r in &self.rules {
            out.push_str(&format!("  {:>9}", r.to_uppercase()));
        }
        out.push('\n');
        for (property, cells) in &self.rows {
            out.push_str(&format!("{:width$}", property.label()));
            for cell in cells {
                let mark = match &cell.outcome.counterexample {
                    None => "yes".to_string(),
                    Some(c) => format!("no {}x{}", c.agents, c.quotas.len()),
                };
                out.push_str(&format!("  {mark:>9}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "yes: no counterexample ({}); no NxM: first counterexample size\n",
            self.bounds
        ));
        out
    }
}

/// Fills every (property, rule) cell by exhaustive search up to the bounds.
pub fn rule_table(config: &SearchConfig) -> Result<RuleTable> {
    let rules = table_rules();
    let rows = Property::TABLE
        .iter()
        .map(|&property| {
            let cells = rules
                .iter()
                .map(|rule| {
                    let outcome = search(rule, property, config)?;
                    Ok(TableCell {
                        holds: outcome.counterexample.is_none(),
                        outcome,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((property, cells))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RuleTable {
        bounds: config.bounds(),
        rules: rules.iter().map(|r| r.name().to_string()).collect(),
        rows,
    })
}

/// Axioms counted by [`compare`]; all are cheap per-assignment checks.
pub const COMPARE_AXIOMS: [Axiom; 6] = [
    Axiom::SdRankFair,
    Axiom::EqualRankEnvyFree,
    Axiom::EqualTreatmentOfEquals,
    Axiom::WeakSdEnvyFree,
    Axiom::SdEnvyFree,
    Axiom::SdEfficient,
];

#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub rules: Vec<Rule>,
    pub samples: usize,
    pub agents: usize,
    pub objects: usize,
    pub seed: u64,
    pub quotas: QuotaRule,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary {
    pub rule: String,
    pub samples: usize,
    /// Average `N(k)` over the sample, exact.
    #[serde(serialize_with = "ser_fractions")]
    pub average: Vec<Rational>,
    /// Violation counts per axiom of [`COMPARE_AXIOMS`].
    pub violations: Vec<(Axiom, usize)>,
}

/// Runs every rule on the same seeded sample.
pub fn compare(config: &CompareConfig) -> Result<Vec<CompareSummary>> {
    let corpus = random_corpus(
        config.seed,
        config.samples,
        config.agents,
        config.objects,
        &config.quotas,
    );
    config
        .rules
        .iter()
        .map(|rule| {
            let per_problem: Vec<(Vec<Rational>, Vec<bool>)> = corpus
                .par_iter()
                .map(|p| {
                    let out: Assignment = rule.apply(p)?;
                    let ctx = EfficiencyContext::new(p, Guard::default());
                    let fails = COMPARE_AXIOMS
                        .iter()
                        .map(|&a| Ok(!check_axiom(&ctx, &out, a)?.expect("applies").holds))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((rank_distribution(p, &out).0, fails))
                })
                .collect::<Result<_>>()?;
            let mut total = vec![Rational::zero(); config.objects];
            let mut counts = vec![0; COMPARE_AXIOMS.len()];
            for (dist, fails) in &per_problem {
                for (t, d) in total.iter_mut().zip(dist) {
                    *t += d;
                }
                for (c, &f) in counts.iter_mut().zip(fails) {
                    *c += usize::from(f);
                }
            }
            if config.samples > 0 {
                let s = Rational::from_integer(config.samples.into());
                for t in &mut total {
                    *t /= &s;
                }
            }
            Ok(CompareSummary {
                rule: rule.name().to_string(),
                samples: config.samples,
                average: total,
                violations: COMPARE_AXIOMS.iter().copied().zip(counts).collect(),
            })
        })
        .collect()
}
