//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit
//! if any fails.

mod common;

use common::{alternating_speeds, brute_force, matrix, pr_with_speeds, r, Brute};
use probrank::audit::{rule_table, table_rules, Property, SearchConfig};
use probrank::axioms::{
    equal_rank_envy_free, favors_higher_ranks, sd_rank_fair, sd_strictly_dominates,
};
use probrank::corpus::{random_corpus, ProfileSpace, QuotaRule};
use probrank::efficiency::{
    bvn_decompose, deterministic_assignments, is_pareto_efficient_brute, rank_distribution,
    rank_dominates, sd_efficient_cycle_check, sd_efficient_lp_oracle, Guard,
};
use probrank::instances::*;
use probrank::lp::{solve, LinearProgram, LpStatus, Sense};
use probrank::{validate_deterministic, AgentOrder, Assignment, Problem, Rational, Rule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn apply(rule: &Rule, p: &Problem) -> Assignment {
    rule.apply(p).expect("rule applies")
}

fn full_3x3() -> Vec<Problem> {
    ProfileSpace::full(3, vec![1; 3]).unwrap().iter().collect()
}

fn canonical_4x4() -> Vec<Problem> {
    ProfileSpace::canonical(4, vec![1; 4])
        .unwrap()
        .iter()
        .collect()
}

/// Random 4x4 unit instances plus quota variants with fewer agents than
/// supply.
fn random_instances() -> Vec<Problem> {
    let mut out = random_corpus(1, 6000, 4, 4, &QuotaRule::Unit);
    out.extend(random_corpus(2, 2000, 4, 4, &QuotaRule::Random { max: 2 }));
    out.extend(random_corpus(3, 1000, 4, 3, &QuotaRule::Random { max: 3 }));
    out.extend(random_corpus(4, 1000, 3, 4, &QuotaRule::Unit));
    out
}

fn symmetric_rules() -> Vec<Rule> {
    vec![Rule::Pr, Rule::Ps, Rule::Ria, Rule::Rsd, Rule::Uniform]
}

/// Symmetric rules plus every fixed-order rule for `n` agents.
fn all_rules(n: usize) -> Vec<Rule> {
    let mut rules = symmetric_rules();
    for order in AgentOrder::all(n) {
        rules.push(Rule::SimpleIa(order.clone()));
        rules.push(Rule::SerialDictatorship(order));
    }
    rules
}

fn ac1() -> Outcome {
    let pr2 = matrix(&[
        [(1, 3), (0, 1), (0, 1), (2, 3)],
        [(1, 3), (0, 1), (1, 2), (1, 6)],
        [(1, 3), (0, 1), (1, 2), (1, 6)],
        [(0, 1), (1, 1), (0, 1), (0, 1)],
    ]);
    let manipulated = matrix(&[
        [(1, 3), (0, 1), (1, 3), (1, 3)],
        [(1, 3), (0, 1), (1, 3), (1, 3)],
        [(1, 3), (0, 1), (1, 3), (1, 3)],
        [(0, 1), (1, 1), (0, 1), (0, 1)],
    ]);
    let pi = matrix(&[
        [(1, 2), (0, 1), (3, 8), (1, 8)],
        [(1, 2), (0, 1), (1, 8), (3, 8)],
        [(0, 1), (1, 2), (3, 8), (1, 8)],
        [(0, 1), (1, 2), (1, 8), (3, 8)],
    ]);
    let pi_prime = matrix(&[
        [(1, 2), (0, 1), (1, 2), (0, 1)],
        [(1, 2), (0, 1), (0, 1), (1, 2)],
        [(0, 1), (1, 2), (1, 2), (0, 1)],
        [(0, 1), (1, 2), (0, 1), (1, 2)],
    ]);
    ensure(apply(&Rule::Pr, &example2()) == pr2, || {
        "PR on example 2".into()
    })?;
    ensure(
        apply(&Rule::Pr, &example2_misreport()) == manipulated,
        || "PR under the first misreport".into(),
    )?;
    ensure(
        apply(&Rule::Pr, &example2_misreport_alt()) == manipulated,
        || "PR under the second misreport".into(),
    )?;
    ensure(apply(&Rule::Ria, &example1()) == pi, || {
        "RIA on example 1".into()
    })?;
    ensure(apply(&Rule::Pr, &example1()) == pi_prime, || {
        "PR on example 1".into()
    })?;
    Ok("5 matrices exact".into())
}

fn ac2() -> Outcome {
    let p1 = example1();
    let pi = apply(&Rule::Ria, &p1);
    let pi_prime = apply(&Rule::Pr, &p1);
    for i in 0..4 {
        ensure(
            sd_strictly_dominates(p1.preference(i), pi_prime.row(i), pi.row(i)),
            || format!("agent {} not strictly better off", i + 1),
        )?;
    }
    let p2 = example2();
    let pr = apply(&Rule::Pr, &p2);
    for j in [1, 2] {
        ensure(
            sd_strictly_dominates(p2.preference(0), pr.row(j), pr.row(0)),
            || format!("row {} does not dominate row 1", j + 1),
        )?;
    }
    let better = matrix(&[
        [(1, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (0, 1), (1, 2), (1, 2)],
        [(0, 1), (0, 1), (1, 2), (1, 2)],
        [(0, 1), (1, 1), (0, 1), (0, 1)],
    ]);
    let n_better = rank_distribution(&p2, &better);
    let n_pr = rank_distribution(&p2, &pr);
    let int = |v: i64| r(v, 1);
    ensure(n_better.0 == vec![int(2), int(3), int(4), int(4)], || {
        format!("rank distribution {:?}", n_better.0)
    })?;
    ensure(n_pr.0 == vec![int(2), int(3), r(10, 3), int(4)], || {
        format!("rank distribution {:?}", n_pr.0)
    })?;
    ensure(
        rank_dominates(&p2, &better, &pr) && !rank_dominates(&p2, &pr, &better),
        || "rank dominance".into(),
    )?;
    Ok("N = (2,3,4,4) vs (2,3,10/3,4)".into())
}

fn ac3() -> Outcome {
    let mut corpus = full_3x3();
    let exhaustive = corpus.len();
    let random = random_instances();
    corpus.extend(random.iter().cloned());
    let bad = corpus.par_iter().position_first(|p| {
        let out = apply(&Rule::Pr, p);
        !sd_rank_fair(p, &out).holds || !equal_rank_envy_free(p, &out).holds
    });
    ensure(bad.is_none(), || {
        format!("PR fails on instance {}", bad.unwrap())
    })?;
    Ok(format!(
        "{exhaustive} exhaustive + {} random instances",
        random.len()
    ))
}

fn ac4() -> Outcome {
    let mut corpus = full_3x3();
    corpus.extend(canonical_4x4());
    let mut differing = 0;
    for rule in [Rule::Ps, Rule::Rsd, Rule::Ria, Rule::Uniform] {
        let results: Vec<Option<bool>> = corpus
            .par_iter()
            .map(|p| {
                let out = apply(&rule, p);
                (out != apply(&Rule::Pr, p))
                    .then(|| !sd_rank_fair(p, &out).holds || !equal_rank_envy_free(p, &out).holds)
            })
            .collect();
        if let Some(i) = results.iter().position(|x| *x == Some(false)) {
            return Err(format!(
                "{} differs from PR but passes both on instance {i}",
                rule.name()
            ));
        }
        differing += results.iter().flatten().count();
    }
    Ok(format!(
        "{} instances, {differing} rule outputs differ from PR and all fail an axiom",
        corpus.len()
    ))
}

fn ac5() -> Outcome {
    let guard = Guard::default();
    let mut checked = 0;
    let mut fair = 0;
    let corpora = [
        (full_3x3(), all_rules(3)),
        (canonical_4x4(), symmetric_rules()),
    ];
    for (corpus, rules) in &corpora {
        for rule in rules {
            let rows: Vec<Result<(bool, bool), String>> = corpus
                .par_iter()
                .map(|p| {
                    let out = apply(rule, p);
                    let cycle = sd_efficient_cycle_check(p, &out).holds;
                    let lp = sd_efficient_lp_oracle(p, &out, &guard).unwrap().holds;
                    if cycle != lp {
                        return Err(format!(
                            "{} checkers disagree on {:?}",
                            rule.name(),
                            p.profile()
                        ));
                    }
                    let f = sd_rank_fair(p, &out).holds;
                    if f && !cycle {
                        return Err(format!("{} sd-rank-fair but not sd-efficient", rule.name()));
                    }
                    Ok((f, cycle))
                })
                .collect();
            for row in rows {
                fair += usize::from(row?.0);
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} assignments, {fair} sd-rank-fair, checkers agree on all"
    ))
}

fn ac6() -> Outcome {
    let guard = Guard::default();
    let mut checked = 0;
    for p in full_3x3() {
        for d in deterministic_assignments(&p, &guard).unwrap() {
            let a = sd_rank_fair::<Rational>(&p, &d.to_random()).holds;
            let b = favors_higher_ranks::<Rational>(&p, &d).holds;
            ensure(a == b, || {
                format!("disagree on {:?} / {:?}", p.profile(), d.assigned())
            })?;
            checked += 1;
        }
    }
    let p = three_agent_counterexample();
    let d = probrank::DeterministicAssignment::new(vec![2, 0, 1], 3).unwrap();
    let m: Assignment = d.to_random();
    ensure(is_pareto_efficient_brute(&p, &d), || {
        "D is not Pareto-efficient".into()
    })?;
    ensure(
        sd_efficient_lp_oracle(&p, &m, &guard).unwrap().holds,
        || "D is not sd-efficient".into(),
    )?;
    ensure(sd_efficient_cycle_check(&p, &m).holds, || {
        "cycle check rejects D".into()
    })?;
    ensure(!sd_rank_fair(&p, &m).holds, || "D is sd-rank-fair".into())?;
    ensure(!favors_higher_ranks::<Rational>(&p, &d).holds, || {
        "D favors higher ranks".into()
    })?;
    Ok(format!(
        "{checked} deterministic assignments agree; D = (c,a,b) fails both"
    ))
}

const EXPECTED_TABLE: [[bool; 4]; 10] = [
    [true, true, false, false],
    [true, false, false, false],
    [true, true, true, true],
    [true, true, false, false],
    [false, true, false, false],
    [false, false, false, true],
    [true, true, true, true],
    [false, true, false, true],
    [false, false, false, true],
    [false, false, false, false],
];

fn ac7() -> Outcome {
    let table = rule_table(&SearchConfig::exhaustive(4, 4)).map_err(|e| e.to_string())?;
    let rules = table_rules();
    for (p, expected) in Property::TABLE.iter().zip(EXPECTED_TABLE) {
        for (rule, want) in rules.iter().zip(expected) {
            let cell = table.cell(*p, rule.name()).unwrap();
            ensure(cell.holds == want, || {
                format!("{} / {}", p.name(), rule.name())
            })?;
            if let Some(c) = &cell.outcome.counterexample {
                ensure(c.confirms(rule).unwrap(), || {
                    format!("{} / {} witness does not replay", p.name(), rule.name())
                })?;
            }
        }
    }
    Ok("40 cells match; every counterexample replays".into())
}

fn ac8() -> Outcome {
    let mut corpus = full_3x3();
    corpus.extend(canonical_4x4());
    corpus.extend(random_corpus(8, 500, 4, 4, &QuotaRule::Random { max: 2 }));
    corpus.extend(random_corpus(9, 500, 3, 4, &QuotaRule::Random { max: 2 }));
    let checked: Vec<Result<usize, String>> = corpus
        .par_iter()
        .map(|p| {
            let mut count = 0;
            for rule in symmetric_rules() {
                let out = apply(&rule, p);
                let dec = bvn_decompose(p, &out).map_err(|e| e.to_string())?;
                let ok = dec.reconstruct(p.n(), p.m()) == out
                    && dec.total_weight() == r(1, 1)
                    && dec.parts.len() <= p.n() * p.m() + 1
                    && dec
                        .parts
                        .iter()
                        .all(|(w, d)| *w > r(0, 1) && validate_deterministic(p, d).is_empty());
                if !ok {
                    return Err(format!("{} on {:?}", rule.name(), p.profile()));
                }
                count += 1;
            }
            Ok(count)
        })
        .collect();
    let mut total = 0;
    for c in checked {
        total += c?;
    }
    Ok(format!("{total} assignments decomposed exactly"))
}

fn ac9() -> Outcome {
    let mut corpus = full_3x3();
    corpus.extend(canonical_4x4());
    corpus.extend(random_corpus(10, 1000, 4, 4, &QuotaRule::Random { max: 2 }));

    for p in &corpus {
        let u = apply(&Rule::Uniform, p);
        ensure(equal_rank_envy_free(p, &u).holds, || {
            format!("uniform fails ERE on {:?}", p.profile())
        })?;
    }
    let uniform_hit = corpus
        .iter()
        .position(|p| !sd_rank_fair(p, &apply(&Rule::Uniform, p)).holds)
        .ok_or("uniform never fails sd-rank-fairness")?;

    for p in &corpus {
        let v = pr_with_speeds(p, &alternating_speeds(p.n()));
        ensure(sd_rank_fair(p, &v).holds, || {
            format!("speed variant not sd-rank-fair on {:?}", p.profile())
        })?;
    }
    let speed_hit = corpus
        .iter()
        .position(|p| {
            !equal_rank_envy_free(p, &pr_with_speeds(p, &alternating_speeds(p.n()))).holds
        })
        .ok_or("speed variant never fails equal-rank envy-freeness")?;
    Ok(format!(
        "uniform fails sd-rank-fairness first on instance {uniform_hit}, speeds (1,2) fail ERE first on instance {speed_hit} of {}",
        corpus.len()
    ))
}

fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram<Rational> {
    let vars = rng.random_range(1..=4);
    let rows = rng.random_range(1..=4);
    let coeff = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| r(rng.random_range(lo..=hi), 1);
    let objective = (0..vars).map(|_| coeff(rng, -3, 3)).collect();
    let mut lp = LinearProgram::new(vars).maximize(objective);
    for _ in 0..rows {
        let c = (0..vars).map(|_| coeff(rng, -3, 3)).collect();
        let sense = [Sense::Le, Sense::Le, Sense::Ge, Sense::Eq][rng.random_range(0..4)];
        lp.add(c, sense, coeff(rng, -2, 6));
    }
    lp
}

fn ac10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut counts = [0usize; 3];
    for case in 0..1000 {
        let lp = random_lp(&mut rng);
        let got = solve(&lp).map_err(|e| e.to_string())?;
        let want = brute_force(&lp);
        let agree = match (&want, got.status) {
            (Brute::Infeasible, LpStatus::Infeasible) => {
                counts[0] += 1;
                true
            }
            (Brute::Unbounded, LpStatus::Unbounded) => {
                counts[1] += 1;
                true
            }
            (Brute::Optimal(v), LpStatus::Optimal) => {
                counts[2] += 1;
                let x = got.solution.as_deref().unwrap_or_default();
                got.value.as_ref() == Some(v)
                    && lp.is_feasible_point(x)
                    && probrank::lp::dot(&lp.objective, x) == *v
            }
            _ => false,
        };
        ensure(agree, || {
            format!(
                "case {case}: simplex {:?} vs enumeration {want:?}",
                got.status
            )
        })?;
    }
    Ok(format!(
        "1000 systems agree ({} infeasible, {} unbounded, {} optimal)",
        counts[0], counts[1], counts[2]
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", "golden matrices", ac1),
        ("AC2", "dominance demonstrations", ac2),
        ("AC3", "PR is sd-rank-fair and equal-rank envy-free", ac3),
        ("AC4", "other rules differing from PR fail an axiom", ac4),
        (
            "AC5",
            "sd-rank-fair implies sd-efficient; checkers agree",
            ac5,
        ),
        ("AC6", "sd-rank-fairness matches favoring higher ranks", ac6),
        ("AC7", "rule/axiom table", ac7),
        ("AC8", "decomposition into deterministic assignments", ac8),
        ("AC9", "independence of the two axioms", ac9),
        ("AC10", "simplex vs vertex enumeration", ac10),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (id, title, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
