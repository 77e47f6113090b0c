mod files;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use probrank::audit::{
    audit_assignment, compare, rule_table, search, CompareConfig, Property, SearchConfig,
    SearchMode, Status, COMPARE_AXIOMS,
};
use probrank::axioms::Axiom;
use probrank::corpus::QuotaRule;
use probrank::efficiency::Guard;
use probrank::rules::{pr_with_trace, ps_with_trace, sampled_order_average};
use probrank::{AgentOrder, Assignment, Problem, Rule};
use render::Format;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "probrank",
    version,
    about = "Exact random assignment rules and axiom audits"
)]
struct Cli {
    /// How numbers are printed; computation is always exact.
    #[arg(long, global = true, value_enum, default_value_t = Format::Fractions)]
    format: Format,
    /// Agent limit for brute-force and LP oracles.
    #[arg(long, global = true, default_value_t = 5)]
    guard_agents: usize,
    /// Object limit for brute-force and LP oracles.
    #[arg(long, global = true, default_value_t = 5)]
    guard_objects: usize,
    /// Quota limit for brute-force and LP oracles.
    #[arg(long, global = true, default_value_t = 3)]
    guard_quota: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a rule to a problem file and print the assignment.
    Run(RunArgs),
    /// Check axioms on a rule's output or on a given assignment; exits 1 if
    /// any fails.
    Audit(AuditArgs),
    /// Look for a problem on which a rule violates a property; exits 1 if one
    /// is found.
    Search(SearchArgs),
    /// Decide every rule/property cell of the comparison table by search.
    Table1(TableArgs),
    /// Average rank distributions and violation counts over random problems,
    /// as CSV.
    Compare(CompareArgs),
}

#[derive(Args)]
struct RuleArgs {
    /// pr, ps, ria, rsd, uniform, simple-ia or sd.
    #[arg(long)]
    rule: Option<String>,
    /// Agent order for simple-ia and sd, e.g. `4,3,2,1`; defaults to file
    /// order.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    problem: PathBuf,
    #[command(flatten)]
    rule: RuleArgs,
    /// Print the stage-by-stage eating trace (pr, ps).
    #[arg(long)]
    trace: bool,
    /// Estimate ria or rsd from this many sampled orderings instead of
    /// enumerating all of them.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    problem: PathBuf,
    #[command(flatten)]
    rule: RuleArgs,
    /// Assignment file to audit instead of a rule's output.
    #[arg(long, conflicts_with = "rule")]
    assignment: Option<PathBuf>,
    /// Comma-separated axiom names, or `all`.
    #[arg(long, default_value = "all")]
    axioms: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    rule: String,
    /// A property name, e.g. `strategy-proof` or `sd-rank-fair`.
    #[arg(long)]
    axiom: String,
    #[arg(long, default_value_t = 4)]
    max_agents: usize,
    #[arg(long, default_value_t = 4)]
    max_objects: usize,
    /// `unit`, a comma-separated list such as `2,1,1`, or `max:K` for every
    /// quota in 1..=K.
    #[arg(long, default_value = "unit")]
    quotas: String,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Problems drawn in random mode.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Save a found counterexample as a problem file.
    #[arg(long)]
    write_problem: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = 4)]
    max_agents: usize,
    #[arg(long, default_value_t = 4)]
    max_objects: usize,
    /// Emit the full table with counterexamples as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma-separated symmetric rule names.
    #[arg(long, default_value = "pr,ps,ria,rsd")]
    rules: String,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 4)]
    agents: usize,
    #[arg(long, default_value_t = 4)]
    objects: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "unit")]
    quotas: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A failure with its exit code.
enum Failure {
    Input(String),
    Guard(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) | Failure::Io(_) => 2,
            Failure::Guard(_) => 3,
        }
    }
}

impl From<probrank::Error> for Failure {
    fn from(e: probrank::Error) -> Self {
        match e {
            probrank::Error::SizeGuard { .. } => Failure::Guard(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<files::InputError> for Failure {
    fn from(e: files::InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Guard {
        max_agents: cli.guard_agents,
        max_objects: cli.guard_objects,
        max_quota: cli.guard_quota,
    };
    let result = match &cli.command {
        Command::Run(args) => run(args, cli.format),
        Command::Audit(args) => audit(args, cli.format, &limits),
        Command::Search(args) => search_cmd(args, &limits),
        Command::Table1(args) => table1(args, &limits),
        Command::Compare(args) => compare_cmd(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let (Failure::Input(msg) | Failure::Guard(msg) | Failure::Io(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<Problem, Failure> {
    Ok(files::parse_problem(
        &path.display().to_string(),
        &read(path)?,
    )?)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_order(problem: &Problem, order: Option<&str>) -> Result<AgentOrder, Failure> {
    let Some(order) = order else {
        return Ok(AgentOrder::identity(problem.n()));
    };
    let seq = order
        .split(',')
        .map(|id| problem.agent_index(id.trim()))
        .collect::<probrank::Result<Vec<_>>>()?;
    if seq.len() != problem.n() {
        return Err(Failure::Input(format!(
            "order lists {} agents, the problem has {}",
            seq.len(),
            problem.n()
        )));
    }
    Ok(AgentOrder::new(seq)?)
}

fn parse_rule(problem: Option<&Problem>, name: &str, order: Option<&str>) -> Result<Rule, Failure> {
    let ordered = |make: fn(AgentOrder) -> Rule| match problem {
        Some(p) => Ok(make(parse_order(p, order)?)),
        None => Err(Failure::Input(format!(
            "rule `{name}` depends on an agent order and cannot be used here"
        ))),
    };
    Ok(match name {
        "pr" => Rule::Pr,
        "ps" => Rule::Ps,
        "ria" => Rule::Ria,
        "rsd" => Rule::Rsd,
        "uniform" => Rule::Uniform,
        "simple-ia" => return ordered(Rule::SimpleIa),
        "sd" => return ordered(Rule::SerialDictatorship),
        other => return Err(Failure::Input(format!("unknown rule `{other}`"))),
    })
}

fn parse_quotas(text: &str) -> Result<QuotaRule, Failure> {
    let bad = || Failure::Input(format!("bad quota specification `{text}`"));
    if text == "unit" {
        return Ok(QuotaRule::Unit);
    }
    if let Some(max) = text.strip_prefix("max:") {
        let max: usize = max.parse().map_err(|_| bad())?;
        return if max == 0 {
            Err(bad())
        } else {
            Ok(QuotaRule::Random { max })
        };
    }
    let quotas = text
        .split(',')
        .map(|q| q.trim().parse::<usize>().ok().filter(|&q| q > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(bad)?;
    Ok(QuotaRule::Fixed(quotas))
}

fn apply(rule: &Rule, problem: &Problem) -> Result<Assignment, Failure> {
    rule.apply(problem).map_err(|e| match e {
        probrank::Error::SizeGuard { .. } => {
            Failure::Guard(format!("{e}; pass --samples N for a Monte Carlo estimate"))
        }
        other => other.into(),
    })
}

fn run(args: &RunArgs, format: Format) -> Outcome {
    let problem = load_problem(&args.problem)?;
    let name = args
        .rule
        .rule
        .as_deref()
        .ok_or_else(|| Failure::Input("--rule is required".into()))?;
    let rule = parse_rule(Some(&problem), name, args.rule.order.as_deref())?;
    let mut text = String::new();
    let (assignment, trace) = match (&rule, args.samples) {
        (Rule::Ria | Rule::Rsd, Some(samples)) => {
            text.push_str(&format!(
                "# estimate from {samples} sampled orderings, seed {}\n",
                args.seed
            ));
            let serial = rule == Rule::Rsd;
            (
                sampled_order_average(&problem, serial, samples, args.seed)?,
                None,
            )
        }
        (_, Some(_)) => {
            return Err(Failure::Input(
                "--samples applies to ria and rsd only".into(),
            ))
        }
        (Rule::Pr, None) if args.trace => {
            let (a, t) = pr_with_trace(&problem);
            (a, Some(t))
        }
        (Rule::Ps, None) if args.trace => {
            let (a, t) = ps_with_trace(&problem);
            (a, Some(t))
        }
        (_, None) if args.trace => {
            return Err(Failure::Input("--trace applies to pr and ps only".into()))
        }
        _ => (apply(&rule, &problem)?, None),
    };
    if let Some(t) = trace {
        text.push_str(&render::trace(&problem, &t, format));
    }
    text.push_str(&render::matrix(&problem, assignment.rows(), format));
    emit(&text, args.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn parse_axioms(list: &str) -> Result<Vec<Axiom>, Failure> {
    if list == "all" {
        return Ok(Axiom::ALL.to_vec());
    }
    list.split(',')
        .map(|name| {
            Axiom::from_name(name.trim())
                .ok_or_else(|| Failure::Input(format!("unknown axiom `{}`", name.trim())))
        })
        .collect()
}

fn audit(args: &AuditArgs, format: Format, limits: &Guard) -> Outcome {
    let problem = load_problem(&args.problem)?;
    let axioms = parse_axioms(&args.axioms)?;
    let (matrix, rule) = match (&args.assignment, &args.rule.rule) {
        (Some(path), None) => {
            let text = read(path)?;
            let m = files::parse_assignment(&path.display().to_string(), &text, &problem)?;
            (m, None)
        }
        (None, Some(name)) => {
            let rule = parse_rule(Some(&problem), name, args.rule.order.as_deref())?;
            (apply(&rule, &problem)?, Some(rule))
        }
        _ => {
            return Err(Failure::Input(
                "give exactly one of --rule or --assignment".into(),
            ))
        }
    };
    let report = audit_assignment(&problem, &matrix, &axioms, limits, rule.as_ref())?;
    let mut json = serde_json::to_value(&report).expect("report serializes");
    if format != Format::Fractions {
        let decimals: Vec<Vec<String>> = matrix
            .rows()
            .iter()
            .map(|r| r.iter().map(render::decimal).collect())
            .collect();
        json["assignment_decimal"] = serde_json::json!(decimals);
    }
    for e in &report.entries {
        let status = match e.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::NotApplicable => "n/a",
        };
        match &e.description {
            Some(d) => eprintln!("{:26} {status}: {d}", e.axiom.name()),
            None => eprintln!("{:26} {status}", e.axiom.name()),
        }
    }
    let text = serde_json::to_string_pretty(&json).expect("json") + "\n";
    emit(&text, args.output.as_deref())?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn search_cmd(args: &SearchArgs, limits: &Guard) -> Outcome {
    let rule = parse_rule(None, &args.rule, None)?;
    let property = Property::from_name(&args.axiom).ok_or_else(|| {
        let names: Vec<&str> = Property::TABLE.iter().map(|p| p.name()).collect();
        Failure::Input(format!(
            "unknown property `{}`; one of {}",
            args.axiom,
            names.join(", ")
        ))
    })?;
    let mode = match args.mode {
        Mode::Exhaustive => {
            if args.max_agents > limits.max_agents || args.max_objects > limits.max_objects {
                return Err(Failure::Guard(format!(
                    "exhaustive search up to {}x{} exceeds the guard {}x{}",
                    args.max_agents, args.max_objects, limits.max_agents, limits.max_objects
                )));
            }
            SearchMode::Exhaustive
        }
        Mode::Random => SearchMode::Random {
            seed: args.seed,
            samples: args.samples,
        },
    };
    let config = SearchConfig {
        max_agents: args.max_agents,
        max_objects: args.max_objects,
        quotas: parse_quotas(&args.quotas)?,
        mode,
        limits: *limits,
    };
    let outcome = search(&rule, property, &config)?;
    println!("{}", serde_json::to_string_pretty(&outcome).expect("json"));
    match &outcome.counterexample {
        Some(c) => {
            eprintln!("counterexample after {} problems: {c}", outcome.examined);
            if let Some(path) = &args.write_problem {
                emit(&files::render_problem(&c.problem), Some(path))?;
            }
            Ok(ExitCode::from(1))
        }
        None => {
            eprintln!(
                "no counterexample in {} problems ({})",
                outcome.examined, outcome.bounds
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn table1(args: &TableArgs, limits: &Guard) -> Outcome {
    if args.max_agents > limits.max_agents || args.max_objects > limits.max_objects {
        return Err(Failure::Guard(format!(
            "table bounds {}x{} exceed the guard {}x{}",
            args.max_agents, args.max_objects, limits.max_agents, limits.max_objects
        )));
    }
    let config = SearchConfig {
        limits: *limits,
        ..SearchConfig::exhaustive(args.max_agents, args.max_objects)
    };
    let table = rule_table(&config)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&table).expect("json"));
    } else {
        print!("{}", table.render());
    }
    Ok(ExitCode::SUCCESS)
}

fn compare_cmd(args: &CompareArgs) -> Outcome {
    let rules = args
        .rules
        .split(',')
        .map(|name| parse_rule(None, name.trim(), None))
        .collect::<Result<Vec<_>, _>>()?;
    let quotas = parse_quotas(&args.quotas)?;
    if quotas == QuotaRule::Unit && args.objects < args.agents {
        return Err(Failure::Input(
            "unit quotas need at least as many objects as agents".into(),
        ));
    }
    if let QuotaRule::Fixed(q) = &quotas {
        if q.len() != args.objects || q.iter().sum::<usize>() < args.agents {
            return Err(Failure::Input(
                "quota list must have one entry per object and cover the agents".into(),
            ));
        }
    }
    let config = CompareConfig {
        rules,
        samples: args.samples,
        agents: args.agents,
        objects: args.objects,
        seed: args.seed,
        quotas,
    };
    let summaries = compare(&config)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "rule".to_string(),
        "k".to_string(),
        "average_n_k_decimal".to_string(),
        "average_n_k_exact".to_string(),
    ];
    header.extend(
        COMPARE_AXIOMS
            .iter()
            .map(|a| format!("{}_violations", a.name())),
    );
    let csv_err = |e: csv::Error| Failure::Io(e.to_string());
    writer.write_record(&header).map_err(csv_err)?;
    for s in &summaries {
        for (k, avg) in s.average.iter().enumerate() {
            let mut record = vec![
                s.rule.clone(),
                (k + 1).to_string(),
                render::decimal(avg),
                avg.to_string(),
            ];
            record.extend(s.violations.iter().map(|(_, c)| c.to_string()));
            writer.write_record(&record).map_err(csv_err)?;
        }
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Failure::Io(e.to_string()))?;
    emit(
        &String::from_utf8(bytes).expect("utf-8"),
        args.output.as_deref(),
    )?;
    Ok(ExitCode::SUCCESS)
}
