use clap::ValueEnum;
use probrank::rules::EatingStageTrace;
use probrank::{Problem, Rational, Scalar};
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Fractions,
    Decimal,
    Both,
}

impl Format {
    pub fn value(self, v: &Rational) -> String {
        match self {
            Format::Fractions => v.to_string(),
            Format::Decimal => decimal(v),
            Format::Both => format!("{v} ({})", decimal(v)),
        }
    }

    pub fn header(self) -> Option<&'static str> {
        match self {
            Format::Fractions => None,
            _ => Some("# decimals are rounded for display; fractions are exact"),
        }
    }
}

pub fn decimal(v: &Rational) -> String {
    format!("{:.6}", v.to_decimal())
}

/// Aligned matrix with object ids as columns and agent ids as rows.
pub fn matrix(problem: &Problem, rows: &[Vec<Rational>], format: Format) -> String {
    let mut cells: Vec<Vec<String>> = Vec::with_capacity(rows.len() + 1);
    let mut header = vec![String::new()];
    header.extend(problem.objects().iter().cloned());
    cells.push(header);
    for (agent, row) in problem.agents().iter().zip(rows) {
        let mut line = vec![agent.clone()];
        line.extend(row.iter().map(|v| format.value(v)));
        cells.push(line);
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    if let Some(h) = format.header() {
        out.push_str(h);
        out.push('\n');
    }
    for line in cells {
        let text: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        out.push_str(text.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn trace(problem: &Problem, stages: &[EatingStageTrace<Rational>], format: Format) -> String {
    let mut out = String::new();
    for stage in stages {
        match &stage.interval {
            Some((from, to)) => writeln!(
                out,
                "interval {} [{}, {}]",
                stage.stage,
                format.value(from),
                format.value(to)
            ),
            None => writeln!(out, "stage {}", stage.stage),
        }
        .expect("write to string");
        for o in &stage.objects {
            let eaters: Vec<&str> = o
                .eaters
                .iter()
                .map(|&i| problem.agents()[i].as_str())
                .collect();
            writeln!(
                out,
                "  {}: eaters [{}], residual {} -> {}",
                problem.objects()[o.object],
                eaters.join(", "),
                format.value(&o.residual_before),
                format.value(&o.residual_after)
            )
            .expect("write to string");
        }
        let consumed: Vec<String> = problem
            .agents()
            .iter()
            .zip(&stage.consumed)
            .map(|(a, c)| format!("{a}={}", format.value(c)))
            .collect();
        writeln!(out, "  consumed: {}", consumed.join(", ")).expect("write to string");
    }
    out
}
