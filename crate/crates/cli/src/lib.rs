//! Command dispatch for the `finpart` binary. [`run`] takes the argument list
//! and output streams so it can be driven from tests.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finpart::checks::{self, SuiteConfig};
use finpart::closed_forms::{self, FormulaId};
use finpart::{
    canonical_form, circles_count_terms, enumerate_solutions, parse_forest, verification, CircleTable, Count,
    Engine, Mode, Multiset, OracleBudget,
};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "finpart", version, about = "Restricted partition counts and circle arrangements")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partitions of n into exactly k parts.
    Pi { n: u64, k: u64 },
    /// Positive solutions, weakly increasing inside equal coefficients.
    D(CountArgs),
    /// Non-negative solutions, weakly increasing inside equal coefficients.
    D0(CountArgs),
    /// Pairwise distinct positive solutions.
    Delta(CountArgs),
    /// Pairwise distinct non-negative solutions.
    Delta0(CountArgs),
    /// Coefficient multisets of size k admitting a distinct solution for n.
    Multisets { n: u64, k: u64 },
    /// Number of arrangements of n non-intersecting circles.
    Circles {
        n: usize,
        /// Print every (A, x) term of the sum.
        #[arg(long)]
        terms: bool,
    },
    /// Parenthesis diagrams of circle arrangements.
    #[command(subcommand)]
    Forest(ForestCommand),
    /// Evaluate or validate a closed form.
    Closed(ClosedArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct CountArgs {
    n: u64,
    /// Comma-separated coefficients in any order, e.g. 1,2,2,3.
    multiset: Multiset,
    /// Also print the solution tuples.
    #[arg(long)]
    list: bool,
}

#[derive(Debug, Subcommand)]
enum ForestCommand {
    /// Canonical form of a diagram such as "((~))(~)".
    Parse { text: String },
    /// Every canonical diagram with n circles.
    Enum {
        n: usize,
        #[arg(long, default_value_t = OracleBudget::default().max_forest_nodes)]
        max_forest: u64,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct ClosedArgs {
    #[command(subcommand)]
    validate: Option<ClosedCommand>,
    #[arg(required = true)]
    formula: Option<FormulaId>,
    #[arg(required = true)]
    n: Option<u64>,
    /// Smaller coefficient, for D_pair_equal / D_pair_distinct.
    #[arg(long)]
    a1: Option<u64>,
    /// Larger coefficient, for D_pair_distinct.
    #[arg(long)]
    a2: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum ClosedCommand {
    /// Compare a closed form with the recursion on 1..=max.
    Validate {
        formula: FormulaId,
        #[arg(long)]
        max: u64,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Run every check.
    #[arg(long, required = true)]
    all: bool,
    #[arg(long)]
    max_sigma: Option<u64>,
    #[arg(long)]
    max_n: Option<u64>,
    #[arg(long)]
    max_forest: Option<usize>,
    #[arg(long)]
    max_circles: Option<usize>,
}

/// Result of one command: the payload in both output formats, or a domain
/// error.
struct Report {
    text: String,
    json: Value,
    status: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, status: EXIT_OK }
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(report) => {
            let written = match cli.format {
                Format::Text => writeln!(out, "{}", report.text),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("valid json")),
            };
            if written.is_err() {
                return EXIT_DOMAIN;
            }
            report.status
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
    }
}

fn dispatch(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Pi { n, k } => {
            let value = Engine::new().pi(n, k);
            Ok(Report::ok(
                value.to_string(),
                json!({"n": n, "k": k, "count": value.to_string()}),
            ))
        }
        Command::D(args) => Ok(count_report("d", args, Mode::Natural, false)),
        Command::D0(args) => Ok(count_report("d0", args, Mode::Natural, true)),
        Command::Delta(args) => Ok(count_report("delta", args, Mode::Distinct, false)),
        Command::Delta0(args) => Ok(count_report("delta0", args, Mode::Distinct, true)),
        Command::Multisets { n, k } => {
            let found: Vec<String> = if n == 0 || k == 0 {
                Vec::new()
            } else {
                Engine::new()
                    .enumerate_coefficient_multisets(n, k)
                    .iter()
                    .map(Multiset::to_string)
                    .collect()
            };
            Ok(Report::ok(
                found.iter().map(|a| format!("{{{a}}}")).collect::<Vec<_>>().join("\n"),
                json!({"n": n, "k": k, "multisets": found}),
            ))
        }
        Command::Circles { n, terms } => Ok(circles_report(n, terms)),
        Command::Forest(ForestCommand::Parse { text }) => {
            let forest = parse_forest(&text).map_err(|e| Failure::Domain(format!("parse error: {e}")))?;
            let canonical = canonical_form(&forest);
            Ok(Report::ok(
                canonical.clone(),
                json!({"input": text, "canonical": canonical, "size": forest.size()}),
            ))
        }
        Command::Forest(ForestCommand::Enum { n, max_forest }) => {
            let budget = OracleBudget {
                max_forest_nodes: max_forest,
                ..OracleBudget::default()
            };
            let forests = verification::enumerate_canonical_forests(n, &budget)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(Report::ok(
                forests.iter().map(|s| if s.is_empty() { "(empty)" } else { s }).collect::<Vec<_>>().join("\n"),
                json!({"n": n, "count": forests.len(), "forests": forests}),
            ))
        }
        Command::Closed(args) => closed_report(args),
        Command::Verify(args) => Ok(verify_report(args)),
    }
}

fn count_report(name: &str, args: CountArgs, mode: Mode, shifted: bool) -> Report {
    let CountArgs { n, multiset, list } = args;
    let mut engine = Engine::new();
    let value: Count = match (mode, shifted) {
        (Mode::Natural, false) => engine.d(n, &multiset),
        (Mode::Natural, true) => engine.d0(n, &multiset),
        (Mode::Distinct, false) => engine.delta(n, &multiset),
        (Mode::Distinct, true) => engine.delta0(n, &multiset),
    };
    let mut payload = json!({
        "function": name,
        "n": n,
        "A": multiset.to_string(),
        "count": value.to_string(),
    });
    let mut text = value.to_string();
    if list {
        // Non-negative solutions are the positive ones for n + sigma(A),
        // shifted down by one.
        let target = if shifted { n + multiset.sigma() } else { n };
        let offset = u64::from(shifted);
        let tuples: Vec<Vec<u64>> = enumerate_solutions(target, &multiset, mode)
            .into_iter()
            .map(|s| s.values.into_iter().map(|x| x - offset).collect())
            .collect();
        for t in &tuples {
            let body: Vec<String> = t.iter().map(u64::to_string).collect();
            text.push_str(&format!("\n({})", body.join(",")));
        }
        payload["solutions"] = json!(tuples);
    }
    Report::ok(text, payload)
}

fn circles_report(n: usize, with_terms: bool) -> Report {
    let mut table = CircleTable::new();
    let value = table.get(n).clone();
    let mut payload = json!({"n": n, "count": value.to_string()});
    let mut text = value.to_string();
    if with_terms {
        let terms = circles_count_terms(&mut table, n);
        for t in &terms {
            let x: Vec<String> = t.solution.values.iter().map(u64::to_string).collect();
            text.push_str(&format!("\nA={{{}}} x=({}) term={}", t.multiset, x.join(","), t.term));
        }
        payload["terms"] = serde_json::to_value(&terms).expect("terms serialize");
    }
    Report::ok(text, payload)
}

fn closed_report(args: ClosedArgs) -> Result<Report, Failure> {
    let mut engine = Engine::new();
    if let Some(ClosedCommand::Validate { formula, max }) = args.validate {
        if max == 0 {
            return Err(Failure::Usage("--max must be at least 1".into()));
        }
        let report = closed_forms::validate_formula(&mut engine, formula, max)
            .map_err(|e| Failure::Domain(e.to_string()))?;
        let mut text = format!("{formula} on 1..={max}: {} mismatches", report.mismatches.len());
        for m in &report.mismatches {
            text.push_str(&format!(
                "\nn={} A={{{}}} closed={} recursion={}",
                m.n, m.multiset, m.closed, m.recursion
            ));
        }
        let json = serde_json::to_value(&report).expect("report serializes");
        return Ok(Report::ok(text, json));
    }

    let (formula, n) = match (args.formula, args.n) {
        (Some(f), Some(n)) => (f, n),
        _ => return Err(Failure::Usage("expected <formula-id> <n>".into())),
    };
    if n == 0 {
        return Err(Failure::Usage("closed forms are stated for n >= 1".into()));
    }
    let multiset = match formula {
        FormulaId::DPairEqual | FormulaId::DPairDistinct => {
            let a1 = args
                .a1
                .ok_or_else(|| Failure::Usage(format!("{formula} needs --a1")))?;
            let a2 = match formula {
                FormulaId::DPairEqual => args.a2.unwrap_or(a1),
                _ => args
                    .a2
                    .ok_or_else(|| Failure::Usage(format!("{formula} needs --a1 and --a2")))?,
            };
            if a1 == 0 || a1 > a2 || (formula == FormulaId::DPairEqual) != (a1 == a2) {
                return Err(Failure::Usage(format!("{formula} does not cover ({a1}, {a2})")));
            }
            Multiset::from_positive([a1, a2])
        }
        fixed => fixed.multiset().expect("fixed formulas carry a multiset"),
    };
    let closed = closed_forms::evaluate(formula, n, &multiset).map_err(|e| Failure::Domain(e.to_string()))?;
    let recursion = match formula {
        FormulaId::Delta11 | FormulaId::Delta12 => engine.delta(n, &multiset),
        _ => engine.d(n, &multiset),
    };
    let agrees = closed == recursion.clone().into();
    Ok(Report::ok(
        closed.to_string(),
        json!({
            "formula": formula,
            "n": n,
            "A": multiset.to_string(),
            "closed": closed.to_string(),
            "recursion": recursion.to_string(),
            "agrees": agrees,
        }),
    ))
}

fn verify_report(args: VerifyArgs) -> Report {
    let mut config = SuiteConfig::default();
    if let Some(s) = args.max_sigma {
        config.oracle_sigma = s;
    }
    if let Some(n) = args.max_n {
        config.oracle_n = n;
    }
    if let Some(f) = args.max_forest {
        config.max_forest = f;
    }
    if let Some(m) = args.max_circles {
        config.max_circles = m;
    }
    let outcomes = checks::run_all(&config);
    let all_passed = outcomes.iter().all(|o| o.passed);
    let mut lines = Vec::new();
    for o in &outcomes {
        lines.push(o.summary_line());
        if !o.passed {
            lines.extend(o.details.iter().map(|d| format!("    {d}")));
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    lines.push(format!("{passed}/{} checks passed", outcomes.len()));
    Report {
        text: lines.join("\n"),
        json: json!({"passed": all_passed, "checks": outcomes}),
        status: if all_passed { EXIT_OK } else { EXIT_DOMAIN },
    }
}
