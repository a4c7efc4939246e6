//! Command-line front end. [`run`] returns the process exit code so the
//! commands can be driven from tests without spawning a process.
//!
//! Exit codes: 0 on success, 1 for a domain failure (invalid quandle, failed
//! theorem row), 2 for usage and parse errors.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::braid::BraidWord;
use crate::finite_quandle::{FiniteQuandle, QuandleError};
use crate::free_terms::Assignment;
use crate::presentation::{
    chart_t, chart_t0, chart_t_star, count_colorings_with_workers, Presentation,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "quandle",
    version,
    about = "Quandle colorings of chart-presented surface braids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the quandle axioms for a table and print it.
    VerifyQuandle(VerifyArgs),
    /// Show the action of a braid word on free-quandle generators.
    Act(ActArgs),
    /// Count colorings of a chart presentation by a finite quandle.
    Count(CountArgs),
    /// Compare coloring counts of the built-in charts against their closed forms.
    TheoremCheck(TheoremArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `qN:<N>` or `file:<path>`
    #[arg(long)]
    pub quandle: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ActArgs {
    #[arg(long)]
    pub rank: usize,
    /// Braid word such as `s2^-2 s1`; empty for the trivial braid.
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,
    /// Comma-separated generator images; requires `--quandle`.
    #[arg(long, requires = "quandle")]
    pub assign: Option<String>,
    #[arg(long, requires = "assign")]
    pub quandle: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// `t0`, `t:<k>`, `tstar:<k>` or `file:<path>`
    #[arg(long)]
    pub chart: String,
    /// `qN:<N>` or `file:<path>`
    #[arg(long)]
    pub quandle: String,
    /// Also print every coloring.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub json: bool,
    /// Upper bound on enumeration threads.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TheoremArgs {
    #[arg(long, default_value_t = 5)]
    pub max_k: usize,
    #[arg(long = "max-N", alias = "max-n", default_value_t = 6)]
    pub max_n: usize,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub workers: Option<usize>,
}

/// A failure that maps to a nonzero exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl ToString) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

pub fn parse_quandle_spec(spec: &str) -> Result<FiniteQuandle, CliError> {
    if let Some(n) = spec.strip_prefix("qN:") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::usage(format!("invalid quandle order in {spec:?}")))?;
        FiniteQuandle::q_n(n).map_err(CliError::usage)
    } else if let Some(path) = spec.strip_prefix("file:") {
        FiniteQuandle::load(path).map_err(|e| match e {
            QuandleError::Parse { .. } | QuandleError::Io { .. } => CliError::usage(e),
            e => CliError {
                code: EXIT_FAILURE,
                message: format!("invalid quandle: {e}"),
            },
        })
    } else {
        Err(CliError::usage(format!(
            "unknown quandle spec {spec:?} (expected qN:<N> or file:<path>)"
        )))
    }
}

pub fn parse_chart_spec(spec: &str) -> Result<Presentation, CliError> {
    let k = |text: &str| {
        text.parse::<usize>()
            .map_err(|_| CliError::usage(format!("invalid chart parameter in {spec:?}")))
    };
    if spec == "t0" {
        Ok(chart_t0())
    } else if let Some(rest) = spec.strip_prefix("tstar:") {
        chart_t_star(k(rest)?).map_err(CliError::usage)
    } else if let Some(rest) = spec.strip_prefix("t:") {
        chart_t(k(rest)?).map_err(CliError::usage)
    } else if let Some(path) = spec.strip_prefix("file:") {
        Presentation::load(path)
            .map(|p| p.with_name(spec))
            .map_err(CliError::usage)
    } else {
        Err(CliError::usage(format!(
            "unknown chart spec {spec:?} (expected t0, t:<k>, tstar:<k> or file:<path>)"
        )))
    }
}

/// Parses arguments (including the program name) and runs the command.
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
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::VerifyQuandle(a) => cmd_verify_quandle(&a, out),
        Command::Act(a) => cmd_act(&a, out),
        Command::Count(a) => cmd_count(&a, out),
        Command::TheoremCheck(a) => cmd_theorem_check(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_FAILURE,
        message: e.to_string(),
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value).expect("report serializes");
    writeln!(out, "{text}").map_err(io_err)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    quandle: &'a str,
    valid: bool,
    order: Option<usize>,
    table: Option<Vec<Vec<usize>>>,
    error: Option<String>,
}

pub fn cmd_verify_quandle(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (quandle, error) = match parse_quandle_spec(&args.quandle) {
        Ok(q) => (Some(q), None),
        Err(e) if e.code == EXIT_FAILURE => (None, Some(e.message)),
        Err(e) => return Err(e),
    };
    if args.json {
        json_line(
            out,
            &VerifyReport {
                quandle: &args.quandle,
                valid: quandle.is_some(),
                order: quandle.as_ref().map(FiniteQuandle::order),
                table: quandle.as_ref().map(FiniteQuandle::rows),
                error,
            },
        )?;
    } else {
        match (&quandle, &error) {
            (Some(q), _) => writeln!(out, "{}valid", q.render_table()).map_err(io_err)?,
            (None, Some(e)) => writeln!(out, "{e}").map_err(io_err)?,
            (None, None) => unreachable!(),
        }
    }
    Ok(if quandle.is_some() { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct ActReport {
    rank: usize,
    word: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<usize>>,
}

pub fn cmd_act(args: &ActArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let word = BraidWord::parse(&args.word, args.rank).map_err(CliError::usage)?;
    let (terms, values) = match (&args.assign, &args.quandle) {
        (Some(assign), Some(spec)) => {
            let quandle = parse_quandle_spec(spec)?;
            let values = assign
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::usage(format!("invalid assignment value {v:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let evaluated = word
                .act_evaluated(&Assignment::new(values), &quandle)
                .map_err(CliError::usage)?;
            (None, Some(evaluated))
        }
        _ => {
            let terms = word.act().terms().iter().map(|t| t.render()).collect();
            (Some(terms), None)
        }
    };
    if args.json {
        json_line(
            out,
            &ActReport {
                rank: args.rank,
                word: word.to_string(),
                terms,
                values,
            },
        )?;
    } else {
        let lines: Vec<String> = match (terms, values) {
            (Some(t), _) => t,
            (_, Some(v)) => v.iter().map(ToString::to_string).collect(),
            _ => unreachable!(),
        };
        for (j, line) in lines.iter().enumerate() {
            writeln!(out, "x{} -> {}", j + 1, line).map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CountReport<'a> {
    chart: &'a str,
    quandle: &'a str,
    count: usize,
    trivial_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    colorings: Option<Vec<Vec<usize>>>,
}

fn workers(requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn cmd_count(args: &CountArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let presentation = parse_chart_spec(&args.chart)?;
    let quandle = parse_quandle_spec(&args.quandle)?;
    let report = count_colorings_with_workers(&presentation, &quandle, workers(args.workers))
        .map_err(CliError::usage)?;
    if args.json {
        json_line(
            out,
            &CountReport {
                chart: &args.chart,
                quandle: &args.quandle,
                count: report.count,
                trivial_count: report.trivial_count,
                colorings: args.list.then(|| {
                    report
                        .colorings
                        .iter()
                        .map(|a| a.values().to_vec())
                        .collect()
                }),
            },
        )?;
    } else {
        writeln!(out, "{}", report.count).map_err(io_err)?;
        if args.list {
            for a in &report.colorings {
                let line: Vec<String> = a.values().iter().map(ToString::to_string).collect();
                writeln!(out, "{}", line.join(",")).map_err(io_err)?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// One closed-form comparison.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremRow {
    pub case: String,
    pub chart: String,
    pub quandle: String,
    pub expected: usize,
    pub computed: usize,
    pub pass: bool,
}

/// Rows for parts (a)–(d) of the coloring-count theorem:
///
/// * (a) `T_0` over `Q_N`: `(N-1)^2 + 1`, for `N = 3..=max_n`;
/// * (b) `T_{2k}`, `T_{2k}*` over `Q_N`: `N`, for `N = 3..=max_n`, `k = 1..=max_k`;
/// * (c) `T_{2k-1}`, `T_{2k-1}*` over `Q_{k+2}`: `(k+2)^2`, for `k = 1..=max_k`;
/// * (d) `T_{2l-1}`, `T_{2l-1}*` over `Q_{k+2}`: `(k+1)^2 + 1`, for `1 <= l < k <= max_k`.
pub fn theorem_rows(max_k: usize, max_n: usize, workers: usize) -> Vec<TheoremRow> {
    let mut cases: Vec<(&str, String, usize, usize)> = Vec::new();
    for n in 3..=max_n {
        cases.push(("a", "t0".into(), n, (n - 1) * (n - 1) + 1));
    }
    for n in 3..=max_n {
        for k in 1..=max_k {
            cases.push(("b", format!("t:{}", 2 * k), n, n));
            cases.push(("b", format!("tstar:{}", 2 * k), n, n));
        }
    }
    for k in 1..=max_k {
        cases.push(("c", format!("t:{}", 2 * k - 1), k + 2, (k + 2) * (k + 2)));
        cases.push(("c", format!("tstar:{}", 2 * k - 1), k + 2, (k + 2) * (k + 2)));
    }
    for k in 2..=max_k {
        for l in 1..k {
            let expected = (k + 1) * (k + 1) + 1;
            cases.push(("d", format!("t:{}", 2 * l - 1), k + 2, expected));
            cases.push(("d", format!("tstar:{}", 2 * l - 1), k + 2, expected));
        }
    }
    cases
        .into_iter()
        .map(|(case, chart, n, expected)| {
            let presentation = parse_chart_spec(&chart).expect("built-in chart spec");
            let quandle = FiniteQuandle::q_n(n).expect("N >= 3");
            let computed = count_colorings_with_workers(&presentation, &quandle, workers)
                .expect("rank-4 enumeration fits")
                .count;
            TheoremRow {
                case: case.to_string(),
                chart,
                quandle: format!("qN:{n}"),
                expected,
                computed,
                pass: expected == computed,
            }
        })
        .collect()
}

pub fn cmd_theorem_check(args: &TheoremArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let started = Instant::now();
    let rows = theorem_rows(args.max_k, args.max_n, workers(args.workers));
    let all_pass = rows.iter().all(|r| r.pass);
    if args.json {
        json_line(out, &rows)?;
    } else {
        for r in &rows {
            writeln!(
                out,
                "{} ({}) chart={} quandle={} expected={} computed={}",
                if r.pass { "PASS" } else { "FAIL" },
                r.case,
                r.chart,
                r.quandle,
                r.expected,
                r.computed
            )
            .map_err(io_err)?;
        }
        let passed = rows.iter().filter(|r| r.pass).count();
        writeln!(
            out,
            "{passed}/{} rows passed in {:.2?}",
            rows.len(),
            started.elapsed()
        )
        .map_err(io_err)?;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_FAILURE })
}
