//! The `ddm` command.
//!
//! Exit status is 0 on success, 1 for validation or computation failures and
//! 2 for usage errors. Output is assembled completely before it is returned,
//! so a failing command never leaves partial results on stdout.

use std::ffi::OsString;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use ddm_core::{
    implied_return, project_dividends, sensitivity, value_closed_form, value_series, OracleConfig,
    Parameter, SolveConfig,
};

use crate::io::{
    parse_batch, parse_schedule, render_dividends, render_result, Format, ScheduleDocument,
    ValuationRecord,
};

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// Exit status.
    pub code: u8,
    /// Standard output.
    pub stdout: String,
    /// Diagnostic output.
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn failed(message: impl std::fmt::Display) -> Self {
        Self {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ddm",
    version,
    about = "Multi-stage dividend discount valuation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Value a share from a schedule file.
    Value {
        #[arg(long, value_name = "FILE")]
        schedule: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Project the dividend stream for years 0..=H.
    Dividends {
        #[arg(long, value_name = "FILE")]
        schedule: PathBuf,
        #[arg(long, value_name = "H")]
        horizon: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compare the closed form with direct series summation.
    Check {
        #[arg(long, value_name = "FILE")]
        schedule: PathBuf,
        /// Absolute bound on the unsummed series tail.
        #[arg(long = "tail-tol", value_name = "X", default_value_t = 1e-12)]
        tail_tol: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Solve for the required return that reproduces a market price.
    Implied {
        #[arg(long, value_name = "FILE")]
        schedule: PathBuf,
        /// Defaults to the schedule's market_price.
        #[arg(long, value_name = "P")]
        price: Option<f64>,
        /// Defaults to (terminal_growth + 1e-6, 1.0).
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        bracket: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Central-difference sensitivity of the value to one input.
    Sensitivity {
        #[arg(long, value_name = "FILE")]
        schedule: PathBuf,
        /// r, d0, terminal, or g1, g2, ... for stage growth.
        #[arg(long, value_name = "NAME")]
        param: Parameter,
        #[arg(long, value_name = "B")]
        bump: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Value every row of a CSV batch table.
    Batch {
        #[arg(long, value_name = "FILE")]
        table: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome::ok(rendered)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => outcome,
        Err(message) => Outcome::failed(message),
    }
}

fn dispatch(command: Command) -> Result<Outcome, String> {
    match command {
        Command::Value { schedule, format } => {
            let doc = load_schedule(&schedule)?;
            let result =
                value_closed_form(&doc.schedule, &doc.context).map_err(|e| e.to_string())?;
            let record = ValuationRecord::new(doc.name, result, doc.market_price);
            Ok(Outcome::ok(render_result(&record, format)))
        }
        Command::Dividends {
            schedule,
            horizon,
            format,
        } => {
            let doc = load_schedule(&schedule)?;
            let points = project_dividends(&doc.schedule, horizon);
            Ok(Outcome::ok(render_dividends(&points, format)))
        }
        Command::Check {
            schedule,
            tail_tol,
            format,
        } => check(&load_schedule(&schedule)?, tail_tol, format),
        Command::Implied {
            schedule,
            price,
            bracket,
            format,
        } => {
            let doc = load_schedule(&schedule)?;
            let price = price
                .or(doc.market_price)
                .ok_or("no price given: pass --price or set market_price in the schedule")?;
            let config = match bracket.as_deref() {
                Some(&[lo, hi]) => SolveConfig::new(lo, hi),
                _ => SolveConfig::for_schedule(&doc.schedule),
            };
            let sol = implied_return(&doc.schedule, price, &config).map_err(|e| e.to_string())?;
            let out = match format {
                Format::Text => format!(
                    "implied_return  {:.10}\niterations      {}\n",
                    sol.rate, sol.iterations
                ),
                Format::Json => format!(
                    "{{\"implied_return\":{},\"iterations\":{}}}\n",
                    crate::io::render::json_number(sol.rate),
                    sol.iterations
                ),
            };
            Ok(Outcome::ok(out))
        }
        Command::Sensitivity {
            schedule,
            param,
            bump,
            format,
        } => {
            let doc = load_schedule(&schedule)?;
            let rep =
                sensitivity(&doc.schedule, &doc.context, param, bump).map_err(|e| e.to_string())?;
            let out = match format {
                Format::Text => format!(
                    "parameter           {}\nbump                {}\ncentral_difference  {:.10}\n",
                    rep.parameter, rep.bump, rep.central_difference
                ),
                Format::Json => format!(
                    "{{\"parameter\":\"{}\",\"bump\":{},\"central_difference\":{}}}\n",
                    rep.parameter,
                    crate::io::render::json_number(rep.bump),
                    crate::io::render::json_number(rep.central_difference)
                ),
            };
            Ok(Outcome::ok(out))
        }
        Command::Batch { table, format } => batch(&table, format),
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_schedule(path: &Path) -> Result<ScheduleDocument, String> {
    parse_schedule(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn check(doc: &ScheduleDocument, tail_tol: f64, format: Format) -> Result<Outcome, String> {
    let closed = value_closed_form(&doc.schedule, &doc.context)
        .map_err(|e| e.to_string())?
        .present_value;
    let series = value_series(
        &doc.schedule,
        &doc.context,
        &OracleConfig::with_tail_tolerance(tail_tol),
    )
    .map_err(|e| e.to_string())?;
    let diff = (closed - series).abs();
    let tolerance = f64::max(1e-8, 1e-10 * closed);
    let passed = diff <= tolerance;

    let stdout = match format {
        Format::Text => format!(
            "closed_form  {closed:.10}\nseries       {series:.10}\nabs_diff     {diff:.3e}\n\
             tolerance    {tolerance:.3e}\nstatus       {}\n",
            if passed { "ok" } else { "MISMATCH" }
        ),
        Format::Json => {
            use crate::io::render::json_number as n;
            format!(
                "{{\"closed_form\":{},\"series\":{},\"abs_diff\":{},\"tolerance\":{},\"ok\":{passed}}}\n",
                n(closed),
                n(series),
                n(diff),
                n(tolerance)
            )
        }
    };
    let stderr = if passed {
        String::new()
    } else {
        format!("error: closed form and series differ by {diff:e}, above {tolerance:e}\n")
    };
    Ok(Outcome {
        code: u8::from(!passed),
        stdout,
        stderr,
    })
}

fn batch(path: &Path, format: Format) -> Result<Outcome, String> {
    let table = parse_batch(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;

    // Valid rows and failures, merged back into input order.
    let mut lines: Vec<(usize, Result<String, String>)> = table
        .errors
        .iter()
        .map(|e| (e.row, Err(e.to_string())))
        .collect();
    for row in &table.rows {
        let rendered = value_closed_form(&row.schedule, &row.context)
            .map(|result| {
                let record = ValuationRecord::new(Some(row.name.clone()), result, row.market_price);
                match format {
                    Format::Json => render_result(&record, Format::Json),
                    Format::Text => batch_text_line(&record),
                }
            })
            .map_err(|e| format!("row {}: {e}", row.row));
        lines.push((row.row, rendered));
    }
    lines.sort_by_key(|(row, _)| *row);

    let mut stdout = String::new();
    if format == Format::Text {
        stdout.push_str("name\tpresent_value\tmarket_price\tverdict\n");
    }
    let mut stderr = String::new();
    let mut failed = false;
    for (_, line) in lines {
        match line {
            Ok(text) => stdout.push_str(&text),
            Err(message) => {
                failed = true;
                let _ = writeln!(stderr, "error: {message}");
            }
        }
    }
    Ok(Outcome {
        code: u8::from(failed),
        stdout,
        stderr,
    })
}

fn batch_text_line(record: &ValuationRecord) -> String {
    let price = record
        .market_price
        .map_or_else(|| "-".to_string(), |p| format!("{p:.5}"));
    let verdict = record.verdict.map_or("-", |v| v.label());
    format!(
        "{}\t{:.5}\t{price}\t{verdict}\n",
        record.name.as_deref().unwrap_or(""),
        record.present_value
    )
}
