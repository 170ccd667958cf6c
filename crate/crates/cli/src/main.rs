//! `hyperschwarz`: solve, verify and evaluate hypergeometric solutions of
//! `{h, tau} = s E4` from the command line.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on
//! a usage error.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperschwarz::numeric::{parse_complex, ComplexValue};
use num_integer::Integer;

use report::{to_json, to_text, Report};

/// The numeric route is double precision only.
const SUPPORTED_PRECISION: u32 = 53;

#[derive(Parser)]
#[command(name = "hyperschwarz", version, about = "Exact q-expansions of hypergeometric Schwarzian solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build h = q^(n/m)(1 + O(q)) and verify {h} = c E4
    Solve(CaseArgs),
    /// Run every invariant check for (m, n)
    Verify(CaseArgs),
    /// Report the vector-valued forms F_0, ..., F_r
    Vvmf(CaseArgs),
    /// Evaluate h at tau by both routes
    Eval(EvalArgs),
    /// Run the acceptance grid
    Selftest(OutputArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Bits of precision for the numeric route (only 53 is available)
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Args)]
struct CaseArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    n: u64,
    /// Number of q-expansion coefficients to compute and check
    #[arg(long, default_value_t = 40)]
    terms: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    case: CaseArgs,
    /// Point in the upper half-plane, written like "0.3+1.2i"
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
}

fn check_output(o: &OutputArgs) -> Result<(), String> {
    match o.precision {
        Some(p) if p != SUPPORTED_PRECISION => {
            Err(format!("--precision {p} is not available; the numeric route uses {SUPPORTED_PRECISION}-bit doubles"))
        }
        _ => Ok(()),
    }
}

fn check_case(c: &CaseArgs) -> Result<(), String> {
    check_output(&c.output)?;
    if c.m < 7 {
        return Err(format!("--m {} is too small: m >= 7 is required", c.m));
    }
    if c.n == 0 {
        return Err("--n must be positive".into());
    }
    if c.n.is_multiple_of(c.m) {
        return Err(format!("--n {} is a multiple of --m {}", c.n, c.m));
    }
    if c.m.gcd(&c.n) != 1 {
        return Err(format!("--m {} and --n {} are not coprime", c.m, c.n));
    }
    if c.terms < 2 {
        return Err("--terms must be at least 2".into());
    }
    Ok(())
}

fn check_tau(s: &str) -> Result<ComplexValue, String> {
    let tau = parse_complex(s).ok_or_else(|| format!("cannot parse --tau {s:?}; expected a form like 0.3+1.2i"))?;
    if tau.im > 0.0 {
        Ok(tau)
    } else {
        Err(format!("--tau {s} is not in the upper half-plane"))
    }
}

fn dispatch(command: &Command) -> Result<(Report, Format), String> {
    Ok(match command {
        Command::Solve(c) => {
            check_case(c)?;
            (commands::solve_report(c.m, c.n, c.terms), c.output.format)
        }
        Command::Verify(c) => {
            check_case(c)?;
            (commands::verify_report(c.m, c.n, c.terms), c.output.format)
        }
        Command::Vvmf(c) => {
            check_case(c)?;
            (commands::vvmf_report(c.m, c.n, c.terms), c.output.format)
        }
        Command::Eval(e) => {
            check_case(&e.case)?;
            let tau = check_tau(&e.tau)?;
            (commands::eval_report(e.case.m, e.case.n, e.case.terms, tau), e.case.output.format)
        }
        Command::Selftest(o) => {
            check_output(o)?;
            (commands::selftest_report(), o.format)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, format) = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match format {
        Format::Json => println!("{}", to_json(&report.to_value())),
        Format::Text => print!("{}", to_text(&report)),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        if let Some(c) = report.checks.iter().find(|c| !c.pass) {
            eprintln!("check failed: {}: {}", c.name, c.detail);
        }
        ExitCode::FAILURE
    }
}
