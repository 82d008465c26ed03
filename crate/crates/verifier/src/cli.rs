//! Command-line front end: `heunkit verify ...`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::catalog::{explain, list_rules, Catalog};
use crate::config::{env_seed, FileConfig};
use crate::plan::SamplePlan;
use crate::report::IdentityReport;
use crate::suites::{run_all, run_suite};
use crate::VerifyError;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "heunkit", version, about = "Numerical verification of Heun and hypergeometric identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run identity suites and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Default, Args)]
pub struct VerifyArgs {
    /// Run a single suite (default: all).
    #[arg(long)]
    pub suite: Option<String>,
    /// RNG seed (default: $HEUNKIT_SEED, else 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Draws per rule.
    #[arg(long)]
    pub draws: Option<usize>,
    /// Override every suite tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print a rule catalog and exit.
    #[arg(long, value_enum)]
    pub list_rules: Option<Catalog>,
    /// Describe the rules carrying this signed-permutation label and exit.
    #[arg(long, value_name = "RULE_LABEL")]
    pub explain: Option<String>,
    /// TOML file with defaults for the options above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Plan, suite and report path after merging flags, file and environment.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub plan: SamplePlan,
    pub suite: Option<String>,
    pub report: Option<PathBuf>,
}

pub fn resolve(args: &VerifyArgs, file: &FileConfig, env_seed: Option<u64>) -> Result<Resolved, VerifyError> {
    let d = SamplePlan::default();
    let plan = SamplePlan {
        seed: args.seed.or(file.seed).or(env_seed).unwrap_or(d.seed),
        draws_per_rule: args.draws.or(file.draws).unwrap_or(d.draws_per_rule),
        param_bound: file.param_bound.unwrap_or(d.param_bound),
        x_fraction: file.x_fraction.unwrap_or(d.x_fraction),
        tol_override: args.tol.or(file.tol),
    };
    plan.validate()?;
    Ok(Resolved {
        plan,
        suite: args.suite.clone().or_else(|| file.suite.clone()),
        report: args.report.clone().or_else(|| file.report.clone()),
    })
}

/// Runs the CLI on `argv` and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let Command::Verify(args) = cli.command;
    match verify(&args, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "heunkit: {e}");
            EXIT_USAGE
        }
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, VerifyError> {
    if let Some(cat) = args.list_rules {
        write!(out, "{}", list_rules(cat)?)?;
        return Ok(EXIT_PASS);
    }
    if let Some(label) = &args.explain {
        write!(out, "{}", explain(label)?)?;
        return Ok(EXIT_PASS);
    }
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let env = if args.seed.is_none() && file.seed.is_none() { env_seed()? } else { None };
    let res = resolve(args, &file, env)?;
    let report = match &res.suite {
        Some(name) => run_suite(name, &res.plan)?,
        None => run_all(&res.plan)?,
    };
    match &res.report {
        Some(path) => std::fs::write(path, report.to_json() + "\n")?,
        None => writeln!(out, "{}", report.to_json())?,
    }
    print_summary(&report, err)?;
    Ok(if report.all_passed() { EXIT_PASS } else { EXIT_FAIL })
}

const MAX_LISTED_FAILURES: usize = 20;

fn print_summary(report: &IdentityReport, err: &mut dyn Write) -> std::io::Result<()> {
    for s in &report.summary.suites {
        writeln!(err, "{:<16} {:>5} cases  {:>5} failed", s.name, s.counts.total, s.counts.failed)?;
    }
    let failed: Vec<_> = report.cases().filter(|c| !c.passed()).collect();
    for c in failed.iter().take(MAX_LISTED_FAILURES) {
        let why = match (&c.residual, &c.error) {
            (_, Some(e)) => e.clone(),
            (Some(r), None) => format!("residual {r:.3e} > tolerance {:.1e}", c.tolerance),
            (None, None) => String::new(),
        };
        writeln!(err, "FAIL {} / {}: {why}", c.suite, c.rule)?;
    }
    if failed.len() > MAX_LISTED_FAILURES {
        writeln!(err, "... and {} more failures", failed.len() - MAX_LISTED_FAILURES)?;
    }
    let t = report.summary.counts;
    writeln!(err, "heunkit: {} cases, {} passed, {} failed", t.total, t.passed, t.failed)
}
