use std::path::PathBuf;

use besselrules::sum_rules::report::CSV_HEADER;
use besselrules::verify::{run_suite, Suite};
use clap::ValueEnum;

use crate::error::{CliError, CliResult};
use crate::output::emit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Core,
    Generalized,
    Spectroscopy,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Core => Suite::Core,
            SuiteArg::Generalized => Suite::Generalized,
            SuiteArg::Spectroscopy => Suite::Spectroscopy,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    /// One JSON object per line
    #[value(alias = "json")]
    Jsonl,
    Csv,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// A row fails when |closed - brute| > tolerance * max(1, |closed|)
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Jsonl)]
    pub format: ReportFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn run(args: &Args) -> CliResult<()> {
    if !(args.tolerance >= 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be a non-negative number, got {}",
            args.tolerance
        )));
    }
    let suite: Suite = args.suite.into();
    let reports = run_suite(suite).map_err(|e| CliError::lib(format!("suite {suite}"), e))?;
    let mut body = String::new();
    if args.format == ReportFormat::Csv {
        body.push_str(CSV_HEADER);
        body.push('\n');
    }
    let mut failures = 0usize;
    for r in &reports {
        if !r.passes(args.tolerance) {
            failures += 1;
        }
        match args.format {
            ReportFormat::Jsonl => body.push_str(&r.to_json_line(args.tolerance)),
            ReportFormat::Csv => body.push_str(&r.to_csv_row(args.tolerance)),
        }
        body.push('\n');
    }
    emit(args.output.as_deref(), &body)?;
    eprintln!(
        "suite {suite}: {} checks, {failures} above tolerance {:e}",
        reports.len(),
        args.tolerance
    );
    if failures > 0 {
        return Err(CliError::Verification(format!(
            "{failures} of {} checks exceed the tolerance",
            reports.len()
        )));
    }
    Ok(())
}
