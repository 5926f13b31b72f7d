use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rhs_lab::harness::config::parse_tol_pair;
use rhs_lab::harness::{self, coverage, Format, SuiteConfig, SUITES};
use rhs_lab::lie::X3Sign;
use rhs_lab::LabError;

#[derive(Parser)]
#[command(name = "rhs-lab", version, about = "Verification suites for group representations on scales of Hilbert spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite, or all of them, and emit the report.
    Run(Box<RunArgs>),
    /// Print the suite names.
    ListSuites,
    /// Print the case-to-anchor manifest.
    Coverage,
}

#[derive(Args)]
struct RunArgs {
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    suite: Option<String>,
    /// Hermite modes N, or block count M for the nilpotent suite.
    #[arg(long)]
    trunc: Option<usize>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = parse_sign)]
    x3_sign: Option<X3Sign>,
    /// Tolerance override `key=value`; repeatable.
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    t_grid: Option<Vec<f64>>,
    #[arg(long)]
    padding: Option<usize>,
    #[arg(long)]
    chart_box: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    /// Store wall-clock seconds per case; reports are then no longer reproducible.
    #[arg(long)]
    record_time: bool,
}

fn parse_sign(s: &str) -> Result<X3Sign, LabError> {
    s.parse()
}

fn parse_format(s: &str) -> Result<Format, LabError> {
    s.parse()
}

fn parse_tol(s: &str) -> Result<(String, f64), LabError> {
    parse_tol_pair(s)
}

impl RunArgs {
    fn into_config(self) -> Result<SuiteConfig, LabError> {
        let mut cfg = match &self.config {
            Some(p) => SuiteConfig::from_file(p)?,
            None => SuiteConfig::default(),
        };
        if let Some(s) = self.suite {
            cfg.suite = s;
        }
        if self.trunc.is_some() {
            cfg.trunc = self.trunc;
        }
        if let Some(n) = self.nmax {
            cfg.nmax = n;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(s) = self.x3_sign {
            cfg.x3_sign = s;
        }
        cfg.tol.extend(self.tol);
        if let Some(l) = self.lambda {
            cfg.lambda = l;
        }
        if self.t_grid.is_some() {
            cfg.t_grid = self.t_grid;
        }
        if let Some(p) = self.padding {
            cfg.padding = p;
        }
        if let Some(b) = self.chart_box {
            cfg.chart_box = b;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        cfg.record_time |= self.record_time;
        Ok(cfg)
    }
}

fn run(args: RunArgs) -> Result<bool, LabError> {
    let cfg = args.into_config()?;
    let reports = harness::run_suites(&cfg)?;
    harness::emit_report(&reports, cfg.format, cfg.out.as_deref())?;
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    for r in &failed {
        eprintln!("FAIL {} {} measured={:e} bound={:e}", r.suite, r.case, r.measured, r.bound);
    }
    eprintln!("{} cases, {} failed", reports.len(), failed.len());
    Ok(failed.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListSuites => {
            for s in SUITES {
                println!("{s}");
            }
            ExitCode::SUCCESS
        }
        Command::Coverage => {
            print!("{}", coverage::render_manifest());
            let missing = coverage::missing_anchors();
            if missing.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("anchors without a case: {}", missing.join(" "));
                ExitCode::from(1)
            }
        }
        Command::Run(args) => match run(*args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("rhs-lab: {e}");
                ExitCode::from(2)
            }
        },
    }
}
