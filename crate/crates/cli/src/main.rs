//! `lambda-euler`: theory tables, simulations, comparisons and the self-test
//! suite behind one command line.

mod config;
mod table;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lambda_euler::ffenum::{empirical_mgf, SampleSpec, Sampling};
use lambda_euler::mep::family_series;
use lambda_euler::{selftest, Basis, Partition, Scalar};

use config::{RunConfig, SamplingMode};
use table::{Row, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("table: {0}")]
    Table(String),
    #[error(transparent)]
    Core(#[from] lambda_euler::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Parser, Debug)]
#[command(name = "lambda-euler", version, about = "Motivic Euler products and their finite-field statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficient table of a family's moment generating function.
    Theory(RunArgs),
    /// Empirical moment table from an exhaustive or sampled scan.
    Simulate(RunArgs),
    /// Join a theory table with an empirical table.
    Compare(RunArgs),
    /// Run the identity suite; exits nonzero on any failure.
    Selftest,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Symmetric degree cap.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Ghost precision.
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Force an exhaustive scan.
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Monte Carlo with this many samples.
    #[arg(long)]
    samples: Option<u64>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::parse(&fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        if let Some(f) = &self.format {
            cfg.format = f.parse()?;
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(k) = self.k {
            cfg.k = k;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.exhaustive {
            cfg.sampling = SamplingMode::Exhaustive;
        }
        if let Some(s) = self.samples {
            cfg.sampling = SamplingMode::MonteCarlo;
            cfg.samples = s;
        }
        Ok(cfg)
    }
}

/// Theory rows for every `|tau| <= N` and ghost index in `ghosts`.
fn theory_rows(cfg: &RunConfig, basis: Basis, ghosts: &[u32]) -> Result<Vec<Row>, CliError> {
    let series = family_series(&cfg.family_spec()?)?;
    let coeffs = series.to_basis(basis);
    let mut rows = Vec::new();
    for tau in Partition::up_to(cfg.n) {
        for &g in ghosts {
            let value = match coeffs.get(&tau) {
                Some(w) => w.ghost(g as usize)?.clone(),
                None => Scalar::zero(),
            };
            rows.push(Row { partition: tau.clone(), ghost_k: g, value, compare: None });
        }
    }
    Ok(rows)
}

fn theory(cfg: &RunConfig) -> Result<Table, CliError> {
    let ghosts: Vec<u32> = (1..=cfg.k as u32).collect();
    let mut table = Table::new("theory", cfg.resolved());
    table.rows = theory_rows(cfg, cfg.basis, &ghosts)?;
    table.summarize("basis", cfg.basis.name());
    table.summarize("rows", table.rows.len());
    table.record_tower();
    Ok(table)
}

fn simulate(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut spec = SampleSpec::new(cfg.sample_family()?, cfg.q()?, cfg.n);
    spec.ghost_k = cfg.ghost_k;
    spec.points = cfg.points.clone();
    spec.budget = cfg.budget;
    let monte_carlo = Sampling::MonteCarlo { samples: cfg.samples, seed: cfg.seed };
    spec.sampling = match cfg.sampling {
        SamplingMode::Exhaustive => Sampling::Exhaustive,
        SamplingMode::MonteCarlo => monte_carlo,
        SamplingMode::Auto => match spec.state_space() {
            Some(size) if size <= cfg.budget => Sampling::Exhaustive,
            _ => monte_carlo,
        },
    };
    let report = empirical_mgf(&spec)?;
    let mut table = Table::new("simulate", cfg.resolved());
    table.rows = report
        .means
        .iter()
        .map(|(tau, v)| Row { partition: tau.clone(), ghost_k: cfg.ghost_k, value: v.clone(), compare: None })
        .collect();
    let sampling = match spec.sampling {
        Sampling::Exhaustive => "exhaustive".to_string(),
        Sampling::MonteCarlo { samples, seed } => format!("monte_carlo samples={samples} seed={seed}"),
    };
    table.summarize("basis", Basis::M.name());
    table.summarize("sampling", sampling);
    table.summarize("enumerated", report.enumerated);
    table.summarize("admissible", report.admissible);
    table.summarize("jet_cells", report.cells);
    table.summarize("tv_exact", report.tv_exact());
    table.summarize("tv_distance", report.tv_distance());
    table.summarize("nonvanishing_exact", report.nonvanishing_exact());
    table.summarize("nonvanishing_frequency", report.nonvanishing_frequency());
    table.record_tower();
    Ok(table)
}

fn compare(cfg: &RunConfig) -> Result<Table, CliError> {
    let (theory, empirical) = match (&cfg.theory_table, &cfg.empirical_table) {
        (Some(t), Some(e)) => (Table::read(t)?, Table::read(e)?),
        (None, None) => {
            // Empirical means are m-basis coefficients at one ghost index.
            let mut th = Table::new("theory", cfg.resolved());
            th.rows = theory_rows(cfg, Basis::M, &[cfg.ghost_k])?;
            (th, simulate(cfg)?)
        }
        _ => return Err(CliError::Config("set both theory_table and empirical_table, or neither".into())),
    };
    let (rows, max) = table::join(&theory, &empirical)?;
    let mut table = Table::new("compare", cfg.resolved());
    table.rows = rows;
    for (k, v) in &empirical.summary {
        if k != "zeta_order" && k != "sqrt_radicand" {
            table.summarize(&format!("empirical.{k}"), v);
        }
    }
    table.summarize("joined_rows", table.rows.len());
    table.summarize("max_abs_dev", max);
    table.record_tower();
    Ok(table)
}

fn run_selftest() -> ExitCode {
    let results = selftest::run();
    let mut ok = true;
    for r in &results {
        ok &= r.pass;
        println!("{} {}: {}", if r.pass { "pass" } else { "FAIL" }, r.name, r.detail);
    }
    println!("{} of {} properties pass", results.iter().filter(|r| r.pass).count(), results.len());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn execute(args: &RunArgs, f: fn(&RunConfig) -> Result<Table, CliError>) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let text = f(&cfg)?.render(cfg.format)?;
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Theory(a) => execute(a, theory),
        Command::Simulate(a) => execute(a, simulate),
        Command::Compare(a) => execute(a, compare),
        Command::Selftest => return run_selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
