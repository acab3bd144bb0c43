//! Argument parsing and subcommand dispatch for the `maximin` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maximin_core::{
    mms_approx, mms_exact, verify_allocation, Epsilon, Error, Instance, OracleMode, Ratio,
};

use crate::experiments::{
    emit_report, gen_uniform_instance, monotone_regressions, render_report, run_existence_trials,
    Predicate, ReportFormat, TrialAlgorithm, TrialConfig, TrialStats, DEFAULT_SCALE,
};
use crate::io::{read_allocation, read_instance, to_json, CertificateFile, InstanceFile};
use crate::solve::{guarantee_thresholds, solve, Algorithm, SolveOptions};

#[derive(Debug, Parser)]
#[command(name = "maximin", version, about = "Approximate maximin-share allocation of indivisible goods")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Allocate the goods of an instance and check the algorithm's guarantee.
    Solve(SolveArgs),
    /// Print one agent's maximin-share certificate.
    Mms(MmsArgs),
    /// Write a random instance with values uniform on {0..scale}.
    Gen(GenArgs),
    /// Check an allocation file against an instance.
    Verify(VerifyArgs),
    /// Monte Carlo success rates of round robin on random instances.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Exact,
    Ptas,
}

impl From<OracleArg> for OracleMode {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::Exact => OracleMode::Exact,
            OracleArg::Ptas => OracleMode::Ptas,
        }
    }
}

fn parse_eps(s: &str) -> Result<Epsilon, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub algo: Algorithm,
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value = "1/20", value_parser = parse_eps)]
    pub eps: Epsilon,
    #[arg(long, value_enum, default_value = "ptas")]
    pub oracle: OracleArg,
    /// Picking order for rr, 1-based and comma separated.
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<usize>>,
    /// Seed for rr-modified.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Attach the algorithm's intermediate state under "trace".
    #[arg(long)]
    pub trace: bool,
    /// Write the allocation here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MmsArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// 1-based agent index.
    #[arg(long)]
    pub agent: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, conflicts_with = "eps")]
    pub exact: bool,
    #[arg(long, value_parser = parse_eps)]
    pub eps: Option<Epsilon>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    pub scale: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub allocation: PathBuf,
    /// Recompute thresholds for this algorithm instead of trusting the file.
    #[arg(long, value_enum)]
    pub algo: Option<Algorithm>,
    #[arg(long, default_value = "1/20", value_parser = parse_eps)]
    pub eps: Epsilon,
    #[arg(long, value_enum, default_value = "ptas")]
    pub oracle: OracleArg,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Agent counts; several values run a grid.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<usize>,
    #[arg(long)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "rr")]
    pub algo: TrialAlgorithm,
    #[arg(long, value_enum, default_value = "proportional")]
    pub predicate: Predicate,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    pub scale: u64,
    /// CSV report path; the JSON mirror goes next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or files. Exit code 2.
    Input(String),
    /// A guarantee check failed. Exit code 1.
    Violation(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Input(_) => ExitCode::from(2),
            Failure::Violation(_) => ExitCode::from(1),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Violation(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<crate::io::FileError> for Failure {
    fn from(e: crate::io::FileError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    read_instance(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve_cmd(args: SolveArgs) -> Result<(), Failure> {
    let instance = load(&args.instance)?;
    let order = match args.order {
        Some(order) if order.contains(&0) => {
            return Err(Failure::Input("--order is 1-based".into()));
        }
        Some(order) => Some(order.into_iter().map(|a| a - 1).collect()),
        None => None,
    };
    let options = SolveOptions {
        algorithm: args.algo,
        eps: args.eps,
        oracle: args.oracle.into(),
        order,
        seed: args.seed,
        trace: args.trace,
    };
    let solved = solve(&instance, &options)?;
    emit(&to_json(&solved.file), args.out.as_deref())?;
    if solved.report.pass {
        Ok(())
    } else {
        let who: Vec<String> = solved.report.failures().map(|c| (c.agent + 1).to_string()).collect();
        Err(Failure::Violation(format!(
            "guarantee not met for agent(s) {}",
            who.join(", ")
        )))
    }
}

fn mms_cmd(args: MmsArgs) -> Result<(), Failure> {
    let instance = load(&args.instance)?;
    if args.agent == 0 || args.agent > instance.agents() {
        return Err(Failure::Input(format!(
            "agent {} is outside 1..={}",
            args.agent,
            instance.agents()
        )));
    }
    let row = instance.row(args.agent - 1);
    let cert = match args.eps {
        Some(eps) => mms_approx(row, args.k, eps)?,
        None => mms_exact(row, args.k)?,
    };
    emit(&to_json(&CertificateFile::new(args.agent - 1, args.k, &cert)), None)
}

fn gen_cmd(args: GenArgs) -> Result<(), Failure> {
    if args.n == 0 || args.scale == 0 {
        return Err(Failure::Input("n and scale must be at least 1".into()));
    }
    let instance = gen_uniform_instance(args.n, args.m, args.seed, args.scale)?;
    emit(&to_json(&InstanceFile::from_instance(&instance)), args.out.as_deref())
}

fn verify_cmd(args: VerifyArgs) -> Result<(), Failure> {
    let instance = load(&args.instance)?;
    let file = read_allocation(&args.allocation)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.allocation.display())))?;
    let allocation = file.allocation(instance.goods())?;
    let n = instance.agents();
    let thresholds: Vec<Ratio> = match args.algo {
        Some(algorithm) => {
            let options = SolveOptions {
                eps: args.eps,
                oracle: args.oracle.into(),
                ..SolveOptions::new(algorithm)
            };
            guarantee_thresholds(&instance, &options)?.0
        }
        None => {
            let agents: Vec<usize> = file.certificates.iter().map(|c| c.agent).collect();
            if agents != (1..=n).collect::<Vec<_>>() {
                return Err(Failure::Input(format!(
                    "expected one certificate per agent 1..={n} in order"
                )));
            }
            file.certificates
                .iter()
                .map(|c| Ratio::integer(c.threshold as u128))
                .collect()
        }
    };
    let report = verify_allocation(&instance, &allocation, &thresholds)?;
    let mut problems: Vec<String> = report
        .failures()
        .map(|c| format!("agent {} has {} below {}", c.agent + 1, c.value, c.threshold))
        .collect();
    for c in &file.certificates {
        if let Some(check) = report.agents.get(c.agent.wrapping_sub(1)) {
            if check.value.get() != c.value {
                problems.push(format!(
                    "agent {} certificate claims {} but the bundle is worth {}",
                    c.agent, c.value, check.value
                ));
            }
        }
    }
    let agents: Vec<serde_json::Value> = report
        .agents
        .iter()
        .map(|c| {
            serde_json::json!({
                "agent": c.agent + 1,
                "value": c.value.get(),
                "threshold": c.threshold.ceil_value().get(),
                "pass": c.pass,
            })
        })
        .collect();
    let pass = problems.is_empty();
    emit(&to_json(&serde_json::json!({ "pass": pass, "agents": agents })), None)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Violation(problems.join("; ")))
    }
}

fn experiment_cmd(args: ExperimentArgs) -> Result<(), Failure> {
    let mut stats: Vec<TrialStats> = Vec::new();
    for &n in &args.n {
        for &m in &args.m {
            let config = TrialConfig {
                n,
                m,
                trials: args.trials,
                seed: args.seed,
                scale: args.scale,
                algorithm: args.algo,
                predicate: args.predicate,
            };
            stats.push(run_existence_trials(&config)?);
        }
    }
    for (n, lo, hi) in monotone_regressions(&stats, 0.02) {
        eprintln!("note: n={n} success rate drops from m={lo} to m={hi}");
    }
    match args.out {
        Some(path) => {
            emit_report(&stats, ReportFormat::Csv, &path).map_err(|e| io_failure(&path, e))?;
            let mirror = path.with_extension("json");
            emit_report(&stats, ReportFormat::Json, &mirror).map_err(|e| io_failure(&mirror, e))
        }
        None => {
            let text = render_report(&stats, ReportFormat::Csv).map_err(|e| Failure::Input(e.to_string()))?;
            emit(&text, None)
        }
    }
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(args) => solve_cmd(args),
        Command::Mms(args) => mms_cmd(args),
        Command::Gen(args) => gen_cmd(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Experiment(args) => experiment_cmd(args),
    }
}
