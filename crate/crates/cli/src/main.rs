mod config;
mod output;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use vqae_core::estimator::{LikelihoodSearch, VqaeConfig};
use vqae_core::experiment::{infidelity_study, log_spaced, run_sweep, Estimator, Sweep};
use vqae_core::optimizer::OptimizerConfig;
use vqae_core::problem::{exact_amplitude, tabulate, Distribution, ProblemSpec};
use vqae_core::Error;

use output::{g, write_infidelity, write_sweep, SweepMeta};

#[derive(Parser, Debug)]
#[command(
    name = "vqae",
    version,
    about = "Amplitude estimation experiments: classical sampling, MLAE and variational QAE",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the exact amplitude, its angle and the probability-table checksum.
    Expectation(RunArgs),
    /// Repeat an estimator and write the RMS error trace as CSV.
    Sweep(RunArgs),
    /// Infidelity of the naive variational loop per layered depth, as CSV.
    Infidelity(RunArgs),
}

#[derive(clap::Args, Debug, Clone)]
struct RunArgs {
    #[arg(long, default_value = "gaussian", value_parser = ["gaussian", "cauchy", "lognormal"])]
    dist: String,
    /// Data qubits.
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    /// Scale of f(x) = C x.
    #[arg(long = "C", default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value = "mlae",
          value_parser = ["mc", "mlae", "vqae-naive", "vqae-adaptive", "vqae-ideal"])]
    estimator: String,
    /// Largest amplification index.
    #[arg(long = "M", default_value_t = 50)]
    max_power: usize,
    /// Variational period.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Shots per amplification index.
    #[arg(long, default_value_t = 2000)]
    h: u64,
    /// Winding number of the commensurate angle (adaptive).
    #[arg(long, default_value_t = 1)]
    l: usize,
    /// Bernoulli trials per objective evaluation.
    #[arg(long, default_value_t = 100)]
    nf: u64,
    /// Adam sweeps per variational step.
    #[arg(long, default_value_t = 100)]
    ns: usize,
    /// Layered ansatz depth; a comma-separated list for `infidelity`.
    #[arg(long, default_value = "4", value_delimiter = ',')]
    depth: Vec<usize>,
    /// Adam learning rate [default: 0.1 for vqae-naive, 1e-3 otherwise].
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long = "loose-shots", default_value_t = 500_000)]
    loose_shots: u64,
    #[arg(long = "charge-variational", default_value_t = true, action = ArgAction::Set,
          num_args = 0..=1, default_missing_value = "true")]
    charge_variational: bool,
    /// Use exact gradients instead of sampled objectives.
    #[arg(long = "exact-gradient", default_value_t = false, action = ArgAction::Set,
          num_args = 0..=1, default_missing_value = "true")]
    exact_gradient: bool,
    /// Likelihood maximization: grid argmax only, or refined inside the best cell.
    #[arg(long, default_value = "refined", value_parser = ["grid", "refined"])]
    search: String,
    /// Repetitions (random initializations for `infidelity`).
    #[arg(long, default_value_t = 100)]
    reps: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads [default: available cores].
    #[arg(long)]
    threads: Option<usize>,
    /// Output file [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value manifest; flags on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// MC sweep: shots run from 10^mc-exp-min to 10^mc-exp-max.
    #[arg(long = "mc-exp-min", default_value_t = 3)]
    mc_exp_min: u32,
    #[arg(long = "mc-exp-max", default_value_t = 7)]
    mc_exp_max: u32,
    #[arg(long = "mc-per-decade", default_value_t = 2)]
    mc_per_decade: u32,
    /// Only emit infidelity rows at this m.
    #[arg(long = "at-m")]
    at_m: Option<usize>,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Core(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(Error::InfeasibleRescaling { .. }) => 3,
            CliError::Core(
                Error::InvalidConfig(_)
                | Error::EncodingInfeasible(_)
                | Error::DegenerateDistribution(_)
                | Error::InvalidWidth(_)
                | Error::InvalidTrials
                | Error::AnsatzInitMismatch(_)
                | Error::LooseEstimateZero,
            ) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn distribution(args: &RunArgs) -> Result<Distribution, CliError> {
    let mut d = match args.dist.as_str() {
        "gaussian" => Distribution::gaussian(),
        "cauchy" => Distribution::cauchy_lorentz(),
        _ => Distribution::log_normal(),
    };
    match &mut d {
        Distribution::Gaussian { mu, sigma } | Distribution::CauchyLorentz { mu, sigma } => {
            if args.c0.is_some() || args.c1.is_some() {
                return Err(CliError::Config("--c0/--c1 apply to the lognormal distribution only".into()));
            }
            *mu = args.mu.unwrap_or(*mu);
            *sigma = args.sigma.unwrap_or(*sigma);
        }
        Distribution::LogNormal { c0, c1, mu, sigma } => {
            *c0 = args.c0.unwrap_or(*c0);
            *c1 = args.c1.unwrap_or(*c1);
            *mu = args.mu.unwrap_or(*mu);
            *sigma = args.sigma.unwrap_or(*sigma);
        }
    }
    Ok(d)
}

fn problem(args: &RunArgs) -> Result<ProblemSpec, CliError> {
    Ok(ProblemSpec::new(distribution(args)?, args.n, args.scale)?)
}

fn vqae_config(args: &RunArgs, estimator: Estimator) -> Result<VqaeConfig, CliError> {
    let default_lr = if estimator == Estimator::VqaeNaive { 0.1 } else { 1e-3 };
    let trials = if args.exact_gradient { 0 } else { args.nf };
    let optimizer = OptimizerConfig::new(args.lr.unwrap_or(default_lr), args.ns, trials);
    let depth = *args
        .depth
        .first()
        .ok_or_else(|| CliError::Config("--depth needs a value".into()))?;
    let mut cfg = match estimator {
        Estimator::VqaeAdaptive => VqaeConfig::adaptive(args.k, args.max_power, args.h, optimizer),
        Estimator::VqaeIdeal => VqaeConfig::ideal(args.k, args.max_power, args.h),
        _ => VqaeConfig::naive(args.k, args.max_power, args.h, depth, optimizer),
    };
    cfg.winding = args.l;
    cfg.loose_shots = args.loose_shots;
    cfg.search = if args.search == "grid" {
        LikelihoodSearch::Grid
    } else {
        LikelihoodSearch::GridRefined
    };
    if estimator != Estimator::VqaeIdeal {
        cfg.charge_variational = args.charge_variational;
    }
    Ok(cfg)
}

fn emit(args: &RunArgs, bytes: &[u8]) -> Result<(), CliError> {
    match &args.out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(pool.install(job))
}

fn cmd_expectation(args: &RunArgs) -> Result<(), CliError> {
    let spec = problem(args)?;
    let amp = exact_amplitude(&spec)?;
    let table = tabulate(&spec)?;
    let report = format!(
        "dist={}\nn={}\nC={}\na={}\ntheta={}\nchecksum={}\n",
        args.dist,
        args.n,
        g(args.scale),
        g(amp.a),
        g(amp.theta),
        g(table.checksum())
    );
    emit(args, report.as_bytes())
}

fn cmd_sweep(args: &RunArgs) -> Result<(), CliError> {
    if args.reps == 0 {
        return Err(CliError::Config("--reps must be at least 1".into()));
    }
    let estimator: Estimator = args.estimator.parse()?;
    let spec = problem(args)?;
    let mc_shots = if estimator == Estimator::Mc {
        if args.mc_exp_min > args.mc_exp_max || args.mc_per_decade == 0 || args.mc_exp_max > 12 {
            return Err(CliError::Config("--mc-exp-min/--mc-exp-max/--mc-per-decade out of range".into()));
        }
        log_spaced(args.mc_exp_min, args.mc_exp_max, args.mc_per_decade)
    } else {
        Vec::new()
    };
    let sweep = Sweep {
        spec,
        estimator,
        config: vqae_config(args, estimator)?,
        mc_shots,
        reps: args.reps,
        seed: args.seed,
    };
    let rows = with_pool(args.threads, || run_sweep(&sweep))??;
    let meta = SweepMeta {
        estimator: estimator.name(),
        dist: &args.dist,
        n: args.n,
        scale: args.scale,
        reps: args.reps,
        seed: args.seed,
    };
    let mut buf = Vec::new();
    write_sweep(&mut buf, &meta, &rows)?;
    emit(args, &buf)
}

fn cmd_infidelity(args: &RunArgs) -> Result<(), CliError> {
    if args.reps == 0 {
        return Err(CliError::Config("--reps must be at least 1".into()));
    }
    let spec = problem(args)?;
    let config = vqae_config(args, Estimator::VqaeNaive)?;
    if let Some(m) = args.at_m {
        if m > args.max_power {
            return Err(CliError::Config(format!("--at-m {m} exceeds --M {}", args.max_power)));
        }
    }
    let mut rows = with_pool(args.threads, || {
        infidelity_study(&spec, &config, &args.depth, args.reps, args.seed)
    })??;
    if let Some(m) = args.at_m {
        rows.retain(|r| r.m == m);
    }
    let mut buf = Vec::new();
    write_infidelity(&mut buf, &args.dist, &rows)?;
    emit(args, &buf)
}

fn parse() -> Result<Cli, clap::Error> {
    let argv: Vec<String> = std::env::args().collect();
    let first = Cli::try_parse_from(&argv)?;
    let (Command::Expectation(a) | Command::Sweep(a) | Command::Infidelity(a)) = &first.command;
    let Some(path) = &a.config else {
        return Ok(first);
    };
    let manifest = config::read_manifest(path)
        .map_err(|msg| clap::Error::raw(clap::error::ErrorKind::InvalidValue, format!("{msg}\n")))?;
    Cli::try_parse_from(config::merge(&argv, manifest))
}

fn main() -> ExitCode {
    let cli = match parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Expectation(a) => cmd_expectation(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Infidelity(a) => cmd_infidelity(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vqae: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
