//! Command-line front end: `simulate`, `match`, `theory` and `evaluate`.
//!
//! Exit codes: 0 on success, 1 for runtime failures, 2 for usage errors.
//! Results go to files; stdout only carries a short summary.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::evaluation::{cycle_decompose, label_confusion, mismatch_loss, MatchReport};
use crate::io;
use crate::matching::{laps_match, BasisSource};
use crate::sim::{default_signal_grid, run_sweep, Axis, Method, SweepSpec};
use crate::theory::{rate_bundle, RateBundle};

#[derive(Debug, Parser)]
#[command(name = "matchkit", version, about = "One-way matching of feature-aligned datasets")]
pub struct Cli {
    /// Worker threads; 1 gives the canonical single-threaded run.
    #[arg(long, global = true, env = "MATCHKIT_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte-Carlo sweep and write one CSV row per (axis value, method).
    Simulate(SimulateArgs),
    /// Match the rows of two datasets with LAPS.
    Match(MatchArgs),
    /// Evaluate the closed-form rates for one configuration.
    Theory(TheoryArgs),
    /// Score an estimated permutation against the truth.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AxisArg {
    Signal,
    P,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BasisArg {
    X,
    Y,
    Auto,
}

impl From<BasisArg> for BasisSource {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::X => BasisSource::FromX,
            BasisArg::Y => BasisSource::FromY,
            BasisArg::Auto => BasisSource::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Laps,
    Naive,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Swept quantity.
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    /// Comma-separated axis values; defaults to 250(1 + i/9), i = 0..9, on the signal axis.
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<f64>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..))]
    pub n: u64,
    /// Ambient dimension (signal axis only).
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub p: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub r: u64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_x: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_y: f64,
    /// Signal strength (p axis only).
    #[arg(long, default_value_t = 400.0)]
    pub signal: f64,
    /// Repetitions per axis value.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
    /// Seed for U, D, V and the true permutation.
    #[arg(long)]
    pub seed_param: u64,
    /// Seed for the per-repetition noise streams.
    #[arg(long)]
    pub seed_noise: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "laps,naive")]
    pub methods: Vec<MethodArg>,
    /// Dataset whose right singular vectors LAPS projects on.
    #[arg(long, value_enum, default_value = "x")]
    pub basis: BasisArg,
    /// Write 0 in the wall_ms column so the CSV is byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// First dataset, headerless numeric CSV.
    #[arg(long)]
    pub x: PathBuf,
    /// Second dataset, same shape as x.
    #[arg(long)]
    pub y: PathBuf,
    /// Signal rank.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub r: u64,
    #[arg(long, value_enum, default_value = "x")]
    pub basis: BasisArg,
    /// Output permutation CSV (`source_index,matched_index`, 0-based).
    #[arg(long)]
    pub out: PathBuf,
    /// Labels for the rows of x, one per line.
    #[arg(long, requires = "labels_y")]
    pub labels_x: Option<PathBuf>,
    /// Labels for the rows of y, one per line.
    #[arg(long, requires = "labels_x")]
    pub labels_y: Option<PathBuf>,
    /// Confusion table CSV (needs both label files).
    #[arg(long, requires = "labels_x")]
    pub confusion: Option<PathBuf>,
    /// Row-normalize the confusion table.
    #[arg(long, requires = "confusion")]
    pub normalize: bool,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["from_params", "from_spec"])))]
pub struct TheoryArgs {
    /// Read U and D from --u and --d.
    #[arg(long, requires_all = ["u", "d"])]
    pub from_params: bool,
    /// Regenerate a signal-sweep configuration from --n, --p, --r, --signal and --seed-param.
    #[arg(long, requires_all = ["signal", "seed_param"], conflicts_with_all = ["u", "d"])]
    pub from_spec: bool,
    /// Left factor, n x r CSV.
    #[arg(long)]
    pub u: Option<PathBuf>,
    /// Singular values, one column or one row.
    #[arg(long)]
    pub d: Option<PathBuf>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..))]
    pub n: u64,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub p: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub r: u64,
    #[arg(long)]
    pub signal: Option<f64>,
    #[arg(long)]
    pub seed_param: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_x: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_y: f64,
    /// Output CSV; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Estimated permutation CSV.
    #[arg(long)]
    pub pi_hat: PathBuf,
    /// True permutation CSV.
    #[arg(long)]
    pub pi_star: PathBuf,
    #[arg(long, requires = "labels_y")]
    pub labels_x: Option<PathBuf>,
    #[arg(long, requires = "labels_x")]
    pub labels_y: Option<PathBuf>,
}

/// A failure classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e)
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> CliResult {
    let threads = cli
        .threads
        .map(|t| t as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} threads: {e}")))?;
    pool.install(|| match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Match(a) => match_cmd(a),
        Command::Theory(a) => theory(a),
        Command::Evaluate(a) => evaluate(a),
    })
}

fn simulate(a: SimulateArgs) -> CliResult {
    let axis = match a.axis {
        AxisArg::Signal => Axis::Signal,
        AxisArg::P => Axis::AmbientP,
    };
    let values = if a.values.is_empty() {
        match axis {
            Axis::Signal => default_signal_grid(),
            Axis::AmbientP => return Err(CliError::Usage("--values is required with --axis p".into())),
        }
    } else {
        a.values
    };
    let mut methods = Vec::new();
    for m in a.methods {
        let m = match m {
            MethodArg::Laps => Method::Laps,
            MethodArg::Naive => Method::Naive,
        };
        if methods.contains(&m) {
            return Err(CliError::Usage(format!("method {m} listed twice")));
        }
        methods.push(m);
    }
    let spec = SweepSpec {
        n: a.n as usize,
        p: a.p as usize,
        r: a.r as usize,
        sigma_x: a.sigma_x,
        sigma_y: a.sigma_y,
        signal: a.signal,
        axis,
        values,
        repetitions: a.reps as usize,
        param_seed: a.seed_param,
        noise_seed: a.seed_noise,
        methods,
        basis: a.basis.into(),
        timing: !a.no_timing,
    };
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let result = run_sweep(&spec)?;
    io::write_text(&a.out, &result.to_csv())?;
    println!(
        "wrote {} rows ({} values x {} methods, {} reps) to {}",
        result.rows.len(),
        spec.values.len(),
        spec.methods.len(),
        spec.repetitions,
        a.out.display()
    );
    Ok(())
}

fn match_cmd(a: MatchArgs) -> CliResult {
    let x = io::read_matrix_csv(&a.x)?;
    let y = io::read_matrix_csv(&a.y)?;
    if x.shape() != y.shape() {
        return Err(CliError::Runtime(Error::arg(format!(
            "x is {}x{} but y is {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        ))));
    }
    let labels = match (&a.labels_x, &a.labels_y) {
        (Some(lx), Some(ly)) => {
            let lx = io::read_labels_csv(lx)?;
            let ly = io::read_labels_csv(ly)?;
            if lx.len() != x.rows() || ly.len() != y.rows() {
                return Err(CliError::Runtime(Error::arg(format!(
                    "label counts ({}, {}) do not match {} rows",
                    lx.len(),
                    ly.len(),
                    x.rows()
                ))));
            }
            Some((lx, ly))
        }
        _ => None,
    };
    let start = Instant::now();
    let outcome = laps_match(&x, &y, a.r as usize, a.basis.into())?;
    let report = MatchReport::from_outcome(outcome, start.elapsed());
    io::write_permutation_csv(&report.permutation, &a.out)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "matched {} rows with r={} using the basis of {} ({:.1} ms); wrote {}",
        x.rows(),
        a.r,
        report.basis_source,
        report.wall_time.as_secs_f64() * 1e3,
        a.out.display()
    );
    if let Some((lx, ly)) = labels {
        let conf = label_confusion(&report.permutation, &lx, &ly)?;
        println!("accuracy {}", conf.accuracy);
        if let Some(path) = &a.confusion {
            io::write_text(path, &conf.to_csv(a.normalize))?;
        }
    }
    Ok(())
}

fn theory(a: TheoryArgs) -> CliResult {
    let (u, d, p) = if a.from_params {
        let u_path = a.u.as_ref().expect("clap enforces --u");
        let d_path = a.d.as_ref().expect("clap enforces --d");
        let u = io::read_matrix_csv(u_path)?;
        let d = io::read_vector_csv(d_path)?;
        if u.cols() != d.len() {
            return Err(CliError::Usage(format!(
                "U has {} columns but D has {} entries",
                u.cols(),
                d.len()
            )));
        }
        if u.rows() < 2 {
            return Err(CliError::Usage("U needs at least two rows".into()));
        }
        (u, d, a.p as usize)
    } else {
        let spec = SweepSpec {
            n: a.n as usize,
            p: a.p as usize,
            r: a.r as usize,
            sigma_x: a.sigma_x,
            sigma_y: a.sigma_y,
            axis: Axis::Signal,
            values: vec![a.signal.expect("clap enforces --signal")],
            param_seed: a.seed_param.expect("clap enforces --seed-param"),
            ..SweepSpec::signal_sweep(1, 0, 0)
        };
        spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let params = spec.params_at(0)?;
        (params.u, params.d, spec.p)
    };
    let bundle = rate_bundle(&u, &d, p, a.sigma_x, a.sigma_y).map_err(|e| match e {
        Error::Argument(m) => CliError::Usage(m),
        other => CliError::Runtime(other),
    })?;
    let csv = format!("{}\n{}\n", RateBundle::CSV_HEADER, bundle.csv_row());
    match &a.out {
        Some(path) => {
            io::write_text(path, &csv)?;
            println!(
                "rate_exp {:e}, lower_bound {:e}, beta_sq {:e}; wrote {}",
                bundle.upper_sharp,
                bundle.lower_bound,
                bundle.beta_sq,
                path.display()
            );
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn evaluate(a: EvaluateArgs) -> CliResult {
    let hat = io::read_permutation_csv(&a.pi_hat)?;
    let star = io::read_permutation_csv(&a.pi_star)?;
    let loss = mismatch_loss(&hat, &star)?;
    let cycles = cycle_decompose(&hat, &star)?;
    println!("loss {loss}");
    if cycles.is_empty() {
        println!("cycles none");
    } else {
        println!("cycles {cycles}");
    }
    if let (Some(lx), Some(ly)) = (&a.labels_x, &a.labels_y) {
        let lx = io::read_labels_csv(lx)?;
        let ly = io::read_labels_csv(ly)?;
        let conf = label_confusion(&hat, &lx, &ly)?;
        println!("accuracy {}", conf.accuracy);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_two() {
        let code = run_with_args(["matchkit", "simulate", "--axis", "signal", "--seed-param", "1", "--seed-noise", "2"]);
        assert_eq!(code, 2);
        let code = run_with_args([
            "matchkit", "simulate", "--axis", "signal", "--r", "0", "--seed-param", "1", "--seed-noise", "2",
            "--out", "/nonexistent/x.csv",
        ]);
        assert_eq!(code, 2);
        assert_eq!(run_with_args(["matchkit", "theory"]), 2);
        assert_eq!(run_with_args(["matchkit", "evaluate", "--help"]), 0);
    }
}
