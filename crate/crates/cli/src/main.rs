//! Command-line front end: PIE sweeps over a mean-photon-number grid,
//! superadditivity threshold location, and asymptotic bound tables, emitted
//! as CSV (UTF-8, LF, 10 significant digits).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;

use photon_pie::optimize::{
    hadamard_strategy_pie, log_grid, superadditivity_threshold, sweep_point, Scheme, SchemeParams,
    SweepSpec,
};
use photon_pie::receivers::helstrom_mi;

#[derive(Parser)]
#[command(
    name = "photon-pie",
    version,
    about = "Photon information efficiency of coherent-state receivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the photon information efficiency of a receiver over a
    /// log-spaced grid of mean photon numbers.
    PieSweep(SweepArgs),
    /// Locate the superadditivity threshold of the two-symbol scheme and
    /// emit the two compared PIE curves.
    Threshold(ThresholdArgs),
    /// Emit asymptotic PIE bounds: the two-symbol optimum, the three-symbol
    /// bound curve, or the Hadamard strategy table.
    Bound(BoundArgs),
}

#[derive(Args, Clone, Default)]
struct SweepArgs {
    /// Receiver: helstrom | shannon_hartley | homodyne_bpsk | two_symbol |
    /// two_symbol_displaced | three_symbol | hadamard
    #[arg(long)]
    scheme: Option<String>,
    /// Smallest mean photon number of the grid [default: 1e-4]
    #[arg(long)]
    nbar_min: Option<f64>,
    /// Largest mean photon number of the grid [default: 1]
    #[arg(long)]
    nbar_max: Option<f64>,
    /// Number of grid points [default: 50]
    #[arg(long)]
    points: Option<usize>,
    /// Fixed probability of the counting-routed word (two-symbol schemes)
    #[arg(long)]
    u: Option<f64>,
    /// Fixed probability of each counting-routed word (three-symbol scheme)
    #[arg(long)]
    v: Option<f64>,
    /// Fixed detector displacement
    #[arg(long)]
    beta: Option<f64>,
    /// Thermal background photon number (shannon_hartley)
    #[arg(long)]
    nb: Option<f64>,
    /// Hadamard word length (hadamard scheme)
    #[arg(long = "M")]
    m: Option<usize>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads [default: machine parallelism]
    #[arg(long)]
    threads: Option<usize>,
    /// JSON config file providing any of the above; flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
struct ThresholdArgs {
    /// Output CSV path for the compared curves (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads [default: machine parallelism]
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct BoundArgs {
    /// Bound family: two_symbol | three_symbol | hadamard
    #[arg(long)]
    scheme: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file providing any of the above; flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Optional settings accepted from a JSON config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    scheme: Option<String>,
    nbar_min: Option<f64>,
    nbar_max: Option<f64>,
    points: Option<usize>,
    u: Option<f64>,
    v: Option<f64>,
    beta: Option<f64>,
    nb: Option<f64>,
    #[serde(rename = "M")]
    m: Option<usize>,
    out: Option<PathBuf>,
    threads: Option<usize>,
}

enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl From<photon_pie::Error> for CliError {
    fn from(e: photon_pie::Error) -> Self {
        match e {
            photon_pie::Error::Domain(msg) => CliError::Usage(msg),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::PieSweep(args) => cmd_pie_sweep(args),
        Command::Threshold(args) => cmd_threshold(args),
        Command::Bound(args) => cmd_bound(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("invalid config file: {e}")))
        }
    }
}

/// Ten significant digits, scientific, locale-independent.
fn fmt10(x: f64) -> String {
    format!("{x:.9e}")
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(CliError::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))
}

fn cmd_pie_sweep(args: SweepArgs) -> Result<(), CliError> {
    let file = load_config(&args.config)?;
    let scheme_name = args
        .scheme
        .or(file.scheme)
        .ok_or_else(|| CliError::Usage("--scheme is required".into()))?;
    let scheme: Scheme = scheme_name.parse().map_err(CliError::from)?;
    let nbar_min = args.nbar_min.or(file.nbar_min).unwrap_or(1e-4);
    let nbar_max = args.nbar_max.or(file.nbar_max).unwrap_or(1.0);
    let points = args.points.or(file.points).unwrap_or(50);
    let params = SchemeParams {
        u: args.u.or(file.u),
        v: args.v.or(file.v),
        beta: args.beta.or(file.beta),
        nb: args.nb.or(file.nb),
        m: args.m.or(file.m),
    };
    let out = args.out.or(file.out);
    let threads = args.threads.or(file.threads);

    let grid = if points == 1 {
        vec![nbar_min]
    } else {
        log_grid(nbar_min, nbar_max, points).map_err(CliError::from)?
    };
    let spec = SweepSpec::new(grid, scheme, params).map_err(CliError::from)?;

    let pool = build_pool(threads)?;
    let rows: Result<Vec<_>, photon_pie::Error> = pool.install(|| {
        spec.grid
            .par_iter()
            .map(|nbar| sweep_point(spec.scheme, *nbar, &spec.params))
            .collect()
    });
    let rows = rows.map_err(CliError::from)?;

    let mut csv = String::from("nbar,pie,param_opt\n");
    for row in &rows {
        let param = row.param.map(fmt10).unwrap_or_default();
        let _ = writeln!(csv, "{},{},{param}", fmt10(row.nbar), fmt10(row.pie));
    }
    emit(&out, &csv)
}

fn cmd_threshold(args: ThresholdArgs) -> Result<(), CliError> {
    let threshold = superadditivity_threshold::<f64>().map_err(CliError::from)?;
    println!("superadditivity threshold nbar = {threshold:.4}");

    let grid = log_grid(1e-3, 0.1, 25).map_err(CliError::from)?;
    let pool = build_pool(args.threads)?;
    let rows: Result<Vec<_>, photon_pie::Error> = pool.install(|| {
        grid.par_iter()
            .map(|nbar| {
                let two = sweep_point(Scheme::TwoSymbol, *nbar, &SchemeParams::default())?;
                Ok((*nbar, two.pie, helstrom_mi(*nbar) / *nbar))
            })
            .collect()
    });
    let rows = rows.map_err(CliError::from)?;
    let mut csv = String::from("nbar,pie_two_symbol,pie_helstrom\n");
    for (nbar, two, hel) in &rows {
        let _ = writeln!(csv, "{},{},{}", fmt10(*nbar), fmt10(*two), fmt10(*hel));
    }
    emit(&args.out, &csv)
}

fn cmd_bound(args: BoundArgs) -> Result<(), CliError> {
    let file = load_config(&args.config)?;
    let scheme_name = args
        .scheme
        .or(file.scheme)
        .ok_or_else(|| CliError::Usage("--scheme is required".into()))?;
    let out = args.out.or(file.out);
    match scheme_name.as_str() {
        "two_symbol" => {
            let value = 2.0 + (-3.0f64).exp();
            emit(&out, &format!("pie_bound\n{}\n", fmt10(value)))
        }
        "three_symbol" => {
            let mut csv = String::from("v,pie_bound\n");
            for k in 0..=50 {
                let v = 0.5 * k as f64 / 50.0;
                let bound =
                    photon_pie::lowcost::three_symbol_bound(v).map_err(CliError::from)?;
                let _ = writeln!(csv, "{},{}", fmt10(v), fmt10(bound));
            }
            emit(&out, &csv)
        }
        "hadamard" => {
            let mut csv = String::from("M,strategy,pie\n");
            for m in [2usize, 4, 8, 12, 16, 32] {
                let (pie, strategy) =
                    hadamard_strategy_pie::<f64>(m).map_err(CliError::from)?;
                let _ = writeln!(csv, "{m},{strategy},{}", fmt10(pie));
            }
            emit(&out, &csv)
        }
        other => Err(CliError::Usage(format!(
            "unknown bound scheme '{other}' (expected two_symbol, three_symbol, or hadamard)"
        ))),
    }
}
