//! Command-line front end: `glv <subcommand> [flags]` or `glv --sweep a.toml b.toml`.
//!
//! CSV goes to `--out` (with the resolved config next to it as
//! `<out>.config.toml`) or to stdout. Exit codes: 0 success, 1 i/o failure,
//! 2 configuration error, 3 numerical divergence, 4 experiment-condition
//! failure.

mod commands;
pub mod config;
pub mod csv;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use commands::{execute, RunOutput, SEPARATION_THRESHOLD};
pub use config::{Command, RunConfig};

use crate::error::Error;
use crate::models::{ModelKind, SystemParams};
use crate::sync::UpdateLaw;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Run(#[from] Error),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Config(_) | CliError::Run(Error::InvalidInput { .. }) => 2,
            CliError::Run(Error::NotEquilibrium { .. }) => 4,
            CliError::Run(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "glv", version, about = "Chaotic three-species Lotka-Volterra toolkit")]
struct Cli {
    /// Run several TOML configs concurrently; each must set `out`.
    #[arg(long, num_args = 1.., value_name = "CONFIG")]
    sweep: Vec<PathBuf>,

    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Integrate a trajectory (t,x1,x2,x3); --x0-pair adds a second run and the separation.
    Simulate(RunArgs),
    /// Lyapunov spectrum by the Benettin method (running estimates t,L1..Ln).
    Lyapunov(RunArgs),
    /// All five equilibria with characteristic polynomial, eigenvalues and type.
    Equilibria(RunArgs),
    /// Linear feedback stabilization of the axial equilibrium (t,x1,x2,x3,err_norm).
    Stabilize(RunArgs),
    /// Active-control drive-response synchronization.
    SyncActive(RunArgs),
    /// Adaptive-control synchronization with estimates of p and q.
    SyncAdaptive(RunArgs),
}

/// Flags shared by every subcommand. Flags a subcommand does not use are ignored.
#[derive(Debug, Default, Args)]
struct RunArgs {
    /// TOML run config; flags given on the command line override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// p,q,r[,d]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "P,Q,R[,D]")]
    params: Option<Vec<f64>>,
    /// linear | ht2 | ht3
    #[arg(long)]
    model: Option<ModelKind>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "A,B,C")]
    x0: Option<Vec<f64>>,
    /// Second initial state for a paired simulation.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "A,B,C")]
    x0_pair: Option<Vec<f64>>,
    /// Stabilization target (default: the axial equilibrium).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "A,B,C")]
    target: Option<Vec<f64>>,
    #[arg(long, value_name = "H")]
    step: Option<f64>,
    #[arg(long, value_name = "T")]
    t_end: Option<f64>,
    /// Time integrated before recording (or before measuring exponents).
    #[arg(long, value_name = "T0")]
    transient: Option<f64>,
    #[arg(long, value_name = "N")]
    record_every: Option<usize>,
    /// Lyapunov renormalization interval.
    #[arg(long, value_name = "T")]
    renorm_interval: Option<f64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// mu1,mu2[,mu3]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "M1,M2[,M3]")]
    gains: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "A,B")]
    response_x0: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "P0,Q0")]
    estimates_x0: Option<Vec<f64>>,
    /// lyapunov | paper-literal
    #[arg(long)]
    update_law: Option<UpdateLaw>,
    /// Conditional spectrum of the 5-D drive-response system.
    #[arg(long)]
    coupled: bool,
}

fn fixed<const N: usize>(what: &str, v: &[f64]) -> Result<[f64; N], CliError> {
    v.try_into()
        .map_err(|_| CliError::Config(format!("--{what} expects {N} comma-separated numbers, got {}", v.len())))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn resolve(command: Command, args: RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_toml(&read(path)?, Some(command)).map_err(CliError::Config)?,
        None => RunConfig::defaults(command),
    };
    let from_file = args.config.is_some();
    if let Some(kind) = args.model {
        cfg.set_model(kind, from_file || args.params.is_some(), from_file || args.x0.is_some());
    }
    if let Some(v) = args.params {
        let d = match v.len() {
            3 => cfg.params.d,
            4 => v[3],
            n => return Err(CliError::Config(format!("--params expects 3 or 4 numbers, got {n}"))),
        };
        cfg.params = SystemParams::new(v[0], v[1], v[2]).with_saturation(d);
    }
    if let Some(v) = args.x0 {
        cfg.x0 = fixed("x0", &v)?;
    }
    if let Some(v) = args.x0_pair {
        cfg.x0_pair = Some(fixed("x0-pair", &v)?);
    }
    if let Some(v) = args.target {
        cfg.target = Some(fixed("target", &v)?);
    }
    if let Some(h) = args.step {
        cfg.integration.step = h;
    }
    if let Some(t) = args.t_end {
        cfg.integration.t_end = t;
    }
    if let Some(t) = args.transient {
        cfg.integration.transient = t;
    }
    if let Some(n) = args.record_every {
        cfg.integration.record_every = n;
    }
    if let Some(t) = args.renorm_interval {
        cfg.renorm_interval = t;
    }
    if let Some(p) = args.out {
        cfg.out = Some(p);
    }
    if let Some(g) = args.gains {
        cfg.gains = Some(g);
    }
    if let Some(v) = args.response_x0 {
        cfg.response_x0 = Some(fixed("response-x0", &v)?);
    }
    if let Some(v) = args.estimates_x0 {
        cfg.estimates_x0 = Some(fixed("estimates-x0", &v)?);
    }
    if let Some(law) = args.update_law {
        cfg.update_law = law;
    }
    if args.coupled {
        cfg.coupled = true;
    }
    Ok(cfg)
}

/// Path of the config written next to an output file.
pub fn config_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".config.toml");
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs one config, writing its outputs. Returns the report text.
pub fn run_config(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let output = execute(cfg)?;
    if let Some(out) = &cfg.out {
        write_file(out, &output.csv)?;
        write_file(&config_path(out), &cfg.to_toml())?;
    }
    Ok(output)
}

fn single(cfg: RunConfig) -> i32 {
    match run_config(&cfg) {
        Ok(output) => {
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
            if cfg.out.is_some() {
                print!("{}", output.report);
            } else {
                let mut stdout = std::io::stdout().lock();
                // a closed pipe is not an error for a CSV consumer like `head`
                let _ = stdout.write_all(output.csv.as_bytes());
                let _ = stdout.flush();
                eprint!("{}", output.report);
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn sweep(paths: &[PathBuf]) -> i32 {
    let mut configs = Vec::with_capacity(paths.len());
    for path in paths {
        let loaded = read(path).and_then(|text| RunConfig::from_toml(&text, None).map_err(CliError::Config));
        match loaded {
            Ok(cfg) if cfg.out.is_some() => configs.push(cfg),
            Ok(_) => {
                eprintln!("error: {}: sweep configs must set `out`", path.display());
                return 2;
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return e.exit_code();
            }
        }
    }
    let results: Vec<Result<RunOutput, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|cfg| s.spawn(move || run_config(cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut code = 0;
    for (path, result) in paths.iter().zip(results) {
        match result {
            Ok(output) => {
                for w in &output.warnings {
                    eprintln!("warning: {}: {w}", path.display());
                }
                println!("{}: ok", path.display());
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                code = code.max(e.exit_code());
            }
        }
    }
    code
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (command, args) = match (cli.command, cli.sweep.is_empty()) {
        (Some(_), false) => {
            eprintln!("error: --sweep cannot be combined with a subcommand");
            return 2;
        }
        (None, false) => return sweep(&cli.sweep),
        (None, true) => {
            eprintln!("error: a subcommand or --sweep is required (see --help)");
            return 2;
        }
        (Some(sub), true) => match sub {
            Sub::Simulate(a) => (Command::Simulate, a),
            Sub::Lyapunov(a) => (Command::Lyapunov, a),
            Sub::Equilibria(a) => (Command::Equilibria, a),
            Sub::Stabilize(a) => (Command::Stabilize, a),
            Sub::SyncActive(a) => (Command::SyncActive, a),
            Sub::SyncAdaptive(a) => (Command::SyncAdaptive, a),
        },
    };
    match resolve(command, args) {
        Ok(cfg) => single(cfg),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
