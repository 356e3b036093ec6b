//! Command-line front end for `bohrlab`.
//!
//! [`run`] parses arguments, resolves the [`RunConfig`] from flags, a
//! `--config` file and `BOHRLAB_SEED`, runs one subcommand inside a rayon pool
//! and writes its artifact. Exit codes: 0 success, 1 selftest failure,
//! 2 validation or usage error, 3 budget exhausted.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use bohrlab::bounds::ExpBase;
use bohrlab::Exponent;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub mod commands;
pub mod config;
pub mod output;
pub mod selftest;
pub mod sweep;

pub use config::{FileConfig, IntList};
pub use output::{Artifact, Table};

pub const SEED_ENV: &str = "BOHRLAB_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] bohrlab::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0} selftest check(s) failed")]
    SelftestFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) if e.is_budget() => 3,
            CliError::SelftestFailed(_) => 1,
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Parser)]
#[command(name = "bohrlab", version, about = "Mixed Bohr radii and unconditionality constants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Global seed; defaults to $BOHRLAB_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// File of `key = value` defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Timing metadata; defaults to `<output>.meta.json` when `--output` is set.
    #[arg(long, global = true)]
    pub sidecar: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Multiplicative slack on estimate-based checks.
    #[arg(long, global = true)]
    pub slack: Option<f64>,
    /// Item budget for streams and searches.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Optimizer restarts.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// List Λ(m,n), Λ_k(m,n) or 𝒥(m,n) with multiplicities.
    Enumerate(EnumerateArgs),
    /// Emit a polynomial or series as JSON.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Sup-norm (or majorant sup) of a polynomial on a unit ball.
    Norm(NormArgs),
    /// Closed-form bounds and rates.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Lower-bound witnesses and χ brackets.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Bohr-radius brackets.
    #[command(subcommand)]
    Bohr(BohrCmd),
    /// Batch tables over fixed grids.
    Sweep(SweepArgs),
    /// Run the built-in property suite.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetKind {
    Lambda,
    LambdaK,
    J,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "lambda")]
    pub set: SetKind,
    /// Bound on each exponent for `lambda-k`.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PolyCmd {
    /// Standard complex Gaussian coefficients.
    Random {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: usize,
    },
    /// Truncated Möbius series (a − z)/(1 − a z).
    Moebius {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 12)]
        degree: u32,
    },
    /// Σ ε_α (m!/α!) z^α; signs as a `+-` string in colex order, or random.
    Sign {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        signs: Option<String>,
    },
    /// Random series normalized to sup 1 on B_p.
    Series {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        #[arg(long, default_value = "inf")]
        p: Exponent,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NormArgs {
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long)]
    pub p: Exponent,
    /// Sup of Σ|c_α z^α| on B_q instead.
    #[arg(long)]
    pub majorant: bool,
    #[arg(long)]
    pub q: Option<Exponent>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundArgs {
    #[arg(long, default_value = "1")]
    pub m: IntList,
    #[arg(long, default_value = "2")]
    pub n: IntList,
    #[arg(long, default_value = "2")]
    pub p: Exponent,
    #[arg(long, default_value = "2")]
    pub q: Exponent,
    #[arg(long)]
    pub beta_override: Option<f64>,
    #[arg(long, default_value = "p")]
    pub exp_base: ExpBase,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BoundCmd {
    /// Σ over 𝒥(m,n) of |[j]|^{β}.
    Jsum(BoundArgs),
    /// Analytic upper bound on χ_M.
    Chiupper(BoundArgs),
    /// Envelope constant χ / rate.
    Envelope(BoundArgs),
    /// Region and asymptotic rate of K.
    Region(BoundArgs),
    /// Asymptotic rate of K evaluated at n.
    Rate(BoundArgs),
    /// Shape of the random-polynomial norm bound, without its constant.
    Bayart(BoundArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WitnessArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: Exponent,
    /// Defaults to `p`.
    #[arg(long)]
    pub q: Option<Exponent>,
    /// Analytic endpoints only.
    #[arg(long)]
    pub analytic: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum WitnessCmd {
    /// Sign-polynomial search for a large ratio.
    Search(WitnessArgs),
    /// Lower and upper bounds on χ_M.
    Bracket(WitnessArgs),
    /// Random-coefficient brute force for small |Λ|.
    Brute(WitnessArgs),
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BohrCmd {
    /// Bounds on K(B_p, B_q) in dimension n.
    Bracket {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Exponent,
        #[arg(long)]
        q: Exponent,
        #[arg(long, default_value_t = 6)]
        mmax: u32,
        #[arg(long)]
        analytic: bool,
    },
    /// Bracket around the one-dimensional radius.
    Oned {
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Random series checked below 1/3.
        #[arg(long, default_value_t = 10_000)]
        series: usize,
    },
    /// Check a series file against the Wiener coefficient bound.
    Wiener {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        p: Exponent,
    },
    /// K brackets over a dimension grid.
    Table {
        #[arg(long)]
        n_grid: IntList,
        #[arg(long)]
        p: Exponent,
        #[arg(long)]
        q: Exponent,
        #[arg(long, default_value_t = 6)]
        mmax: u32,
        #[arg(long)]
        analytic: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    /// χ brackets, m ≤ 4, n ≤ 16, q ≤ p in {1, 4/3, 3/2, 2}.
    Brackets,
    /// Envelope constants, p = q = 2.
    Envelope,
    /// K brackets against K_m, n ≤ 64.
    Radius,
    /// Degree-one brute force against the closed form.
    Linear,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    /// Replaces the default dimension grid.
    #[arg(long)]
    pub n: Option<IntList>,
    /// Replaces the default largest degree.
    #[arg(long)]
    pub mmax: Option<u32>,
    /// Run sign search and brute force where they fit.
    #[arg(long)]
    pub witnesses: bool,
}

/// Everything that determines a run's primary output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub workers: Option<usize>,
    pub format: Option<Format>,
    pub slack: f64,
    pub budget: Option<u64>,
    pub restarts: usize,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn opt(&self) -> bohrlab::optimize::OptConfig {
        bohrlab::optimize::OptConfig::default()
            .with_restarts(self.restarts)
            .with_seed(self.seed)
    }
}

struct Resolved {
    cfg: RunConfig,
    sidecar: Option<PathBuf>,
}

fn resolve(cli: Cli, env_seed: Option<String>) -> Result<Resolved, CliError> {
    let file = match &cli.config {
        Some(path) => fs::read_to_string(path)?.parse::<FileConfig>()?,
        None => FileConfig::default(),
    };
    let env_seed = match env_seed {
        Some(s) => Some(
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got {s:?}")))?,
        ),
        None => None,
    };
    let slack = cli.slack.or(file.slack).unwrap_or(bohrlab::witness::DEFAULT_SLACK);
    if !(slack >= 1.0 && slack.is_finite()) {
        return Err(CliError::Usage(format!("slack must be a finite number ≥ 1, got {slack}")));
    }
    let restarts = cli.restarts.or(file.restarts).unwrap_or(64);
    if restarts == 0 {
        return Err(CliError::Usage("restarts must be at least 1".into()));
    }
    let workers = cli.workers.or(file.workers);
    if workers == Some(0) {
        return Err(CliError::Usage("workers must be at least 1".into()));
    }
    let output = cli.output.or(file.output);
    let sidecar = cli
        .sidecar
        .or(file.sidecar)
        .or_else(|| output.as_ref().map(|o| sidecar_for(o)));
    Ok(Resolved {
        cfg: RunConfig {
            command: cli.command,
            seed: cli.seed.or(file.seed).or(env_seed).unwrap_or(0),
            workers,
            format: cli.format.or(file.format),
            slack,
            budget: cli.budget.or(file.budget),
            restarts,
            output,
        },
        sidecar,
    })
}

fn sidecar_for(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

#[derive(Serialize)]
struct Sidecar<'a> {
    started_unix: f64,
    finished_unix: f64,
    elapsed_seconds: f64,
    exit_code: i32,
    command: &'a Command,
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn execute(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = cfg.workers {
            b = b.num_threads(w);
        }
        b.build().map_err(|e| CliError::Usage(format!("worker pool: {e}")))?
    };
    let (artifact, failures) = pool.install(|| commands::dispatch(cfg))?;
    match &cfg.output {
        Some(path) => {
            let mut buf = Vec::new();
            artifact.write(cfg, &mut buf)?;
            fs::write(path, buf)?;
        }
        None => artifact.write(cfg, out)?,
    }
    match failures {
        0 => Ok(()),
        k => Err(CliError::SelftestFailed(k)),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_env(argv, std::env::var(SEED_ENV).ok(), out, err)
}

/// [`run`] with an explicit value for `BOHRLAB_SEED`.
pub fn run_with_env<I, T>(argv: I, env_seed: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let resolved = match resolve(cli, env_seed) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let started = unix_now();
    let clock = Instant::now();
    let result = execute(&resolved.cfg, out);
    let code = match &result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    };
    if let Some(path) = &resolved.sidecar {
        let meta = Sidecar {
            started_unix: started,
            finished_unix: unix_now(),
            elapsed_seconds: clock.elapsed().as_secs_f64(),
            exit_code: code,
            command: &resolved.cfg.command,
        };
        let written = serde_json::to_vec_pretty(&meta)
            .map_err(CliError::from)
            .and_then(|b| fs::write(path, b).map_err(CliError::from));
        if let Err(e) = written {
            let _ = writeln!(err, "warning: sidecar not written: {e}");
        }
    }
    code
}
