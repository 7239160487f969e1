use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod io;

/// Exit status: 0 pass, 1 invariant failure, 2 input error.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Invariant(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

#[derive(Parser, Debug)]
#[command(name = "akhiezer", version, about = "Apply and verify the Akhiezer transform pair on sampled signals")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Kernel parameter ω > 0.
    #[arg(long, global = true, env = "AKHIEZER_OMEGA", default_value_t = 1.0)]
    pub omega: f64,
    /// Weight exponent, 0 ≤ σ < ω.
    #[arg(long, global = true, env = "AKHIEZER_SIGMA", default_value_t = 0.0)]
    pub sigma: f64,
    /// Sampling grid as tmin:tmax:n.
    #[arg(long, global = true, env = "AKHIEZER_GRID", default_value = "-20:20:4096", value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: GridSpec,
    #[arg(long, global = true, env = "AKHIEZER_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, short, global = true, env = "AKHIEZER_OUT")]
    pub out: Option<PathBuf>,
    /// Tolerance override, e.g. `--tol cross_s=1e-5`. Repeatable.
    #[arg(long = "tol", global = true, value_parser = parse_override)]
    pub tolerances: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub n: usize,
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("expected tmin:tmax:n, got {s:?}"));
    };
    let t_min = a.trim().parse::<f64>().map_err(|e| format!("tmin: {e}"))?;
    let t_max = b.trim().parse::<f64>().map_err(|e| format!("tmax: {e}"))?;
    let n = n.trim().parse::<usize>().map_err(|e| format!("n: {e}"))?;
    Ok(GridSpec { t_min, t_max, n })
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v = v.trim().parse::<f64>().map_err(|e| format!("{k}: {e}"))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(format!("{k}: tolerance must be finite and >= 0"));
    }
    Ok((k.trim().to_owned(), v))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transform a generated or CSV signal and write it as CSV.
    Apply(ApplyArgs),
    /// Run the invariant suite and write a JSON report.
    Verify(VerifyArgs),
    /// Time the direct and spectral paths over a list of sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    #[value(name = "C")]
    C,
    #[value(name = "S")]
    S,
    Phi,
    Psi,
    Hilbert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Spectral,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignalKind {
    Gaussian,
    Bump,
    SechPower,
    GrownBump,
    BandlimitedNoise,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    #[arg(long, env = "AKHIEZER_TRANSFORM", value_enum, default_value = "phi")]
    pub transform: Transform,
    #[arg(long, env = "AKHIEZER_METHOD", value_enum, default_value = "spectral")]
    pub method: Method,
    /// Generated input signal, placed in the first component.
    #[arg(long, value_enum, default_value = "gaussian", conflicts_with = "input")]
    pub signal: SignalKind,
    /// CSV input (`t,re1,im1,re2,im2`); its t column defines the grid.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Where `method=both` writes `t,dev1,dev2`; defaults to `<out>.deviation.csv`.
    #[arg(long)]
    pub deviation_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub center: f64,
    /// Gaussian width, bump radius or sech scale.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, default_value_t = 2.0)]
    pub power: f64,
    /// Growth rate of grown_bump; defaults to 0.8σ.
    #[arg(long)]
    pub growth: Option<f64>,
    #[arg(long, default_value_t = 6.0)]
    pub plateau: f64,
    #[arg(long, default_value_t = 3.0)]
    pub taper: f64,
    #[arg(long, default_value_t = 2.0)]
    pub cutoff: f64,
    #[arg(long, default_value_t = 16)]
    pub modes: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Random trials per weighted bound report.
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, hide = true, env = "AKHIEZER_INJECT_FAULT")]
    pub inject_fault: Option<String>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "256,1024,4096")]
    pub sizes: Vec<usize>,
    /// Per-size budget for the direct path, seconds.
    #[arg(long, default_value_t = 60.0)]
    pub timeout: f64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("AKHIEZER_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Apply(a) => commands::apply(&cli.run, &a),
        Command::Verify(v) => commands::verify(&cli.run, &v),
        Command::Bench(b) => commands::bench(&cli.run, &b),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
