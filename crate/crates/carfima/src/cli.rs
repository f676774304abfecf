//! Command-line interface.

use std::path::PathBuf;

use carfima_core::acf::{AcfMethod, AcfTable};
use carfima_core::estimate::FitConfig;
use carfima_core::simulate::{ExactSimulator, PathMethod, StateEulerSimulator};
use carfima_core::spectrum::{AliasOptions, SpectrumKind, SpectrumTable};
use clap::{Args, Parser, Subcommand};

use crate::io::{self, IoError};
use crate::verify::{self, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "carfima", version, about = "Autocovariances, spectra, simulation and Whittle fitting for CARFIMA(p, H, q) processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Autocovariance table "lag,gamma,method".
    Acf(AcfArgs),
    /// Spectral density table "omega,f,kind,h,K".
    Spectrum(SpectrumArgs),
    /// Simulated path "t,y" plus a JSON sidecar next to it.
    Simulate(SimulateArgs),
    /// Whittle fit of a path CSV, written as JSON.
    Fit(FitArgs),
    /// Cross-route consistency report for a model.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct AcfArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Lag grid `start:stop:step`, stop included.
    #[arg(long, default_value = "0:10:1")]
    pub lags: String,
    /// closed_form, quadrature, carma_exact or fourier; default picks the
    /// closed form, falling back to quadrature for repeated eigenvalues.
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Frequency grid `start:stop:count`, both ends included.
    #[arg(long, default_value = "0.01:3.14:100")]
    pub omegas: String,
    /// continuous or aliased.
    #[arg(long, default_value = "continuous")]
    pub kind: String,
    /// Sampling step for the aliased density.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    /// Explicit aliasing terms per side.
    #[arg(long = "K", default_value_t = AliasOptions::default().k)]
    pub k: usize,
    /// Largest relative width of the aliasing tail bracket.
    #[arg(long, default_value_t = AliasOptions::default().rel_tol)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// exact_gaussian or state_euler.
    #[arg(long, default_value = "exact_gaussian")]
    pub method: String,
    /// Fine steps per observation for state_euler.
    #[arg(long, default_value_t = 8)]
    pub substeps: usize,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Path CSV with header "t,y".
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    /// Optional starting model (JSON).
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long = "K", default_value_t = FitConfig::default().k)]
    pub k: usize,
    /// Seed of the jittered starting points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = FitConfig::default().starts)]
    pub starts: usize,
    /// Relative simplex tolerance on the objective.
    #[arg(long, default_value_t = FitConfig::default().f_tol)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sampling step of the Monte Carlo check.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo path length.
    #[arg(long, default_value_t = VerifyOptions::default().mc_len)]
    pub n: usize,
    /// Relative tolerance of the closed form against quadrature.
    #[arg(long, default_value_t = verify::Tolerances::default().acf_rel)]
    pub tol: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<carfima_core::Error> for CliError {
    fn from(e: carfima_core::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Model(m) => m.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn parse_triplet(spec: &str, what: &str) -> Result<(f64, f64, f64), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(invalid(format!("{what} must look like a:b:c, got {spec:?}")));
    }
    let mut v = [0.0f64; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|_| invalid(format!("bad number {p:?} in {what}")))?;
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(invalid(format!("{what} must be finite")));
    }
    Ok((v[0], v[1], v[2]))
}

/// `a:b:step` with `b` included when it lies on the grid.
pub fn parse_lags(spec: &str) -> Result<Vec<f64>, CliError> {
    let (a, b, step) = parse_triplet(spec, "--lags")?;
    if !(step > 0.0) || b < a {
        return Err(invalid("--lags needs step > 0 and stop >= start"));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(invalid("--lags grid is too large"));
    }
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

/// `a:b:count` evenly spaced with both ends.
pub fn parse_omegas(spec: &str) -> Result<Vec<f64>, CliError> {
    let (a, b, count) = parse_triplet(spec, "--omegas")?;
    if count < 1.0 || count.fract() != 0.0 || count > 1e7 {
        return Err(invalid("--omegas count must be a positive integer"));
    }
    let count = count as usize;
    if count == 1 {
        return Ok(vec![a]);
    }
    Ok((0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Acf(a) => {
            let model = io::read_model(&a.model)?;
            let lags = parse_lags(&a.lags)?;
            let method = match a.method.as_deref() {
                None => None,
                Some(s) => Some(AcfMethod::parse(s).ok_or_else(|| invalid(format!("unknown ACF method {s:?}")))?),
            };
            let table = AcfTable::compute(&model, &lags, method)?;
            io::write_table_file(&a.out, |f| io::write_acf_csv(f, &table))?;
        }
        Command::Spectrum(a) => {
            let model = io::read_model(&a.model)?;
            let omegas = parse_omegas(&a.omegas)?;
            let table = match SpectrumKind::parse(&a.kind) {
                Some(SpectrumKind::Continuous) => SpectrumTable::continuous(&model, &omegas)?,
                Some(SpectrumKind::Aliased) => {
                    let opts = AliasOptions { k: a.k, rel_tol: a.tol };
                    SpectrumTable::aliased(&model, &omegas, a.h, &opts)?
                }
                None => return Err(invalid(format!("unknown spectrum kind {:?}", a.kind))),
            };
            io::write_table_file(&a.out, |f| io::write_spectrum_csv(f, &table))?;
        }
        Command::Simulate(a) => {
            let model = io::read_model(&a.model)?;
            let path = match PathMethod::parse(&a.method) {
                Some(PathMethod::ExactGaussian) => ExactSimulator::new(&model, a.n, a.h)?.sample(a.seed, 0),
                Some(PathMethod::StateEuler) => StateEulerSimulator::new(&model, a.n, a.h, a.substeps)?.sample(a.seed, 0),
                None => return Err(invalid(format!("unknown simulation method {:?}", a.method))),
            };
            io::write_path_files(&a.out, &model, &path)?;
        }
        Command::Fit(a) => {
            let path = io::read_path_file(&a.input)?;
            let init = a.model.as_deref().map(io::read_model).transpose()?;
            let cfg = FitConfig {
                starts: a.starts,
                f_tol: a.tol,
                k: a.k,
                seed: a.seed,
                init,
                ..FitConfig::default()
            };
            let result = crate::parallel::fit(&path, a.p, a.q, &cfg)?;
            io::write_fit(&a.out, &result)?;
        }
        Command::Verify(a) => {
            let model = io::read_model(&a.model)?;
            let mut opts = VerifyOptions {
                step_h: a.h,
                seed: a.seed,
                mc_len: a.n,
                ..VerifyOptions::default()
            };
            opts.tolerances.acf_rel = a.tol;
            let report = verify::run(&model, &opts)?;
            println!("{report}");
            if let Some(out) = &a.out {
                std::fs::write(out, format!("{report}\n")).map_err(|e| invalid(format!("{}: {e}", out.display())))?;
            }
            if !report.passed() {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                return Err(CliError::Numerical(format!("verification failed: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}
