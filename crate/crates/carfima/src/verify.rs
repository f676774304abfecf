//! Cross-route consistency suite for one model: closed form against
//! quadrature, the cosine transform of the spectral density, the Lyapunov
//! residual, the H = 1/2 matrix and eigen forms, and a Monte Carlo check of
//! the exact simulator.

use std::fmt;

use carfima_core::acf::Autocovariance;
use carfima_core::model::CarfimaModel;
use carfima_core::simulate::ExactSimulator;
use carfima_core::spectrum::FourierAcf;
use carfima_core::stats::{acf_known_mean, mean, variance};
use carfima_core::Result;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Closed form vs quadrature, relative with absolute floor `acf_abs`.
    pub acf_rel: f64,
    pub acf_abs: f64,
    pub fourier_rel: f64,
    /// Lyapunov residual relative to `sigma^2`.
    pub lyapunov: f64,
    pub carma_rel: f64,
    /// Monte Carlo band in standard errors and the tolerated exceedances.
    pub mc_se: f64,
    pub mc_exceedances: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            acf_rel: 1e-6,
            acf_abs: 1e-10,
            fourier_rel: 1e-4,
            lyapunov: 1e-8,
            carma_rel: 1e-9,
            mc_se: 3.0,
            mc_exceedances: 2,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub tolerances: Tolerances,
    pub mc_paths: usize,
    pub mc_len: usize,
    pub mc_max_lag: usize,
    pub step_h: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            mc_paths: 2000,
            mc_len: 256,
            mc_max_lag: 10,
            step_h: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub model_hash: String,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {}", self.model_hash)?;
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<22} max_dev={:.3e} tol={:.3e} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_deviation,
                c.tolerance,
                c.detail
            )?;
        }
        write!(f, "{}", if self.passed() { "all checks passed" } else { "some checks failed" })
    }
}

pub const VERIFY_LAGS: [f64; 6] = [0.0, 0.05, 0.5, 1.0, 2.0, 10.0];
pub const FOURIER_LAGS: [f64; 3] = [0.0, 1.0, 5.0];

fn rel_dev(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}

fn check(name: &'static str, max_deviation: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult {
        name,
        max_deviation,
        tolerance,
        passed: max_deviation <= tolerance,
        detail,
    }
}

/// Largest relative deviation of the closed form from the integral form;
/// the absolute floor applies as `max(|ref|, floor / rel)`.
pub fn closed_vs_quadrature(engine: &Autocovariance, lags: &[f64], tol: &Tolerances) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &h in lags {
        let c = engine.closed_form(h)?;
        let q = engine.integral_form(h)?;
        if (c - q).abs() > tol.acf_abs {
            worst = worst.max(rel_dev(c, q, 0.0));
        }
    }
    Ok(worst)
}

pub fn run(model: &CarfimaModel, opts: &VerifyOptions) -> Result<VerifyReport> {
    let tol = &opts.tolerances;
    let engine = Autocovariance::new(model)?;
    let mut checks = Vec::new();

    if engine.eigen().distinct {
        let dev = closed_vs_quadrature(&engine, &VERIFY_LAGS, tol)?;
        checks.push(check("closed_vs_quadrature", dev, tol.acf_rel, format!("lags {VERIFY_LAGS:?}")));
    } else {
        checks.push(CheckResult {
            name: "closed_vs_quadrature",
            max_deviation: 0.0,
            tolerance: tol.acf_rel,
            passed: true,
            detail: "skipped: repeated eigenvalues".into(),
        });
    }

    let fourier = FourierAcf::new(model)?;
    let mut worst: f64 = 0.0;
    for &h in &FOURIER_LAGS {
        worst = worst.max(rel_dev(fourier.gamma(h)?, engine.gamma(h)?, tol.acf_abs));
    }
    checks.push(check("fourier_vs_acf", worst, tol.fourier_rel, format!("lags {FOURIER_LAGS:?}")));

    let s2 = model.sigma() * model.sigma();
    let res = engine.state_cov().lyapunov_residual(engine.companion(), model.sigma()) / s2;
    checks.push(check("lyapunov_residual", res, tol.lyapunov, "relative to sigma^2".into()));

    let carma = Autocovariance::new(&model.with_hurst(0.5)?)?;
    let mut worst: f64 = 0.0;
    if carma.eigen().distinct {
        for &h in &VERIFY_LAGS {
            let m = carma.carma_matrix_form(h);
            if let Some(e) = carma.carma_eigen_form(h) {
                worst = worst.max(rel_dev(m, e, tol.acf_abs));
            }
        }
    }
    checks.push(check("carma_matrix_vs_eigen", worst, tol.carma_rel, "same AR/MA at H = 1/2".into()));

    checks.push(monte_carlo(model, &engine, opts)?);
    Ok(VerifyReport {
        model_hash: model.hash_hex(),
        checks,
    })
}

fn monte_carlo(model: &CarfimaModel, engine: &Autocovariance, opts: &VerifyOptions) -> Result<CheckResult> {
    let tol = &opts.tolerances;
    let sim = ExactSimulator::new(model, opts.mc_len, opts.step_h)?;
    let mu = model.stationary_mean();
    let per_path: Vec<Vec<f64>> = (0..opts.mc_paths as u64)
        .into_par_iter()
        .map(|r| acf_known_mean(&sim.sample(opts.seed, r).values, mu, opts.mc_max_lag))
        .collect();
    let mut exceed = 0;
    let mut worst: f64 = 0.0;
    for k in 0..=opts.mc_max_lag {
        let col: Vec<f64> = per_path.iter().map(|a| a[k]).collect();
        let se = (variance(&col) / col.len() as f64).sqrt();
        let z = (mean(&col) - engine.gamma(k as f64 * opts.step_h)?).abs() / se;
        worst = worst.max(z);
        if z > tol.mc_se {
            exceed += 1;
        }
    }
    Ok(CheckResult {
        name: "monte_carlo_acf",
        max_deviation: worst,
        tolerance: tol.mc_se,
        passed: exceed <= tol.mc_exceedances,
        detail: format!(
            "{exceed} of {} lags beyond {} SE ({} paths of length {})",
            opts.mc_max_lag + 1,
            tol.mc_se,
            opts.mc_paths,
            opts.mc_len
        ),
    })
}
