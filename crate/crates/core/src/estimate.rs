//! Whittle estimation from a regularly sampled path against the aliased
//! spectral density.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fft::fft_real;
use crate::model::CarfimaModel;
use crate::optim::{nelder_mead, NelderMeadConfig};
use crate::poly::monic_roots;
use crate::simulate::SamplePath;
use crate::spectrum::{AliasGrid, AliasOptions, AliasedSpectrum, SpectralShape};

/// Smallest admissible path length.
pub const MIN_PERIODOGRAM_LEN: usize = 16;
/// Search interval for H and the excluded band around 1/2.
pub const HURST_RANGE: (f64, f64) = (0.01, 0.99);
pub const HURST_EXCLUSION: f64 = 0.005;

/// `I(w_j) = |sum_k (y_k - ybar) e^{-i w_j k}|^2 / (2 pi n)` at
/// `w_j = 2 pi j / n`, `j = 1..floor((n-1)/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub n: usize,
    pub step_h: f64,
}

/// All `n` ordinates `I(2 pi j / n)`, `j = 0..n-1`, of the mean-removed data.
pub fn full_periodogram(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mean = y.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = y.iter().map(|v| v - mean).collect();
    let scale = 1.0 / (2.0 * PI * n as f64);
    fft_real(&centered).iter().map(|z: &Complex64| z.norm_sqr() * scale).collect()
}

impl Periodogram {
    pub fn new(y: &[f64], step_h: f64) -> Result<Self> {
        let n = y.len();
        if n < MIN_PERIODOGRAM_LEN {
            return Err(Error::InvalidArgument(alloc::format!("periodogram needs n >= {MIN_PERIODOGRAM_LEN}, got {n}")));
        }
        if !(step_h > 0.0) {
            return Err(Error::InvalidArgument("step h must be positive".into()));
        }
        let full = full_periodogram(y);
        let m = (n - 1) / 2;
        Ok(Self {
            omegas: (1..=m).map(|j| 2.0 * PI * j as f64 / n as f64).collect(),
            values: full[1..=m].to_vec(),
            n,
            step_h,
        })
    }

    pub fn from_path(path: &SamplePath) -> Result<Self> {
        path.validate()?;
        Self::new(&path.values, path.step_h)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `sum_j [log f_h(w_j) + I(w_j) / f_h(w_j)]` with the aliased density
/// truncated at `K`.
pub fn whittle_objective(pg: &Periodogram, model: &CarfimaModel, k: usize) -> Result<f64> {
    let spec = AliasedSpectrum::new(model)?;
    let opts = AliasOptions {
        k,
        ..AliasOptions::default()
    };
    let mut total = 0.0;
    for (w, i) in pg.omegas.iter().zip(&pg.values) {
        let f = spec.eval(*w, pg.step_h, &opts)?.value;
        total += libm::log(f) + i / f;
    }
    Ok(total)
}

/// Objective with `sigma^2` minimized out analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfiledObjective {
    /// `(1/m) sum_j I(w_j) / f~_h(w_j)`, `f~` the density at `sigma = 1`.
    pub sigma2: f64,
    pub value: f64,
}

/// Periodogram bound to a fixed aliasing grid, for repeated evaluation.
#[derive(Debug, Clone)]
pub struct WhittleWorkspace {
    grid: AliasGrid,
    values: Vec<f64>,
    rel_tol: f64,
}

impl WhittleWorkspace {
    pub fn new(pg: &Periodogram, k: usize) -> Result<Self> {
        Ok(Self {
            grid: AliasGrid::new(&pg.omegas, pg.step_h, k)?,
            values: pg.values.clone(),
            rel_tol: AliasOptions::default().rel_tol,
        })
    }

    pub fn step_h(&self) -> f64 {
        self.grid.step_h()
    }

    /// Same value as [`whittle_objective`].
    pub fn objective(&self, model: &CarfimaModel) -> Result<f64> {
        let f = AliasedSpectrum::new(model)?.eval_grid(&self.grid, self.rel_tol)?;
        Ok(f.iter().zip(&self.values).map(|(f, i)| libm::log(*f) + i / f).sum())
    }

    /// Profile over `sigma^2` for the shape `(alpha, beta, H)`, given as
    /// ascending coefficients of the monic `alpha(z)` and of `beta(z)`.
    pub fn profile(&self, alpha_poly: &[f64], beta_poly: &[f64], hurst: f64) -> Result<ProfiledObjective> {
        let spec = AliasedSpectrum::from_shape(SpectralShape::from_parts(alpha_poly, beta_poly, hurst, 1.0));
        let f = spec.eval_grid(&self.grid, self.rel_tol)?;
        let m = f.len() as f64;
        let sigma2 = f.iter().zip(&self.values).map(|(f, i)| i / f).sum::<f64>() / m;
        let log_sum: f64 = f.iter().map(|v| libm::log(*v)).sum();
        Ok(ProfiledObjective {
            sigma2,
            value: m * libm::log(sigma2) + log_sum + m,
        })
    }

    pub fn profile_model(&self, model: &CarfimaModel) -> Result<ProfiledObjective> {
        model.require_stationary()?;
        self.profile(&model.alpha_poly(), &model.beta_poly(), model.hurst())
    }
}

/// `H = lo + (hi - lo) / (1 + e^{-x})` on `HURST_RANGE`.
pub fn hurst_from_logit(x: f64) -> f64 {
    let (lo, hi) = HURST_RANGE;
    lo + (hi - lo) / (1.0 + libm::exp(-x))
}

pub fn hurst_to_logit(hurst: f64) -> Result<f64> {
    let (lo, hi) = HURST_RANGE;
    if !(hurst > lo && hurst < hi) {
        return Err(Error::InvalidArgument(alloc::format!("H = {hurst} outside the search interval")));
    }
    let u = (hurst - lo) / (hi - lo);
    Ok(libm::log(u / (1.0 - u)))
}

fn hurst_admissible(hurst: f64) -> bool {
    (hurst - 0.5).abs() >= HURST_EXCLUSION && hurst > HURST_RANGE.0 && hurst < HURST_RANGE.1
}

/// True when all roots of `beta(z)` have negative real parts.
pub fn is_invertible(model: &CarfimaModel) -> bool {
    let beta = model.beta();
    let Some(&lead) = beta.last() else {
        return true;
    };
    let mut lower = vec![1.0 / lead];
    lower.extend(beta[..beta.len() - 1].iter().map(|b| b / lead));
    monic_roots(&lower).iter().all(|z| z.re < 0.0)
}

/// Ascending `alpha = [0, a_1..a_p]` of `prod (z - r_k)` over real roots.
fn alpha_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= r * ci;
        }
        c = next;
    }
    let mut alpha = vec![0.0];
    alpha.extend(c[..roots.len()].iter().map(|v| -v));
    alpha
}

#[derive(Debug, Clone)]
pub struct FitConfig {
    pub starts: usize,
    /// Relative spread of simplex values at termination.
    pub f_tol: f64,
    /// Iteration cap per start is this times the search dimension.
    pub iterations_per_dim: usize,
    /// Aliasing truncation used in the objective.
    pub k: usize,
    /// Seed for the jittered starting points.
    pub seed: u64,
    pub init: Option<CarfimaModel>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            starts: 8,
            f_tol: 1e-8,
            iterations_per_dim: 500,
            k: 16,
            seed: 0,
            init: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model_hat: CarfimaModel,
    pub objective_value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub stationarity_ok: bool,
    /// Roots of `beta` in the open left half-plane; reported, not enforced.
    pub invertible: bool,
}

/// Outcome of the simplex search from one starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct StartOutcome {
    pub theta: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Search problem for fixed `(p, q)`: parameters
/// `theta = (a_1..a_p, b_1..b_q, logit H)`, `sigma^2` profiled out.
#[derive(Debug, Clone)]
pub struct WhittleProblem {
    ws: WhittleWorkspace,
    p: usize,
    q: usize,
    mean: f64,
    cfg: FitConfig,
}

impl WhittleProblem {
    pub fn new(path: &SamplePath, p: usize, q: usize, cfg: &FitConfig) -> Result<Self> {
        if p == 0 || q >= p {
            return Err(Error::InvalidArgument(alloc::format!("need p >= 1 and 0 <= q < p, got p = {p}, q = {q}")));
        }
        if cfg.starts == 0 {
            return Err(Error::InvalidArgument("at least one start is required".into()));
        }
        if let Some(init) = &cfg.init {
            if init.p() != p || init.q() != q {
                return Err(Error::InvalidArgument("initial model order differs from (p, q)".into()));
            }
            init.require_stationary()?;
        }
        let pg = Periodogram::from_path(path)?;
        Ok(Self {
            ws: WhittleWorkspace::new(&pg, cfg.k)?,
            p,
            q,
            mean: path.values.iter().sum::<f64>() / path.values.len() as f64,
            cfg: cfg.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.p + self.q + 1
    }

    fn shape(&self, theta: &[f64]) -> Option<(Vec<f64>, Vec<f64>, f64)> {
        let hurst = hurst_from_logit(theta[self.p + self.q]);
        if !hurst_admissible(hurst) {
            return None;
        }
        let mut alpha = vec![0.0];
        alpha.extend_from_slice(&theta[..self.p]);
        let beta = theta[self.p..self.p + self.q].to_vec();
        Some((alpha, beta, hurst))
    }

    fn model_at(&self, theta: &[f64], sigma: f64) -> Result<CarfimaModel> {
        let (alpha, beta, hurst) = self
            .shape(theta)
            .ok_or_else(|| Error::InvalidArgument("H in the excluded band".into()))?;
        CarfimaModel::new(alpha, beta, hurst, sigma)
    }

    /// AR roots beyond this modulus lie far outside the sampled band and
    /// are rejected: `pi K / h`.
    pub fn max_root_modulus(&self) -> f64 {
        PI * self.cfg.k as f64 / self.ws.step_h()
    }

    /// Profiled objective at `theta`; `+inf` for inadmissible or
    /// nonstationary points, or roots beyond [`Self::max_root_modulus`].
    pub fn objective(&self, theta: &[f64]) -> f64 {
        let Ok(model) = self.model_at(theta, 1.0) else {
            return f64::INFINITY;
        };
        let es = model.eigen_structure();
        if !es.is_stationary() || es.max_modulus() > self.max_root_modulus() {
            return f64::INFINITY;
        }
        match self.ws.profile_model(&model) {
            Ok(p) if p.value.is_finite() => p.value,
            _ => f64::INFINITY,
        }
    }

    fn init_model(&self) -> (Vec<f64>, Vec<f64>, f64) {
        match &self.cfg.init {
            Some(m) => (m.alpha()[1..].to_vec(), m.beta().to_vec(), m.hurst()),
            None => {
                let roots: Vec<f64> = (1..=self.p).map(|k| -(k as f64)).collect();
                (alpha_from_roots(&roots)[1..].to_vec(), vec![0.1; self.q], 0.75)
            }
        }
    }

    /// Start 0 is the initial model; the others jitter its AR roots and MA
    /// coefficients and spread H over stratified cells of (0.05, 0.95).
    pub fn starting_points(&self) -> Vec<Vec<f64>> {
        let (alpha, beta, hurst) = self.init_model();
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        let mut lower: Vec<f64> = alpha.iter().map(|a| -a).collect();
        lower.push(1.0);
        let roots = monic_roots(&lower[..self.p]);
        let clamp_h = |h: f64| {
            let h = h.clamp(0.02, 0.98);
            if (h - 0.5).abs() < 0.02 {
                if h < 0.5 { 0.48 } else { 0.52 }
            } else {
                h
            }
        };
        let mut out = Vec::with_capacity(self.cfg.starts);
        let mut theta0 = alpha.clone();
        theta0.extend_from_slice(&beta);
        theta0.push(hurst_to_logit(clamp_h(hurst)).expect("clamped into range"));
        out.push(theta0);
        let cells = self.cfg.starts.saturating_sub(1).max(1) as f64;
        for i in 1..self.cfg.starts {
            let mut theta = Vec::with_capacity(self.dim());
            let all_real = roots.iter().all(|r| r.im.abs() < 1e-12);
            if all_real {
                let jittered: Vec<f64> = roots
                    .iter()
                    .map(|r| r.re * libm::exp(0.5 * rng.sample::<f64, _>(StandardNormal)))
                    .collect();
                theta.extend_from_slice(&alpha_from_roots(&jittered)[1..]);
            } else {
                // complex pairs: scale all roots by one common factor
                let s = libm::exp(0.5 * rng.sample::<f64, _>(StandardNormal));
                theta.extend(alpha.iter().enumerate().map(|(k, a)| a * libm::pow(s, (self.p - k) as f64)));
            }
            theta.extend(beta.iter().map(|b| b + 0.2 * rng.sample::<f64, _>(StandardNormal)));
            let u: f64 = rng.random();
            let h = 0.05 + 0.9 * ((i - 1) as f64 + u) / cells;
            theta.push(hurst_to_logit(clamp_h(h)).expect("clamped into range"));
            out.push(theta);
        }
        out
    }

    pub fn run_start(&self, theta0: &[f64]) -> StartOutcome {
        let step: Vec<f64> = theta0
            .iter()
            .enumerate()
            .map(|(k, v)| if k < self.p { 0.2 * v.abs() + 0.05 } else if k < self.p + self.q { 0.2 } else { 0.5 })
            .collect();
        let nm = NelderMeadConfig {
            f_tol: self.cfg.f_tol,
            max_iterations: self.cfg.iterations_per_dim * self.dim(),
        };
        let r = nelder_mead(|t| self.objective(t), theta0, &step, &nm);
        StartOutcome {
            theta: r.x,
            value: r.value,
            iterations: r.iterations,
            converged: r.converged,
        }
    }

    /// Lowest value wins; ties go to the earlier start.
    pub fn select(&self, outcomes: &[StartOutcome]) -> Result<FitResult> {
        let best = outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| o.value.is_finite())
            .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
            .map(|(_, o)| o)
            .ok_or(Error::Convergence {
                what: "Whittle fit (no finite start)",
                iterations: outcomes.iter().map(|o| o.iterations).sum(),
            })?;
        let unit = self.model_at(&best.theta, 1.0)?;
        let prof = self.ws.profile_model(&unit)?;
        let (mut alpha, beta, hurst) = self.shape(&best.theta).expect("finite value implies admissible");
        alpha[0] = -self.mean * alpha[1];
        let model_hat = CarfimaModel::new(alpha, beta, hurst, libm::sqrt(prof.sigma2))?;
        if !best.converged {
            log::warn!("Whittle search stopped after {} iterations without meeting the tolerance", best.iterations);
        }
        Ok(FitResult {
            stationarity_ok: model_hat.is_stationary(),
            invertible: is_invertible(&model_hat),
            model_hat,
            objective_value: prof.value,
            converged: best.converged,
            iterations: best.iterations,
        })
    }
}

/// Multi-start Whittle fit of a CARFIMA(p, H, q) model; starts run in order.
pub fn fit(path: &SamplePath, p: usize, q: usize, cfg: &FitConfig) -> Result<FitResult> {
    let problem = WhittleProblem::new(path, p, q, cfg)?;
    let outcomes: Vec<StartOutcome> = problem.starting_points().iter().map(|t| problem.run_start(t)).collect();
    problem.select(&outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::ExactSimulator;
    use proptest::prelude::{prop_assert, proptest};

    fn white(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Rng::sample(&mut rng, StandardNormal)).collect()
    }

    #[test]
    fn periodogram_basics() {
        let pg = Periodogram::new(&[3.0; 32], 1.0).unwrap();
        assert!(pg.values.iter().all(|v| *v == 0.0));
        assert_eq!(pg.len(), 15);
        let n = 64;
        let j0 = 5;
        let y: Vec<f64> = (0..n).map(|k| libm::cos(2.0 * PI * (j0 * k) as f64 / n as f64)).collect();
        let pg = Periodogram::new(&y, 1.0).unwrap();
        let total: f64 = pg.values.iter().sum();
        assert!((pg.values[j0 - 1] - total).abs() < 1e-12 * total);
        // n/4 from |n/2|^2 / (2 pi n), times 2 pi
        assert!((pg.values[j0 - 1] * 2.0 * PI - n as f64 / 4.0).abs() < 1e-10);
        assert!(Periodogram::new(&[1.0; 15], 1.0).is_err());
    }

    #[test]
    fn parseval_and_flat_spectrum() {
        let y = white(4096, 1);
        let n = y.len() as f64;
        let full = full_periodogram(&y);
        let m = y.iter().sum::<f64>() / n;
        let var = y.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
        let total: f64 = full.iter().sum::<f64>() * 2.0 * PI / n;
        assert!((total - var).abs() < 1e-8 * var);
        let pg = Periodogram::new(&y, 1.0).unwrap();
        let avg = pg.values.iter().sum::<f64>() / pg.len() as f64 * 2.0 * PI;
        // each ordinate is ~ var * Exp(1); mean of ~2047 has SE var / sqrt(m)
        assert!((avg - var).abs() < 4.0 * var / libm::sqrt(pg.len() as f64));
    }

    #[test]
    fn mean_shift_invariance() {
        let y = white(200, 2);
        let shifted: Vec<f64> = y.iter().map(|v| v + 7.5).collect();
        let a = Periodogram::new(&y, 1.0).unwrap();
        let b = Periodogram::new(&shifted, 1.0).unwrap();
        let m = CarfimaModel::car1(-1.0, 0.3, 1.0).unwrap();
        let (oa, ob) = (whittle_objective(&a, &m, 16).unwrap(), whittle_objective(&b, &m, 16).unwrap());
        assert!((oa - ob).abs() < 1e-9 * oa.abs());
    }

    #[test]
    fn workspace_matches_objective_and_profile() {
        let m = CarfimaModel::new(vec![0.0, -2.0, -3.0], vec![0.4], 0.3, 1.3).unwrap();
        let path = ExactSimulator::new(&m, 512, 0.5).unwrap().sample(5, 0);
        let pg = Periodogram::from_path(&path).unwrap();
        let ws = WhittleWorkspace::new(&pg, 16).unwrap();
        let slow = whittle_objective(&pg, &m, 16).unwrap();
        assert!((ws.objective(&m).unwrap() - slow).abs() < 1e-11 * slow.abs());
        let prof = ws.profile_model(&m).unwrap();
        let at_hat = ws.objective(&m.with_sigma(libm::sqrt(prof.sigma2)).unwrap()).unwrap();
        assert!((at_hat - prof.value).abs() < 1e-10 * prof.value.abs());
        // numerical minimizer over log sigma^2 agrees with the closed form
        let g = |x: &[f64]| ws.objective(&m.with_sigma(libm::exp(0.5 * x[0])).unwrap()).unwrap();
        let cfg = NelderMeadConfig {
            f_tol: 1e-15,
            max_iterations: 400,
        };
        let r = nelder_mead(g, &[0.0], &[0.5], &cfg);
        let numeric = libm::exp(r.x[0]);
        assert!((numeric - prof.sigma2).abs() < 1e-6 * prof.sigma2, "{numeric} vs {}", prof.sigma2);
        // profile optimality on a grid around sigma-hat^2
        for i in -5..5 {
            let s2 = prof.sigma2 * (1.0 + 0.05 * i as f64 + 0.025);
            assert!(ws.objective(&m.with_sigma(libm::sqrt(s2)).unwrap()).unwrap() >= prof.value);
        }
    }

    #[test]
    fn objective_finite_antipersistent() {
        let y = white(64, 3);
        let pg = Periodogram::new(&y, 1.0).unwrap();
        for h in [0.05, 0.2, 0.45] {
            let m = CarfimaModel::car1(-1.0, h, 1.0).unwrap();
            assert!(whittle_objective(&pg, &m, 16).unwrap().is_finite());
        }
    }

    #[test]
    fn true_model_beats_perturbed_hurst() {
        let mut wins = 0;
        for (h0, seed) in [(0.7, 10u64), (0.3, 11)] {
            let m = CarfimaModel::car1(-1.0, h0, 1.0).unwrap();
            let sim = ExactSimulator::new(&m, 1024, 1.0).unwrap();
            let mut margins = Vec::new();
            for r in 0..20 {
                let ws = WhittleWorkspace::new(&Periodogram::from_path(&sim.sample(seed, r)).unwrap(), 16).unwrap();
                let at = ws.objective(&m).unwrap();
                let lo = ws.objective(&m.with_hurst(h0 - 0.15).unwrap()).unwrap();
                let hi = ws.objective(&m.with_hurst(h0 + 0.15).unwrap()).unwrap();
                margins.push((lo - at).min(hi - at));
            }
            margins.sort_by(f64::total_cmp);
            assert!(margins[10] > 0.0, "H {h0}: median margin {}", margins[10]);
            wins += 1;
        }
        assert_eq!(wins, 2);
    }

    #[test]
    fn invertibility_flag() {
        let m = CarfimaModel::new(vec![0.0, -2.0, -3.0], vec![0.5], 0.3, 1.0).unwrap();
        assert!(is_invertible(&m));
        let m = CarfimaModel::new(vec![0.0, -2.0, -3.0], vec![-0.5], 0.3, 1.0).unwrap();
        assert!(!is_invertible(&m));
        assert!(is_invertible(&CarfimaModel::car1(-1.0, 0.3, 1.0).unwrap()));
    }

    #[test]
    fn alpha_from_roots_round_trip() {
        let alpha = alpha_from_roots(&[-1.0, -2.0]);
        // (z+1)(z+2) = z^2 + 3z + 2 = z^2 - a2 z - a1
        assert_eq!(alpha, vec![0.0, -2.0, -3.0]);
    }

    #[test]
    fn fit_recovers_car1() {
        let m = CarfimaModel::new(vec![1.5, -1.0], Vec::new(), 0.7, 1.0).unwrap();
        let path = ExactSimulator::new(&m, 2048, 1.0).unwrap().sample(21, 0);
        let cfg = FitConfig::default();
        let r = fit(&path, 1, 0, &cfg).unwrap();
        assert!(r.converged && r.stationarity_ok && r.invertible);
        assert!((r.model_hat.hurst() - 0.7).abs() < 0.1, "{:?}", r.model_hat);
        assert!((r.model_hat.stationary_mean() - 1.5).abs() < 1.0);
        assert_eq!(fit(&path, 1, 0, &cfg).unwrap(), r);
        assert!(fit(&path, 1, 1, &cfg).is_err());
    }

    #[test]
    fn starting_points_are_admissible() {
        let m = CarfimaModel::new(vec![0.0, -2.0, -3.0], vec![0.5], 0.3, 1.0).unwrap();
        let path = ExactSimulator::new(&m, 256, 1.0).unwrap().sample(1, 0);
        let problem = WhittleProblem::new(&path, 2, 1, &FitConfig::default()).unwrap();
        let starts = problem.starting_points();
        assert_eq!(starts.len(), 8);
        for s in &starts {
            assert!(problem.objective(s).is_finite(), "{s:?}");
        }
    }

    proptest! {
        #[test]
        fn logit_round_trip(h in 0.0101f64..0.9899) {
            let back = hurst_from_logit(hurst_to_logit(h).unwrap());
            prop_assert!((back - h).abs() < 1e-12);
        }

        #[test]
        fn logit_monotone(a in -30.0f64..30.0, d in 1e-3f64..5.0) {
            let (x, y) = (hurst_from_logit(a), hurst_from_logit(a + d));
            prop_assert!(x < y || (y - x).abs() < 1e-15);
            prop_assert!(x > HURST_RANGE.0 - 1e-15 && y < HURST_RANGE.1 + 1e-15);
        }
    }
}
