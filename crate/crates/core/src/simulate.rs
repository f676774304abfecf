//! Regularly sampled stationary paths: exact Gaussian sampling from the
//! Toeplitz covariance, and an exponential discretization of the state
//! equation driven by fGn increments.
//!
//! Every path is drawn from a ChaCha8 generator keyed by `(seed, stream)`,
//! so independent replications use distinct streams of one seed and the
//! result never depends on scheduling.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::acf::Autocovariance;
use crate::error::{Error, Result};
use crate::fgn::{fgn_autocovariance, FgnGenerator};
use crate::linalg::{expm, expm_with_integral, Matrix, Vector};
use crate::model::CarfimaModel;
use crate::toeplitz::ToeplitzSampler;

/// Generator for replication `stream` of `seed`.
pub fn path_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMethod {
    ExactGaussian,
    StateEuler,
}

impl PathMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            PathMethod::ExactGaussian => "exact_gaussian",
            PathMethod::StateEuler => "state_euler",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exact_gaussian" => Some(PathMethod::ExactGaussian),
            "state_euler" => Some(PathMethod::StateEuler),
            _ => None,
        }
    }
}

/// Observations `Y_{ih}`, `i = 0..n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub values: Vec<f64>,
    pub step_h: f64,
    pub model_hash: u64,
    pub seed: u64,
    pub method: PathMethod,
}

impl SamplePath {
    /// Path from observed data; checks length and finiteness.
    pub fn from_values(values: Vec<f64>, step_h: f64) -> Result<Self> {
        let path = Self {
            values,
            step_h,
            model_hash: 0,
            seed: 0,
            method: PathMethod::ExactGaussian,
        };
        path.validate()?;
        Ok(path)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidArgument("sample path is empty".into()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("sample path holds non-finite values".into()));
        }
        if !(self.step_h > 0.0 && self.step_h.is_finite()) {
            return Err(Error::InvalidArgument("step h must be positive".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| i as f64 * self.step_h)
    }
}

fn check_grid(n: usize, step_h: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(step_h > 0.0 && step_h.is_finite()) {
        return Err(Error::InvalidArgument("step h must be positive".into()));
    }
    Ok(())
}

/// Exact sampler for a fixed `(model, n, h)`; the factorization is built once
/// and shared by all draws.
#[derive(Debug, Clone)]
pub struct ExactSimulator {
    sampler: ToeplitzSampler,
    acov: Vec<f64>,
    mean: f64,
    step_h: f64,
    model_hash: u64,
}

impl ExactSimulator {
    pub fn new(model: &CarfimaModel, n: usize, step_h: f64) -> Result<Self> {
        check_grid(n, step_h)?;
        let engine = Autocovariance::new(model)?;
        let acov = (0..n).map(|k| engine.gamma(k as f64 * step_h)).collect::<Result<Vec<_>>>()?;
        let sampler = ToeplitzSampler::new(&acov)?;
        Ok(Self {
            sampler,
            acov,
            mean: model.stationary_mean(),
            step_h,
            model_hash: model.hash(),
        })
    }

    /// `gamma_Y(kh)` for `k = 0..n-1`.
    pub fn autocovariance(&self) -> &[f64] {
        &self.acov
    }

    pub fn jitter(&self) -> f64 {
        self.sampler.jitter()
    }

    pub fn sample(&self, seed: u64, stream: u64) -> SamplePath {
        let mut rng = path_rng(seed, stream);
        let values = self.sampler.sample(&mut rng).into_iter().map(|y| y + self.mean).collect();
        SamplePath {
            values,
            step_h: self.step_h,
            model_hash: self.model_hash,
            seed,
            method: PathMethod::ExactGaussian,
        }
    }
}

pub fn simulate_exact(model: &CarfimaModel, n: usize, step_h: f64, seed: u64) -> Result<SamplePath> {
    Ok(ExactSimulator::new(model, n, step_h)?.sample(seed, 0))
}

/// Step `X <- E X + d + xi g` on the fine grid `dt = h / substeps`, with
/// `E = e^{A dt}`, `d = (int_0^dt e^{Au} du) alpha_0 delta_p`,
/// `g = sigma e^{A dt/2} delta_p` and `xi` the fBm increment over the step.
#[derive(Debug, Clone)]
pub struct StateEulerSimulator {
    propagator: Matrix,
    drift: Vector,
    noise: Vector,
    beta: Vector,
    x0: Vector,
    dt: f64,
    hurst: f64,
    n: usize,
    substeps: usize,
    burn_in: usize,
    step_h: f64,
    model_hash: u64,
    fgn: FgnGenerator,
}

impl StateEulerSimulator {
    pub fn new(model: &CarfimaModel, n: usize, step_h: f64, substeps: usize) -> Result<Self> {
        check_grid(n, step_h)?;
        if substeps == 0 {
            return Err(Error::InvalidArgument("substeps must be at least 1".into()));
        }
        let es = model.require_stationary()?;
        let sys = model.companion();
        let dt = step_h / substeps as f64;
        let (propagator, integral) = expm_with_integral(&sys.a, dt);
        let drift = integral * &sys.delta_p * model.alpha()[0];
        let noise = expm(&(&sys.a * (0.5 * dt))) * &sys.delta_p * model.sigma();
        let horizon = (20.0 / es.spectral_abscissa().abs()).max(100.0);
        let burn_in = libm::ceil(horizon / dt) as usize;
        let fine = burn_in + (n - 1) * substeps;
        Ok(Self {
            propagator,
            drift,
            noise,
            beta: sys.beta_vec.clone(),
            x0: model.stationary_state_mean(),
            dt,
            hurst: model.hurst(),
            n,
            substeps,
            burn_in,
            step_h,
            model_hash: model.hash(),
            fgn: FgnGenerator::new(model.hurst(), fine, dt)?,
        })
    }

    /// Number of discarded fine steps.
    pub fn burn_in(&self) -> usize {
        self.burn_in
    }

    pub fn sample(&self, seed: u64, stream: u64) -> SamplePath {
        let mut rng = path_rng(seed, stream);
        let increments = self.fgn.sample(&mut rng);
        let mut x = self.x0.clone();
        let mut values = Vec::with_capacity(self.n);
        let mut next = Vector::zeros(x.len());
        for (step, xi) in increments.iter().enumerate() {
            next.gemv(1.0, &self.propagator, &x, 0.0);
            next += &self.drift;
            next.axpy(*xi, &self.noise, 1.0);
            core::mem::swap(&mut x, &mut next);
            let done = step + 1;
            if done >= self.burn_in && (done - self.burn_in) % self.substeps == 0 {
                values.push(self.beta.dot(&x));
            }
        }
        if self.burn_in == 0 {
            values.insert(0, self.beta.dot(&self.x0));
            values.truncate(self.n);
        }
        SamplePath {
            values,
            step_h: self.step_h,
            model_hash: self.model_hash,
            seed,
            method: PathMethod::StateEuler,
        }
    }

    /// Stationary autocovariance of the recorded scheme output at coarse lags
    /// `0..max_lag`: with `w_i = beta' E^i g`,
    /// `cov(Y_m, Y_{m+L}) = dt^{2H} sum_{i,j} w_i w_j gamma_F(L + i - j)`.
    pub fn scheme_autocovariance(&self, max_lag: usize) -> Vec<f64> {
        let mut w = Vec::new();
        let mut v = self.noise.clone();
        let mut peak: f64 = 0.0;
        loop {
            let wi = self.beta.dot(&v);
            peak = peak.max(wi.abs());
            w.push(wi);
            v = &self.propagator * v;
            if w.len() > 16 && v.amax() < 1e-17 * peak {
                break;
            }
        }
        let len = w.len();
        // c_d = sum_j w_{j+d} w_j for |d| < len
        let corr: Vec<f64> = (0..len).map(|d| (0..len - d).map(|j| w[j + d] * w[j]).sum()).collect();
        let scale = libm::pow(self.dt, 2.0 * self.hurst);
        (0..=max_lag)
            .map(|k| {
                let lag = (k * self.substeps) as i64;
                let mut total = corr[0] * fgn_autocovariance(self.hurst, lag);
                for (d, c) in corr.iter().enumerate().skip(1) {
                    let d = d as i64;
                    total += c * (fgn_autocovariance(self.hurst, lag + d) + fgn_autocovariance(self.hurst, lag - d));
                }
                scale * total
            })
            .collect()
    }
}

pub fn simulate_state_euler(
    model: &CarfimaModel,
    n: usize,
    step_h: f64,
    substeps: usize,
    seed: u64,
) -> Result<SamplePath> {
    Ok(StateEulerSimulator::new(model, n, step_h, substeps)?.sample(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{acf_known_mean, mean, variance};

    #[test]
    fn exact_is_deterministic_and_stream_separated() {
        let m = CarfimaModel::car1(-1.0, 0.7, 1.0).unwrap();
        let sim = ExactSimulator::new(&m, 64, 0.5).unwrap();
        assert_eq!(sim.sample(9, 0), sim.sample(9, 0));
        assert_ne!(sim.sample(9, 0).values, sim.sample(9, 1).values);
        assert_eq!(simulate_exact(&m, 64, 0.5, 9).unwrap(), sim.sample(9, 0));
        assert_eq!(sim.jitter(), 0.0);
    }

    #[test]
    fn exact_mean_with_intercept() {
        let m = CarfimaModel::new(alloc::vec![2.0, -1.0], Vec::new(), 0.7, 1.0).unwrap();
        let n = 512;
        let sim = ExactSimulator::new(&m, n, 1.0).unwrap();
        let acov = sim.autocovariance();
        // variance of a path mean from the Toeplitz covariance
        let mut var_mean = acov[0] / n as f64;
        for k in 1..n {
            var_mean += 2.0 * (n - k) as f64 * acov[k] / (n * n) as f64;
        }
        let reps = 200;
        let means: Vec<f64> = (0..reps).map(|r| mean(&sim.sample(1, r).values)).collect();
        let grand = mean(&means);
        let se = libm::sqrt(var_mean / reps as f64);
        assert!((grand - 2.0).abs() < 3.0 * se, "{grand} (se {se})");
    }

    #[test]
    fn exact_variance_and_antipersistent_sign() {
        let m = CarfimaModel::car1(-1.0, 0.3, 1.0).unwrap();
        let n = 256;
        let sim = ExactSimulator::new(&m, n, 1.0).unwrap();
        let reps = 1000;
        let max_lag = 60;
        let mut per_path = Vec::new();
        for r in 0..reps {
            per_path.push(acf_known_mean(&sim.sample(0, r).values, 0.0, max_lag));
        }
        let lag0: Vec<f64> = per_path.iter().map(|a| a[0]).collect();
        let se = libm::sqrt(variance(&lag0) / reps as f64);
        assert!((mean(&lag0) - sim.autocovariance()[0]).abs() < 3.0 * se, "{} vs {} se {se}", mean(&lag0), sim.autocovariance()[0]);
        let far: Vec<f64> = (20..=max_lag)
            .map(|k| mean(&per_path.iter().map(|a| a[k]).collect::<Vec<_>>()))
            .collect();
        let negative = far.iter().filter(|v| **v < 0.0).count();
        assert!(negative * 4 >= far.len() * 3, "{negative} of {} negative", far.len());
        assert!(sim.autocovariance()[20..].iter().all(|g| *g < 0.0));
    }

    #[test]
    fn euler_layout() {
        let m = CarfimaModel::car1(-0.5, 0.7, 1.0).unwrap();
        let sim = StateEulerSimulator::new(&m, 10, 1.0, 4).unwrap();
        // horizon max(100, 20 / 0.5) = 100 time units at dt = 1/4
        assert_eq!(sim.burn_in(), 400);
        let p = sim.sample(3, 0);
        assert_eq!(p.len(), 10);
        assert_eq!(p.method, PathMethod::StateEuler);
        assert_eq!(p, simulate_state_euler(&m, 10, 1.0, 4, 3).unwrap());
        assert!(StateEulerSimulator::new(&m, 10, 1.0, 0).is_err());
    }

    #[test]
    fn ou_scheme_is_exact_at_brownian_noise() {
        // H = 1/2, p = 1: the scheme variance equals gamma(0) up to the midpoint
        // weight, e^{-a dt} dt vs (1 - e^{-2 a dt}) / (2a)
        let a: f64 = 1.3;
        let m = CarfimaModel::car1(-a, 0.5, 1.0).unwrap();
        let engine = Autocovariance::new(&m).unwrap();
        for sub in [1, 4, 16] {
            let sim = StateEulerSimulator::new(&m, 8, 0.5, sub).unwrap();
            let dt: f64 = 0.5 / sub as f64;
            let ratio = libm::exp(-a * dt) * dt / ((1.0 - libm::exp(-2.0 * a * dt)) / (2.0 * a));
            let scheme = sim.scheme_autocovariance(5);
            for (k, s) in scheme.iter().enumerate() {
                let target = engine.carma(k as f64 * 0.5).unwrap() * ratio;
                assert!((s - target).abs() < 1e-12, "sub {sub} lag {k}");
            }
        }
    }

    #[test]
    fn ou_scheme_sample_acf() {
        let m = CarfimaModel::car1(-1.0, 0.5, 1.0).unwrap();
        let engine = Autocovariance::new(&m).unwrap();
        let sim = StateEulerSimulator::new(&m, 1024, 0.25, 4).unwrap();
        let reps = 60;
        let lags = [1usize, 2, 5];
        let mut est = [Vec::new(), Vec::new(), Vec::new()];
        for r in 0..reps {
            let a = acf_known_mean(&sim.sample(4, r).values, 0.0, 5);
            for (slot, &k) in est.iter_mut().zip(&lags) {
                slot.push(a[k]);
            }
        }
        for (slot, &k) in est.iter().zip(&lags) {
            let se = libm::sqrt(variance(slot) / reps as f64);
            let target = engine.carma(k as f64 * 0.25).unwrap();
            assert!((mean(slot) - target).abs() < 3.0 * se, "lag {k}: {} vs {target}", mean(slot));
        }
    }

    #[test]
    fn scheme_variance_bias_is_first_order_or_better() {
        let m = CarfimaModel::car1(-1.0, 0.7, 1.0).unwrap();
        let target = Autocovariance::new(&m).unwrap().gamma(0.0).unwrap();
        let bias: Vec<f64> = [2usize, 4, 8, 16, 32]
            .iter()
            .map(|&s| StateEulerSimulator::new(&m, 2, 1.0, s).unwrap().scheme_autocovariance(0)[0] - target)
            .collect();
        for w in bias.windows(2) {
            let order = libm::log2(w[0].abs() / w[1].abs());
            assert!(order >= 0.9, "bias {:?}", bias);
        }
    }
}
