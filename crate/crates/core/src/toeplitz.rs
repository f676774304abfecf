//! Gaussian sampling from a stationary Toeplitz covariance by Durbin-Levinson
//! recursion.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Largest diagonal jitter, relative to the lag-0 value.
pub const MAX_JITTER: f64 = 1e-8;

/// One-step prediction coefficients `phi_{t,1..t}` and innovation variances
/// `v_t` of a stationary sequence; draws satisfy
/// `y_t = sum_j phi_{t,j} y_{t-j} + sqrt(v_t) z_t`.
#[derive(Debug, Clone)]
pub struct ToeplitzSampler {
    n: usize,
    coeffs: Vec<f64>,
    std_dev: Vec<f64>,
    jitter: f64,
}

impl ToeplitzSampler {
    /// Factorizes `[acov(|i-j|)]`, adding diagonal jitter up to
    /// `MAX_JITTER * acov[0]` when the recursion breaks down.
    pub fn new(acov: &[f64]) -> Result<Self> {
        let n = acov.len();
        if n == 0 || !(acov[0] > 0.0) || acov.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("covariance must be finite with positive lag-0 value".into()));
        }
        let mut jitter = 0.0;
        loop {
            if let Some(s) = Self::levinson(acov, jitter) {
                if jitter > 0.0 {
                    log::debug!("Toeplitz factorization needed jitter {jitter:e}");
                }
                return Ok(s);
            }
            jitter = if jitter == 0.0 { 1e-14 * acov[0] } else { jitter * 10.0 };
            if jitter > MAX_JITTER * acov[0] * (1.0 + 1e-12) {
                return Err(Error::FactorizationFailure);
            }
        }
    }

    fn levinson(acov: &[f64], jitter: f64) -> Option<Self> {
        let n = acov.len();
        let g = |k: usize| if k == 0 { acov[0] + jitter } else { acov[k] };
        let mut coeffs = Vec::with_capacity(n * (n - 1) / 2);
        let mut std_dev = Vec::with_capacity(n);
        let mut v = g(0);
        std_dev.push(libm::sqrt(v));
        let mut prev: Vec<f64> = Vec::with_capacity(n);
        let mut cur: Vec<f64> = Vec::with_capacity(n);
        for t in 1..n {
            let mut num = g(t);
            for j in 1..t {
                num -= prev[j - 1] * g(t - j);
            }
            let kappa = num / v;
            cur.clear();
            for j in 1..t {
                cur.push(prev[j - 1] - kappa * prev[t - j - 1]);
            }
            cur.push(kappa);
            v *= 1.0 - kappa * kappa;
            if !(v > 0.0) || !(kappa.abs() < 1.0) {
                return None;
            }
            coeffs.extend_from_slice(&cur);
            std_dev.push(libm::sqrt(v));
            core::mem::swap(&mut prev, &mut cur);
        }
        Some(Self {
            n,
            coeffs,
            std_dev,
            jitter,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Innovation standard deviations `sqrt(v_t)`.
    pub fn innovation_std(&self) -> &[f64] {
        &self.std_dev
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut y = Vec::with_capacity(self.n);
        let mut offset = 0;
        for t in 0..self.n {
            let row = &self.coeffs[offset..offset + t];
            offset += t;
            let mut mean = 0.0;
            for (j, phi) in row.iter().enumerate() {
                mean += phi * y[t - 1 - j];
            }
            let z: f64 = rng.sample(StandardNormal);
            y.push(mean + self.std_dev[t] * z);
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ar1_innovations() {
        let phi: f64 = 0.6;
        let acov: Vec<f64> = (0..6).map(|k| libm::pow(phi, k as f64) / (1.0 - phi * phi)).collect();
        let s = ToeplitzSampler::new(&acov).unwrap();
        assert_eq!(s.jitter(), 0.0);
        assert!((s.innovation_std()[0] - libm::sqrt(acov[0])).abs() < 1e-15);
        for t in 1..6 {
            // AR(1): phi_{t,1} = phi, rest zero, v_t = 1
            let start = t * (t - 1) / 2;
            assert!((s.coeffs[start] - phi).abs() < 1e-14);
            assert!(s.coeffs[start + 1..start + t].iter().all(|c| c.abs() < 1e-14));
            assert!((s.innovation_std()[t] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let acov = [1.0, 0.4, 0.1, 0.0];
        let s = ToeplitzSampler::new(&acov).unwrap();
        let a = s.sample(&mut ChaCha8Rng::seed_from_u64(3));
        let b = s.sample(&mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }

    #[test]
    fn singular_covariance_gets_jitter() {
        // perfectly correlated: rank one
        let s = ToeplitzSampler::new(&[1.0, 1.0, 1.0]).unwrap();
        assert!(s.jitter() > 0.0 && s.jitter() <= MAX_JITTER);
        assert!(matches!(ToeplitzSampler::new(&[1.0, 1.5]), Err(Error::FactorizationFailure)));
    }
}
