//! Model parameters, companion form, characteristic polynomials and eigenstructure.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{expm, Matrix, Vector};
use crate::poly::{horner, horner_with_derivative, monic_roots};

/// CARFIMA(p, H, q) parameters.
///
/// `alpha = [a0, a1, .., ap]`, `beta = [b1, .., bq]`. The AR polynomial is
/// `alpha(z) = z^p - a_p z^{p-1} - .. - a_1`, the MA polynomial
/// `beta(z) = 1 + b_1 z + .. + b_q z^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CarfimaModel {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    hurst: f64,
    sigma: f64,
}

impl CarfimaModel {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>, hurst: f64, sigma: f64) -> Result<Self> {
        let model = Self {
            alpha,
            beta,
            hurst,
            sigma,
        };
        model.validate()?;
        Ok(model)
    }

    /// CAR(1) with `alpha_0 = 0`.
    pub fn car1(alpha1: f64, hurst: f64, sigma: f64) -> Result<Self> {
        Self::new(vec![0.0, alpha1], Vec::new(), hurst, sigma)
    }

    fn validate(&self) -> Result<()> {
        let invalid = |msg: alloc::string::String| Err(Error::InvalidModel(msg));
        if self.alpha.len() < 2 {
            return invalid(format!("alpha must hold alpha_0..alpha_p with p >= 1, got {} values", self.alpha.len()));
        }
        let p = self.p();
        if self.beta.len() >= p {
            return invalid(format!("q = {} must be below p = {p}", self.beta.len()));
        }
        if self.alpha.iter().chain(&self.beta).any(|v| !v.is_finite()) {
            return invalid("coefficients must be finite".into());
        }
        if self.alpha[1] == 0.0 {
            return invalid("alpha_1 must be nonzero".into());
        }
        if let Some(&last) = self.beta.last() {
            if last == 0.0 {
                return invalid("beta_q must be nonzero".into());
            }
        }
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return invalid(format!("H = {} outside (0, 1)", self.hurst));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return invalid(format!("sigma = {} must be positive", self.sigma));
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn q(&self) -> usize {
        self.beta.len()
    }

    /// `[alpha_0, .., alpha_p]`.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `[beta_1, .., beta_q]`.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn with_hurst(&self, hurst: f64) -> Result<Self> {
        Self::new(self.alpha.clone(), self.beta.clone(), hurst, self.sigma)
    }

    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::new(self.alpha.clone(), self.beta.clone(), self.hurst, sigma)
    }

    pub fn with_alpha0(&self, alpha0: f64) -> Result<Self> {
        let mut alpha = self.alpha.clone();
        alpha[0] = alpha0;
        Self::new(alpha, self.beta.clone(), self.hurst, self.sigma)
    }

    /// Ascending coefficients of `alpha(z)`.
    pub fn alpha_poly(&self) -> Vec<f64> {
        let p = self.p();
        let mut c: Vec<f64> = self.alpha[1..].iter().map(|a| -a).collect();
        c.push(1.0);
        debug_assert_eq!(c.len(), p + 1);
        c
    }

    /// Ascending coefficients of `beta(z)`.
    pub fn beta_poly(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(self.q() + 1);
        c.push(1.0);
        c.extend_from_slice(&self.beta);
        c
    }

    pub fn companion(&self) -> CompanionSystem {
        let p = self.p();
        let mut a = Matrix::zeros(p, p);
        for i in 0..p - 1 {
            a[(i, i + 1)] = 1.0;
        }
        for j in 0..p {
            a[(p - 1, j)] = self.alpha[j + 1];
        }
        let mut delta_p = Vector::zeros(p);
        delta_p[p - 1] = 1.0;
        let mut delta_1 = Vector::zeros(p);
        delta_1[0] = 1.0;
        let mut beta_vec = Vector::zeros(p);
        beta_vec[0] = 1.0;
        for (j, b) in self.beta.iter().enumerate() {
            beta_vec[j + 1] = *b;
        }
        CompanionSystem {
            a,
            delta_p,
            delta_1,
            beta_vec,
        }
    }

    pub fn char_poly_eval(&self, z: Complex64) -> CharPolyValues {
        let (alpha, alpha_deriv) = horner_with_derivative(&self.alpha_poly(), z);
        CharPolyValues {
            alpha,
            alpha_deriv,
            beta: horner(&self.beta_poly(), z),
        }
    }

    pub fn eigen_structure(&self) -> EigenStructure {
        let alpha_poly = self.alpha_poly();
        let beta_poly = self.beta_poly();
        let lambdas = monic_roots(&alpha_poly[..self.p()]);
        let residues = lambdas
            .iter()
            .map(|&l| horner(&beta_poly, l) / horner_with_derivative(&alpha_poly, l).1)
            .collect();
        let max_modulus = lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max);
        let mut min_separation = f64::INFINITY;
        for i in 0..lambdas.len() {
            for j in i + 1..lambdas.len() {
                min_separation = min_separation.min((lambdas[i] - lambdas[j]).norm());
            }
        }
        let threshold = DISTINCT_RELATIVE_THRESHOLD * (1.0 + max_modulus);
        EigenStructure {
            lambdas,
            residues,
            distinct: min_separation > threshold,
            min_separation,
        }
    }

    /// Checks stationarity, returning the eigenstructure on success.
    pub fn require_stationary(&self) -> Result<EigenStructure> {
        let es = self.eigen_structure();
        if es.is_stationary() {
            Ok(es)
        } else {
            Err(Error::NonStationary {
                abscissa: es.spectral_abscissa(),
            })
        }
    }

    pub fn is_stationary(&self) -> bool {
        self.eigen_structure().is_stationary()
    }

    /// `mu_Y = -alpha_0 / alpha_1`.
    pub fn stationary_mean(&self) -> f64 {
        -self.alpha[0] / self.alpha[1]
    }

    /// `-(alpha_0/alpha_1) delta_1`, the stationary mean of the state vector.
    pub fn stationary_state_mean(&self) -> Vector {
        let mut m = Vector::zeros(self.p());
        m[0] = self.stationary_mean();
        m
    }

    /// `mu_{X,t} = e^{At} mu_{X,0} + (alpha_0/alpha_1)(e^{At} - I) delta_1`.
    pub fn mean_trajectory(&self, mu_x0: &[f64], t: f64) -> Result<Vec<f64>> {
        let p = self.p();
        if mu_x0.len() != p {
            return Err(Error::InvalidArgument(format!("mu_x0 has length {}, expected {p}", mu_x0.len())));
        }
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument("t must be non-negative".into()));
        }
        let sys = self.companion();
        let e = expm(&(&sys.a * t));
        let mu0 = Vector::from_column_slice(mu_x0);
        let shift = (&e - Matrix::identity(p, p)) * &sys.delta_1 * (self.alpha[0] / self.alpha[1]);
        Ok((e * mu0 + shift).iter().copied().collect())
    }

    /// Stable identifier of the parameter values (FNV-1a over the bit patterns).
    pub fn hash(&self) -> u64 {
        const OFFSET: u64 = 0xcbf29ce484222325;
        const PRIME: u64 = 0x100000001b3;
        let mut h = OFFSET;
        let mut feed = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        feed(self.p() as u64);
        feed(self.q() as u64);
        for v in self.alpha.iter().chain(&self.beta) {
            feed(v.to_bits());
        }
        feed(self.hurst.to_bits());
        feed(self.sigma.to_bits());
        h
    }

    pub fn hash_hex(&self) -> alloc::string::String {
        format!("{:016x}", self.hash())
    }
}

/// Relative eigenvalue separation below which the closed forms refuse.
pub const DISTINCT_RELATIVE_THRESHOLD: f64 = 1e-6;
/// Roundoff margin applied to the spectral abscissa in the stationarity test.
pub const STATIONARITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CompanionSystem {
    pub a: Matrix,
    pub delta_p: Vector,
    pub delta_1: Vector,
    pub beta_vec: Vector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharPolyValues {
    pub alpha: Complex64,
    pub alpha_deriv: Complex64,
    pub beta: Complex64,
}

#[derive(Debug, Clone)]
pub struct EigenStructure {
    pub lambdas: Vec<Complex64>,
    /// `beta(lambda_i) / alpha'(lambda_i)`.
    pub residues: Vec<Complex64>,
    pub distinct: bool,
    pub min_separation: f64,
}

impl EigenStructure {
    /// Largest real part of the eigenvalues.
    pub fn spectral_abscissa(&self) -> f64 {
        self.lambdas.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_modulus(&self) -> f64 {
        self.lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max)
    }

    pub fn is_stationary(&self) -> bool {
        self.spectral_abscissa() < -STATIONARITY_MARGIN * (1.0 + self.max_modulus())
    }

    pub fn require_distinct(&self) -> Result<()> {
        if self.distinct {
            Ok(())
        } else {
            Err(Error::RepeatedEigenvalues {
                separation: self.min_separation,
            })
        }
    }
}
