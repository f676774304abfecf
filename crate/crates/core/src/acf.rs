//! Autocovariance of the stationary process: closed eigen-expansion,
//! quadrature of the integral representation, the H = 1/2 reduction and the
//! power-law tail.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{expm, norm_max, solve_lyapunov, Matrix, Vector};
use crate::model::{CarfimaModel, CompanionSystem, EigenStructure};
use crate::quad::{integrate_partitioned, integrate_power_weight, QuadConfig};
use crate::specfun::u_kernel;

/// Hurst values this close to 1/2 are routed to the CARMA formula.
pub const CARMA_DISPATCH_BAND: f64 = 1e-6;
const REALNESS_TOL: f64 = 1e-8;
const CARMA_ROUTE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcfMethod {
    ClosedForm,
    Quadrature,
    CarmaExact,
    Fourier,
    Empirical,
}

impl AcfMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            AcfMethod::ClosedForm => "closed_form",
            AcfMethod::Quadrature => "quadrature",
            AcfMethod::CarmaExact => "carma_exact",
            AcfMethod::Fourier => "fourier",
            AcfMethod::Empirical => "empirical",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "closed_form" => AcfMethod::ClosedForm,
            "quadrature" => AcfMethod::Quadrature,
            "carma_exact" => AcfMethod::CarmaExact,
            "fourier" => AcfMethod::Fourier,
            "empirical" => AcfMethod::Empirical,
            _ => return None,
        })
    }
}

/// Stationary state covariance at H = 1/2, `V* = sigma^2 int_0^inf e^{Au} d d' e^{A'u} du`.
#[derive(Debug, Clone)]
pub struct StationaryStateCov {
    pub vstar: Matrix,
}

impl StationaryStateCov {
    /// `||A V* + V* A' + sigma^2 delta_p delta_p'||_inf`.
    pub fn lyapunov_residual(&self, sys: &CompanionSystem, sigma: f64) -> f64 {
        let q = &sys.delta_p * sys.delta_p.transpose() * (sigma * sigma);
        norm_max(&(&sys.a * &self.vstar + &self.vstar * sys.a.transpose() + q))
    }
}

pub fn vstar(model: &CarfimaModel, sys: &CompanionSystem) -> Result<StationaryStateCov> {
    model.require_stationary()?;
    let s2 = model.sigma() * model.sigma();
    let q = &sys.delta_p * sys.delta_p.transpose() * s2;
    Ok(StationaryStateCov {
        vstar: solve_lyapunov(&sys.a, &q)?,
    })
}

/// Autocovariance engine for one stationary model; caches the companion
/// system, eigenstructure, `V*` and the eigen-expansion weights.
#[derive(Debug, Clone)]
pub struct Autocovariance {
    model: CarfimaModel,
    sys: CompanionSystem,
    es: EigenStructure,
    state_cov: StationaryStateCov,
    /// `beta(l) beta(-l) / (alpha'(l) alpha(-l))` per eigenvalue.
    weights: Vec<Complex64>,
    /// `V* beta` and `beta' A`, the two projections used by the integral form.
    v_beta: Vector,
    beta_a: Vector,
    quad: QuadConfig,
}

impl Autocovariance {
    pub fn new(model: &CarfimaModel) -> Result<Self> {
        let es = model.require_stationary()?;
        let sys = model.companion();
        let state_cov = vstar(model, &sys)?;
        let weights = es
            .lambdas
            .iter()
            .map(|&l| {
                let pos = model.char_poly_eval(l);
                let neg = model.char_poly_eval(-l);
                pos.beta * neg.beta / (pos.alpha_deriv * neg.alpha)
            })
            .collect();
        let v_beta = &state_cov.vstar * &sys.beta_vec;
        let beta_a = sys.a.transpose() * &sys.beta_vec;
        Ok(Self {
            model: model.clone(),
            sys,
            es,
            state_cov,
            weights,
            v_beta,
            beta_a,
            quad: QuadConfig::with_tolerances(0.0, 1e-12),
        })
    }

    pub fn model(&self) -> &CarfimaModel {
        &self.model
    }

    pub fn companion(&self) -> &CompanionSystem {
        &self.sys
    }

    pub fn eigen(&self) -> &EigenStructure {
        &self.es
    }

    pub fn state_cov(&self) -> &StationaryStateCov {
        &self.state_cov
    }

    /// Route used by [`Autocovariance::gamma`].
    pub fn preferred_method(&self) -> AcfMethod {
        let hurst = self.model.hurst();
        if (hurst - 0.5).abs() < CARMA_DISPATCH_BAND {
            AcfMethod::CarmaExact
        } else if self.es.distinct {
            AcfMethod::ClosedForm
        } else {
            AcfMethod::Quadrature
        }
    }

    /// `gamma_Y(h)` by the preferred route; `h` may be negative.
    pub fn gamma(&self, h: f64) -> Result<f64> {
        let h = h.abs();
        match self.preferred_method() {
            AcfMethod::CarmaExact => {
                let hurst = self.model.hurst();
                if hurst != 0.5 {
                    log::warn!("H = {hurst} is within {CARMA_DISPATCH_BAND} of 1/2; using the H = 1/2 formula");
                }
                self.carma_unchecked(h)
            }
            AcfMethod::ClosedForm => self.closed_form(h),
            _ => self.integral_form(h),
        }
    }

    pub fn gamma_many(&self, lags: &[f64]) -> Result<Vec<f64>> {
        lags.iter().map(|&h| self.gamma(h)).collect()
    }

    fn check_lag(h: f64) -> Result<()> {
        if h >= 0.0 && h.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(alloc::format!("lag must be finite and non-negative, got {h}")))
        }
    }

    /// Eigen-expansion `sigma^2/2 Gamma(2H+1) sum_i w_i u(H, l_i, h)`.
    pub fn closed_form(&self, h: f64) -> Result<f64> {
        Self::check_lag(h)?;
        self.es.require_distinct()?;
        let hurst = self.model.hurst();
        let mut total = Complex64::new(0.0, 0.0);
        for (l, w) in self.es.lambdas.iter().zip(&self.weights) {
            total += w * u_kernel(hurst, *l, h)?;
        }
        let s2 = self.model.sigma() * self.model.sigma();
        let value = total * (0.5 * s2 * libm::tgamma(2.0 * hurst + 1.0));
        if value.im.abs() > REALNESS_TOL * (value.re.abs() + s2) {
            return Err(Error::ImaginaryResidue {
                real: value.re,
                imag: value.im,
            });
        }
        Ok(value.re)
    }

    /// Integral representation evaluated by adaptive quadrature through the
    /// scalar `g(t) = beta' A e^{At} V* beta`:
    ///
    /// `gamma(h) = H [int_0^h g(h-u) u^{2H-1} du - int_0^inf g(s)(s+h)^{2H-1} ds - int_0^inf g(h+u) u^{2H-1} du]`.
    pub fn integral_form(&self, h: f64) -> Result<f64> {
        Self::check_lag(h)?;
        let hurst = self.model.hurst();
        let e = 2.0 * hurst - 1.0;
        let g = |t: f64| self.beta_a.dot(&(expm(&(&self.sys.a * t)) * &self.v_beta));
        let (cutoff, points) = self.tail_panels();
        let weighted = |f: &dyn Fn(f64) -> f64, b: f64| -> Result<f64> {
            if b == 0.0 {
                return Ok(0.0);
            }
            if e < 0.0 {
                integrate_power_weight(f, e, b, &self.quad).into_result()
            } else {
                let pts = geometric_points(b);
                integrate_partitioned(|u: f64| f(u) * libm::pow(u, e), &pts, &self.quad).into_result()
            }
        };
        // head of the semi-infinite integrals carries the u^{2H-1} endpoint
        let head = points[1];
        let tail_of = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
            integrate_partitioned(f, &points[1..], &self.quad).into_result()
        };
        let t1 = weighted(&|u| g(h - u), h)?;
        let t3 = weighted(&|u| g(h + u), head)? + tail_of(&|u| g(h + u) * libm::pow(u, e))?;
        let t2 = if h == 0.0 {
            t3
        } else {
            let mut pts: Vec<f64> = points.iter().copied().filter(|&x| x < cutoff).collect();
            let mut x = h / 64.0;
            while x < cutoff.min(h * 64.0) {
                pts.push(x);
                x *= 2.0;
            }
            pts.push(cutoff);
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            integrate_partitioned(|s: f64| g(s) * libm::pow(s + h, e), &pts, &self.quad).into_result()?
        };
        Ok(hurst * (t1 - t2 - t3))
    }

    /// Truncation point of the semi-infinite integrals and a starting
    /// partition of `[0, cutoff]`.
    fn tail_panels(&self) -> (f64, Vec<f64>) {
        let rate = -self.es.spectral_abscissa();
        // |g(u)| <= C e^{-rate u / 2}; e^{-40} leaves a relative tail below 1e-17
        let cutoff = 80.0 / rate;
        let scale = 1.0 / self.es.max_modulus().max(1e-3);
        let freq = self.es.lambdas.iter().map(|l| l.im.abs()).fold(0.0, f64::max);
        let mut pts = alloc::vec![0.0];
        let mut x = 0.05 * scale.min(1.0);
        while x < cutoff.min(4.0 * scale) {
            pts.push(x);
            x *= 2.0;
        }
        let step = if freq > 0.0 {
            (core::f64::consts::PI / freq).min(2.0 * scale)
        } else {
            2.0 * scale
        };
        let mut x = *pts.last().unwrap_or(&0.0);
        while x + step < cutoff {
            x += step;
            pts.push(x);
        }
        pts.push(cutoff);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        if pts.len() < 3 {
            pts.insert(1, 0.5 * cutoff);
        }
        (cutoff, pts)
    }

    /// `beta' e^{Ah} V* beta`, cross-checked against the eigen-sum
    /// `sigma^2 sum_i w_i e^{l_i h}` when the eigenvalues are distinct.
    pub fn carma(&self, h: f64) -> Result<f64> {
        if self.model.hurst() != 0.5 {
            return Err(Error::InvalidArgument("the CARMA formula requires H = 1/2".into()));
        }
        self.carma_unchecked(h)
    }

    fn carma_unchecked(&self, h: f64) -> Result<f64> {
        Self::check_lag(h)?;
        let matrix_form = self.carma_matrix_form(h);
        if let Some(eigen_form) = self.carma_eigen_form(h) {
            let scale = self.carma_matrix_form(0.0).abs();
            if (matrix_form - eigen_form).abs() > CARMA_ROUTE_TOL * matrix_form.abs() + 1e-14 * scale {
                return Err(Error::RouteMismatch {
                    what: "CARMA matrix and eigen forms",
                    left: matrix_form,
                    right: eigen_form,
                });
            }
        }
        Ok(matrix_form)
    }

    pub fn carma_matrix_form(&self, h: f64) -> f64 {
        self.sys.beta_vec.dot(&(expm(&(&self.sys.a * h)) * &self.v_beta))
    }

    /// `None` when the eigenvalues are not distinct.
    pub fn carma_eigen_form(&self, h: f64) -> Option<f64> {
        if !self.es.distinct {
            return None;
        }
        let s2 = self.model.sigma() * self.model.sigma();
        let total: Complex64 = self
            .es
            .lambdas
            .iter()
            .zip(&self.weights)
            .map(|(l, w)| w * (l * h).exp())
            .sum();
        Some(s2 * total.re)
    }

    /// `sigma^2 H(2H-1) beta(0)^2 / alpha(0)^2 h^{2H-2}`.
    pub fn tail_asymptote(&self, h: f64) -> Result<f64> {
        tail_asymptote(&self.model, h)
    }

    /// `cov(Y_0, B^H_t) = H sigma beta' int_0^inf e^{Au} delta_p {(u+t)^{2H-1} - u^{2H-1}} du`,
    /// available for `alpha_0 = 0`.
    pub fn cov_y0_fbm(&self, t: f64) -> Result<f64> {
        Self::check_lag(t)?;
        if self.model.alpha()[0] != 0.0 {
            return Err(Error::InvalidArgument("cov(Y0, B_t) is available for alpha_0 = 0 only".into()));
        }
        let hurst = self.model.hurst();
        if t == 0.0 || hurst == 0.5 {
            return Ok(0.0);
        }
        let e = 2.0 * hurst - 1.0;
        let k = |u: f64| self.sys.beta_vec.dot(&(expm(&(&self.sys.a * u)) * &self.sys.delta_p));
        let (_, points) = self.tail_panels();
        let head = points[1];
        let shifted = integrate_partitioned(|u: f64| k(u) * libm::pow(u + t, e), &points, &self.quad).into_result()?;
        let near = if e < 0.0 {
            integrate_power_weight(k, e, head, &self.quad).into_result()?
        } else {
            integrate_partitioned(|u: f64| k(u) * libm::pow(u, e), &geometric_points(head), &self.quad)
                .into_result()?
        };
        let far = integrate_partitioned(|u: f64| k(u) * libm::pow(u, e), &points[1..], &self.quad).into_result()?;
        Ok(hurst * self.model.sigma() * (shifted - near - far))
    }
}

/// `sigma^2 H(2H-1) h^{2H-2} / alpha_1^2`, the large-lag form of the autocovariance.
pub fn tail_asymptote(model: &CarfimaModel, h: f64) -> Result<f64> {
    let hurst = model.hurst();
    if hurst == 0.5 {
        return Err(Error::InvalidArgument("tail asymptote requires H != 1/2".into()));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("tail asymptote requires h > 0".into()));
    }
    let s = model.sigma();
    let zero = model.char_poly_eval(Complex64::new(0.0, 0.0));
    let ratio = (zero.beta / zero.alpha).re;
    Ok(s * s * hurst * (2.0 * hurst - 1.0) * ratio * ratio * libm::pow(h, 2.0 * hurst - 2.0))
}

fn geometric_points(b: f64) -> Vec<f64> {
    let mut pts = alloc::vec![0.0];
    let mut x = b * libm::pow(2.0, -20.0);
    while x < b {
        pts.push(x);
        x *= 4.0;
    }
    pts.push(b);
    pts
}

/// Autocovariance values on a lag grid together with the route that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct AcfTable {
    pub lags: Vec<f64>,
    pub values: Vec<f64>,
    pub method: AcfMethod,
    pub model_hash: u64,
}

impl AcfTable {
    /// Evaluates the requested route, or the preferred one when `method` is `None`.
    /// `Fourier` uses the cosine transform of the spectral density.
    pub fn compute(model: &CarfimaModel, lags: &[f64], method: Option<AcfMethod>) -> Result<Self> {
        let acf = Autocovariance::new(model)?;
        let method = method.unwrap_or_else(|| acf.preferred_method());
        let values = match method {
            AcfMethod::ClosedForm => lags.iter().map(|&h| acf.closed_form(h.abs())).collect::<Result<Vec<_>>>()?,
            AcfMethod::Quadrature => lags.iter().map(|&h| acf.integral_form(h.abs())).collect::<Result<Vec<_>>>()?,
            AcfMethod::CarmaExact => lags.iter().map(|&h| acf.carma(h.abs())).collect::<Result<Vec<_>>>()?,
            AcfMethod::Fourier => {
                let ft = crate::spectrum::FourierAcf::new(model)?;
                lags.iter().map(|&h| ft.gamma(h.abs())).collect::<Result<Vec<_>>>()?
            }
            AcfMethod::Empirical => {
                return Err(Error::InvalidArgument("empirical autocovariances come from a sample path".into()))
            }
        };
        Ok(Self {
            lags: lags.to_vec(),
            values,
            method,
            model_hash: model.hash(),
        })
    }
}
