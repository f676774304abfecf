//! Spectral density of the continuous-time process, the aliased density of
//! the sampled process and the cosine-transform route back to the
//! autocovariance.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::acf::Autocovariance;
use crate::error::{Error, Result};
use crate::model::CarfimaModel;
use crate::poly::monic_roots;
use crate::quad::{integrate_partitioned, integrate_power_weight, QuadConfig};

/// Number of terms kept in the large-frequency expansion.
const TAIL_TERMS: usize = 48;

/// `f_Y(w) = sigma^2/(2 pi) Gamma(2H+1) sin(pi H) |w|^{1-2H} |beta(iw)|^2 / |alpha(iw)|^2`,
/// evaluated through the characteristic polynomials at `iw`.
///
/// At `w = 0` the value is 0 for `H < 1/2` and `+inf` for `H > 1/2`.
pub fn spectral_density(model: &CarfimaModel, omega: f64) -> f64 {
    let hurst = model.hurst();
    let w = omega.abs();
    if w == 0.0 {
        if hurst < 0.5 {
            return 0.0;
        }
        if hurst > 0.5 {
            return f64::INFINITY;
        }
    }
    let v = model.char_poly_eval(Complex64::new(0.0, w));
    let s = model.sigma();
    s * s / (2.0 * PI)
        * libm::tgamma(2.0 * hurst + 1.0)
        * libm::sin(PI * hurst)
        * libm::pow(w, 1.0 - 2.0 * hurst)
        * v.beta.norm_sqr()
        / v.alpha.norm_sqr()
}

/// Coefficients of `|c(iw)|^2` as a polynomial in `s = w^2`, for real `c`.
pub fn squared_modulus_poly(c: &[f64]) -> Vec<f64> {
    let deg = c.len() - 1;
    (0..=deg)
        .map(|m| {
            let mut d = 0.0;
            for k in 0..c.len() {
                let l = 2 * m as isize - k as isize;
                if l < 0 || l as usize >= c.len() {
                    continue;
                }
                let sign = if (l as usize + m) % 2 == 0 { 1.0 } else { -1.0 };
                d += sign * c[k] * c[l as usize];
            }
            d
        })
        .collect()
}

fn horner_real(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// The spectral density as `C |w|^{1-2H} B(w^2) / A(w^2)` with real polynomials,
/// plus its convergent expansion in `1/w^2` for large `|w|`.
#[derive(Debug, Clone)]
pub struct SpectralShape {
    constant: f64,
    exponent: f64,
    hurst: f64,
    num: Vec<f64>,
    den: Vec<f64>,
    /// `B(s)/A(s) = s^{q-p} sum_k rho_k s^{-k}`.
    rho: Vec<f64>,
    order_gap: usize,
    /// Expansion converges for `|w| >` this radius.
    radius: f64,
}

impl SpectralShape {
    pub fn new(model: &CarfimaModel) -> Self {
        Self::from_parts(&model.alpha_poly(), &model.beta_poly(), model.hurst(), model.sigma())
    }

    /// From ascending coefficients of `alpha` (monic) and `beta`.
    pub fn from_parts(alpha_poly: &[f64], beta_poly: &[f64], hurst: f64, sigma: f64) -> Self {
        let num = squared_modulus_poly(beta_poly);
        let den = squared_modulus_poly(alpha_poly);
        let p = den.len() - 1;
        let q = num.len() - 1;
        // power series division in x = 1/s of reversed coefficient lists
        let num_rev: Vec<f64> = num.iter().rev().copied().collect();
        let den_rev: Vec<f64> = den.iter().rev().copied().collect();
        let mut rho = Vec::with_capacity(TAIL_TERMS);
        for k in 0..TAIL_TERMS {
            let mut v = if k < num_rev.len() { num_rev[k] } else { 0.0 };
            for i in 1..=k.min(p) {
                v -= den_rev[i] * rho[k - i];
            }
            rho.push(v / den_rev[0]);
        }
        let radius = monic_roots(&alpha_poly[..p]).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let constant = sigma * sigma / (2.0 * PI) * libm::tgamma(2.0 * hurst + 1.0) * libm::sin(PI * hurst);
        Self {
            constant,
            exponent: 1.0 - 2.0 * hurst,
            hurst,
            num,
            den,
            rho,
            order_gap: p - q,
            radius,
        }
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    /// Modulus of the largest AR root.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Tail exponent `r` in `f(w) ~ C_inf |w|^{-r}`.
    pub fn decay_exponent(&self) -> f64 {
        2.0 * self.order_gap as f64 - self.exponent
    }

    pub fn eval(&self, omega: f64) -> f64 {
        let w = omega.abs();
        if w == 0.0 {
            return if self.hurst < 0.5 {
                0.0
            } else if self.hurst > 0.5 {
                f64::INFINITY
            } else {
                self.constant * self.num[0] / self.den[0]
            };
        }
        self.eval_log(libm::log(w), w * w)
    }

    /// `f` from precomputed `ln|w|` and `w^2`.
    #[inline]
    pub fn eval_log(&self, ln_w: f64, s: f64) -> f64 {
        self.constant * libm::exp(self.exponent * ln_w) * horner_real(&self.num, s) / horner_real(&self.den, s)
    }

    /// `f(w) / |w|^{1-2H}`, smooth at the origin.
    pub fn eval_without_power(&self, omega: f64) -> f64 {
        let s = omega * omega;
        self.constant * horner_real(&self.num, s) / horner_real(&self.den, s)
    }

    fn expansion_ok(&self, w: f64) -> bool {
        w >= 2.0 * self.radius
    }

    /// `n`-th derivative of `f` at `w > 0` from the large-frequency expansion.
    pub fn tail_derivative(&self, w: f64, n: usize) -> Option<f64> {
        if !self.expansion_ok(w) {
            return None;
        }
        let ln_w = libm::log(w);
        let x = 1.0 / (w * w);
        let mut total = 0.0;
        let mut xk = 1.0;
        for (k, rho) in self.rho.iter().enumerate() {
            let e = self.exponent - 2.0 * (self.order_gap + k) as f64;
            let mut falling = 1.0;
            for j in 0..n {
                falling *= e - j as f64;
            }
            let term = rho * falling * xk;
            total += term;
            if k > 0 && term.abs() <= 1e-17 * total.abs() {
                break;
            }
            xk *= x;
        }
        let e0 = self.exponent - 2.0 * self.order_gap as f64 - n as f64;
        Some(self.constant * total * libm::exp(e0 * ln_w))
    }

    /// `int_{w0}^inf f(w) dw` for `w0 > 0`.
    pub fn tail_integral(&self, w0: f64) -> Result<f64> {
        if !(w0 > 0.0) {
            return Err(Error::InvalidArgument("tail integral needs w0 > 0".into()));
        }
        if self.expansion_ok(w0) {
            let x = 1.0 / (w0 * w0);
            let mut total = 0.0;
            let mut xk = 1.0;
            for (k, rho) in self.rho.iter().enumerate() {
                let denom = 2.0 * self.hurst + 2.0 * (self.order_gap + k) as f64 - 2.0;
                let term = rho * xk / denom;
                total += term;
                if k > 0 && term.abs() <= 1e-17 * total.abs() {
                    break;
                }
                xk *= x;
            }
            let e = 2.0 - 2.0 * self.hurst - 2.0 * self.order_gap as f64;
            return Ok(self.constant * total * libm::pow(w0, e));
        }
        // w = w0 / t maps the tail onto (0, 1] with integrand ~ t^{r-2}
        let r = self.decay_exponent();
        let g = |t: f64| {
            if t == 0.0 {
                return self.constant * self.rho[0] * w0 * libm::pow(w0, -r);
            }
            let w = w0 / t;
            self.eval(w) * w0 * libm::pow(t, -r)
        };
        integrate_power_weight(g, r - 2.0, 1.0, &QuadConfig::with_tolerances(0.0, 1e-12)).into_result()
    }
}

/// Aliased density value with its tail bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliasedValue {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl AliasedValue {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AliasOptions {
    /// Terms `|k| <= k` are summed explicitly.
    pub k: usize,
    /// Largest admissible bracket width relative to the midpoint.
    pub rel_tol: f64,
}

impl Default for AliasOptions {
    fn default() -> Self {
        Self { k: 64, rel_tol: 1e-3 }
    }
}

/// Aliased density of the sampled process,
/// `f_h(w) = (1/h) sum_k f_Y((w + 2 k pi) / h)`.
#[derive(Debug, Clone)]
pub struct AliasedSpectrum {
    shape: SpectralShape,
}

impl AliasedSpectrum {
    pub fn new(model: &CarfimaModel) -> Result<Self> {
        model.require_stationary()?;
        Ok(Self {
            shape: SpectralShape::new(model),
        })
    }

    pub fn from_shape(shape: SpectralShape) -> Self {
        Self { shape }
    }

    pub fn shape(&self) -> &SpectralShape {
        &self.shape
    }

    /// Explicit sum over `|k| <= K`; the remainder on each side is bracketed by
    /// `int_{K+1}^inf phi + phi(K+1)/2 <= sum_{m > K} phi(m) <= int_{K+1/2}^inf phi`,
    /// valid for the convex decreasing tail of `phi(m) = f((2 pi m +- w)/h)/h`.
    pub fn eval(&self, omega: f64, step_h: f64, opts: &AliasOptions) -> Result<AliasedValue> {
        if !(step_h > 0.0) || opts.k < 1 {
            return Err(Error::InvalidArgument("aliasing needs h > 0 and K >= 1".into()));
        }
        if !(omega.abs() <= PI) {
            return Err(Error::InvalidArgument("aliased frequency must lie in [-pi, pi]".into()));
        }
        let f = |w: f64| self.shape.eval(w);
        let mut sum = f(omega / step_h);
        for k in 1..=opts.k {
            let shift = 2.0 * PI * k as f64;
            sum += f((omega + shift) / step_h) + f((omega - shift) / step_h);
        }
        let mut lower = 0.0;
        let mut upper = 0.0;
        for side in [1.0, -1.0] {
            let w_at = |m: f64| (2.0 * PI * m + side * omega) / step_h;
            let next = w_at(opts.k as f64 + 1.0);
            let (lo, hi) = self.side_bracket(next, f(next), w_at(opts.k as f64 + 0.5), step_h)?;
            lower += lo;
            upper += hi;
        }
        Self::finish(sum / step_h, lower, upper, opts.rel_tol)
    }

    /// Remainder bounds for one side: `(1/h) int phi dm = (1/(2 pi)) int f dw`.
    fn side_bracket(&self, next: f64, f_next: f64, half: f64, step_h: f64) -> Result<(f64, f64)> {
        let int_next = self.shape.tail_integral(next)? / (2.0 * PI);
        let int_half = self.shape.tail_integral(half)? / (2.0 * PI);
        Ok((int_next + 0.5 * f_next / step_h, int_half))
    }

    fn finish(head: f64, lower: f64, upper: f64, rel_tol: f64) -> Result<AliasedValue> {
        let lo = head + lower.min(upper);
        let hi = head + lower.max(upper);
        let value = 0.5 * (lo + hi);
        if hi - lo > rel_tol * value {
            return Err(Error::TailBoundTooLoose { value, width: hi - lo });
        }
        Ok(AliasedValue {
            value,
            lower: lo,
            upper: hi,
        })
    }

    /// [`AliasedSpectrum::eval`] at every frequency of a precomputed grid.
    pub fn eval_grid(&self, grid: &AliasGrid, rel_tol: f64) -> Result<Vec<f64>> {
        let terms = 2 * grid.k + 1;
        let mut out = Vec::with_capacity(grid.omegas.len());
        for j in 0..grid.omegas.len() {
            let mut sum = 0.0;
            for t in j * terms..(j + 1) * terms {
                sum += self.shape.eval_log(grid.ln_w[t], grid.sq[t]);
            }
            let mut lower = 0.0;
            let mut upper = 0.0;
            for side in 0..2 {
                let i = 2 * j + side;
                let f_next = self.shape.eval_log(grid.next_ln[i], grid.next[i] * grid.next[i]);
                let (lo, hi) = self.side_bracket(grid.next[i], f_next, grid.half[i], grid.step_h)?;
                lower += lo;
                upper += hi;
            }
            out.push(Self::finish(sum / grid.step_h, lower, upper, rel_tol)?.value);
        }
        Ok(out)
    }
}

/// Aliased frequencies `(w + 2 k pi)/h`, `|k| <= K`, of a fixed set of
/// `w in (0, pi]`, stored as `ln|w|` and `w^2` for repeated evaluation.
#[derive(Debug, Clone)]
pub struct AliasGrid {
    omegas: Vec<f64>,
    step_h: f64,
    k: usize,
    ln_w: Vec<f64>,
    sq: Vec<f64>,
    next: Vec<f64>,
    next_ln: Vec<f64>,
    half: Vec<f64>,
}

impl AliasGrid {
    pub fn new(omegas: &[f64], step_h: f64, k: usize) -> Result<Self> {
        if !(step_h > 0.0) || k < 1 {
            return Err(Error::InvalidArgument("aliasing needs h > 0 and K >= 1".into()));
        }
        if omegas.iter().any(|w| !(*w > 0.0 && *w <= PI)) {
            return Err(Error::InvalidArgument("grid frequencies must lie in (0, pi]".into()));
        }
        let terms = 2 * k + 1;
        let mut grid = Self {
            omegas: omegas.to_vec(),
            step_h,
            k,
            ln_w: Vec::with_capacity(omegas.len() * terms),
            sq: Vec::with_capacity(omegas.len() * terms),
            next: Vec::with_capacity(2 * omegas.len()),
            next_ln: Vec::with_capacity(2 * omegas.len()),
            half: Vec::with_capacity(2 * omegas.len()),
        };
        for &omega in omegas {
            for m in -(k as i64)..=k as i64 {
                let w = ((omega + 2.0 * PI * m as f64) / step_h).abs();
                grid.ln_w.push(libm::log(w));
                grid.sq.push(w * w);
            }
            for side in [1.0, -1.0] {
                let w_at = |m: f64| (2.0 * PI * m + side * omega) / step_h;
                let next = w_at(k as f64 + 1.0);
                grid.next.push(next);
                grid.next_ln.push(libm::log(next));
                grid.half.push(w_at(k as f64 + 0.5));
            }
        }
        Ok(grid)
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn step_h(&self) -> f64 {
        self.step_h
    }

    pub fn truncation(&self) -> usize {
        self.k
    }
}

pub fn aliased_spectrum(model: &CarfimaModel, omega: f64, step_h: f64, opts: &AliasOptions) -> Result<AliasedValue> {
    AliasedSpectrum::new(model)?.eval(omega, step_h, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Continuous,
    Aliased,
}

impl SpectrumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumKind::Continuous => "continuous",
            SpectrumKind::Aliased => "aliased",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "continuous" => Some(SpectrumKind::Continuous),
            "aliased" => Some(SpectrumKind::Aliased),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: SpectrumKind,
    pub step_h: Option<f64>,
    pub truncation_k: Option<usize>,
}

impl SpectrumTable {
    pub fn continuous(model: &CarfimaModel, omegas: &[f64]) -> Result<Self> {
        model.require_stationary()?;
        Ok(Self {
            omegas: omegas.to_vec(),
            values: omegas.iter().map(|&w| spectral_density(model, w)).collect(),
            kind: SpectrumKind::Continuous,
            step_h: None,
            truncation_k: None,
        })
    }

    pub fn aliased(model: &CarfimaModel, omegas: &[f64], step_h: f64, opts: &AliasOptions) -> Result<Self> {
        let spec = AliasedSpectrum::new(model)?;
        let values = omegas
            .iter()
            .map(|&w| spec.eval(w, step_h, opts).map(|v| v.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            omegas: omegas.to_vec(),
            values,
            kind: SpectrumKind::Aliased,
            step_h: Some(step_h),
            truncation_k: Some(opts.k),
        })
    }
}

/// Autocovariance as the cosine transform `2 int_0^inf f_Y(w) cos(w h) dw`.
#[derive(Debug, Clone)]
pub struct FourierAcf {
    shape: SpectralShape,
    scale: f64,
    quad: QuadConfig,
}

impl FourierAcf {
    pub fn new(model: &CarfimaModel) -> Result<Self> {
        model.require_stationary()?;
        let mut ft = Self {
            shape: SpectralShape::new(model),
            scale: 0.0,
            quad: QuadConfig::with_tolerances(0.0, 1e-11),
        };
        ft.scale = ft.gamma(0.0)?.abs();
        ft.quad = QuadConfig::with_tolerances(1e-14 * ft.scale, 1e-11);
        Ok(ft)
    }

    pub fn gamma(&self, h: f64) -> Result<f64> {
        let h = h.abs();
        let shape = &self.shape;
        let w1 = 1.0;
        // the |w|^{1-2H} factor at the origin is absorbed by substitution
        let head = integrate_power_weight(
            |w: f64| shape.eval_without_power(w) * libm::cos(w * h),
            shape.exponent,
            w1,
            &self.quad,
        )
        .into_result()?;
        let base = (4.0 * shape.radius()).max(4.0);
        let (omega_max, tail) = if h == 0.0 {
            (base, shape.tail_integral(base)?)
        } else {
            // three integrations by parts; remainder bounded by |f''(W)| / h^3
            let mut w = base;
            let target = 1e-13 * self.scale.max(f64::MIN_POSITIVE);
            while shape.tail_derivative(w, 2).unwrap_or(f64::INFINITY).abs() / (h * h * h) > target {
                w *= 2.0;
                if w > 1e9 {
                    return Err(Error::Convergence {
                        what: "Fourier tail cutoff",
                        iterations: 0,
                    });
                }
            }
            let d = |n| shape.tail_derivative(w, n).expect("w beyond expansion radius");
            let (s, c) = (libm::sin(w * h), libm::cos(w * h));
            (w, -d(0) * s / h - d(1) * c / (h * h) + d(2) * s / (h * h * h))
        };
        let mut pts = alloc::vec![w1];
        let mut x = w1;
        while x < omega_max {
            x = (2.0 * x).min(omega_max);
            pts.push(x);
        }
        if h > 0.0 {
            let step = PI / h;
            let mut x = w1 + step;
            while x < omega_max {
                pts.push(x);
                x += step;
            }
            pts.sort_by(f64::total_cmp);
            pts.dedup();
        }
        let body = integrate_partitioned(|w: f64| shape.eval(w) * libm::cos(w * h), &pts, &self.quad)
            .into_result()?;
        Ok(2.0 * (head + body + tail))
    }
}

#[derive(Debug, Clone)]
pub struct FourierReport {
    pub lags: Vec<f64>,
    pub fourier: Vec<f64>,
    pub reference: Vec<f64>,
    pub max_rel_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares the cosine transform of the spectral density with the
/// autocovariance routes of [`Autocovariance::gamma`].
pub fn fourier_consistency_check(model: &CarfimaModel, lags: &[f64], tolerance: f64) -> Result<FourierReport> {
    let ft = FourierAcf::new(model)?;
    let acf = Autocovariance::new(model)?;
    let floor = 1e-12 * acf.gamma(0.0)?.abs();
    let mut fourier = Vec::with_capacity(lags.len());
    let mut reference = Vec::with_capacity(lags.len());
    let mut worst: f64 = 0.0;
    for &h in lags {
        let a = ft.gamma(h)?;
        let b = acf.gamma(h)?;
        worst = worst.max((a - b).abs() / b.abs().max(floor));
        fourier.push(a);
        reference.push(b);
    }
    Ok(FourierReport {
        lags: lags.to_vec(),
        fourier,
        reference,
        max_rel_deviation: worst,
        tolerance,
        passed: worst < tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn car1(hurst: f64) -> CarfimaModel {
        CarfimaModel::car1(-1.0, hurst, 1.0).unwrap()
    }

    #[test]
    fn grid_matches_pointwise() {
        let m = CarfimaModel::new(vec![0.0, -2.0, -3.0], vec![0.5], 0.3, 1.2).unwrap();
        let spec = AliasedSpectrum::new(&m).unwrap();
        let omegas = [0.01, 0.5, 2.0, PI];
        for h in [0.5, 1.0, 3.0] {
            let grid = AliasGrid::new(&omegas, h, 16).unwrap();
            let fast = spec.eval_grid(&grid, 1e-3).unwrap();
            let opts = AliasOptions { k: 16, rel_tol: 1e-3 };
            for (w, v) in omegas.iter().zip(&fast) {
                let slow = spec.eval(*w, h, &opts).unwrap().value;
                assert!((v - slow).abs() <= 1e-14 * slow, "h {h} w {w}");
            }
        }
        assert!(AliasGrid::new(&[0.0], 1.0, 4).is_err());
    }

    #[test]
    fn density_examples() {
        assert_eq!(spectral_density(&car1(0.3), 0.0), 0.0);
        assert!((spectral_density(&car1(0.5), 0.0) - 1.0 / (2.0 * PI)).abs() < 1e-16);
        assert!((spectral_density(&car1(0.5), 0.0) - 0.159155).abs() < 1e-6);
        assert_eq!(spectral_density(&car1(0.7), 0.0), f64::INFINITY);
        let expected = libm::tgamma(2.4) * libm::sin(0.7 * PI) * 0.5 / (2.0 * PI);
        let v = spectral_density(&car1(0.7), 1.0);
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.0799703).abs() < 1e-7);
    }

    #[test]
    fn shape_matches_complex_evaluation() {
        let m = CarfimaModel::new(vec![0.0, -6.0, -11.0, -6.0], vec![0.3, 0.2], 0.35, 1.4).unwrap();
        let shape = SpectralShape::new(&m);
        for w in [1e-3, 0.2, 1.0, 3.7, 20.0, 400.0] {
            let a = shape.eval(w);
            let b = spectral_density(&m, w);
            assert!((a - b).abs() < 1e-13 * b, "w={w}");
            assert_eq!(shape.eval(-w), a);
        }
    }

    #[test]
    fn expansion_matches_direct_evaluation() {
        let m = CarfimaModel::new(vec![0.0, -4.25, -1.0], vec![0.6], 0.2, 1.0).unwrap();
        let shape = SpectralShape::new(&m);
        for w in [5.0, 12.0, 300.0] {
            let d0 = shape.tail_derivative(w, 0).unwrap();
            assert!((d0 - shape.eval(w)).abs() < 1e-13 * d0);
            let eps = 1e-4 * w;
            let fd = (shape.eval(w + eps) - shape.eval(w - eps)) / (2.0 * eps);
            assert!((shape.tail_derivative(w, 1).unwrap() - fd).abs() < 1e-6 * fd.abs());
        }
        assert!(shape.tail_derivative(0.5, 0).is_none());
    }

    #[test]
    fn tail_integral_series_matches_quadrature() {
        let m = CarfimaModel::new(vec![0.0, -2.0, -3.0], vec![0.5], 0.15, 1.0).unwrap();
        let shape = SpectralShape::new(&m);
        let w0 = 10.0;
        let series = shape.tail_integral(w0).unwrap();
        // independent: w = w0 e^s on a long finite range plus the leading power tail
        let cfg = QuadConfig::with_tolerances(0.0, 1e-13);
        let s_max = 150.0;
        let r = integrate_partitioned(
            |s: f64| {
                let w = w0 * libm::exp(s);
                shape.eval(w) * w
            },
            &[0.0, 1.0, 5.0, 20.0, 60.0, s_max],
            &cfg,
        );
        let w_end = w0 * libm::exp(s_max);
        let rest = shape.tail_derivative(w_end, 0).unwrap() * w_end / (shape.decay_exponent() - 1.0);
        let oracle = r.value + rest;
        assert!((series - oracle).abs() < 1e-10 * oracle, "{series} {oracle}");
    }

    #[test]
    fn low_frequency_law() {
        for hurst in [0.2, 0.7] {
            let m = CarfimaModel::new(vec![0.0, -2.0, -3.0], vec![0.5], hurst, 1.3).unwrap();
            let limit = 1.3 * 1.3 * libm::tgamma(2.0 * hurst + 1.0) * libm::sin(PI * hurst) / (2.0 * PI * 4.0);
            let ratio = |w: f64| spectral_density(&m, w) / libm::pow(w, 1.0 - 2.0 * hurst) / limit;
            assert!((ratio(1e-3) - 1.0).abs() < 1e-3);
            assert!((ratio(1e-4) - ratio(1e-3)).abs() < 1e-3);
        }
    }

    #[test]
    fn aliased_symmetric_and_stable_in_k() {
        let m = CarfimaModel::new(vec![0.0, -2.0, -3.0], vec![0.5], 0.3, 1.0).unwrap();
        let spec = AliasedSpectrum::new(&m).unwrap();
        for w in [0.1, 1.0, 2.5, PI] {
            let a = spec.eval(w, 1.0, &AliasOptions::default()).unwrap();
            let b = spec.eval(-w, 1.0, &AliasOptions::default()).unwrap();
            assert_eq!(a, b);
            assert!(a.lower <= a.value && a.value <= a.upper);
            let doubled = spec.eval(w, 1.0, &AliasOptions { k: 128, rel_tol: 1e-3 }).unwrap();
            assert!((doubled.value - a.value).abs() <= a.width());
            assert!(doubled.lower <= a.upper && a.lower <= doubled.upper);
        }
    }

    #[test]
    fn aliased_ou_matches_discrete_acf_sum() {
        let m = car1(0.5);
        let h = 0.8;
        let spec = AliasedSpectrum::new(&m).unwrap();
        let acf = Autocovariance::new(&m).unwrap();
        let gam: Vec<f64> = (0..=2000).map(|j| acf.gamma(j as f64 * h).unwrap()).collect();
        for w in [0.05, 0.7, 2.0, 3.1] {
            let mut s = gam[0];
            for (j, g) in gam.iter().enumerate().skip(1) {
                s += 2.0 * g * libm::cos(w * j as f64);
            }
            let oracle = s / (2.0 * PI);
            let v = spec.eval(w, h, &AliasOptions::default()).unwrap();
            assert!((v.value - oracle).abs() < 1e-9 * oracle + v.width(), "w={w}");
            // closed form: AR(1) spectrum with phi = e^{-h}
            let phi = libm::exp(-h);
            let ar = 0.5 * (1.0 - phi * phi) / (2.0 * PI * (1.0 - 2.0 * phi * libm::cos(w) + phi * phi));
            assert!((v.value - ar).abs() < 1e-12 * ar + v.width());
        }
    }

    #[test]
    fn aliased_integrates_to_variance() {
        for hurst in [0.3, 0.7] {
            let m = CarfimaModel::new(vec![0.0, -2.0, -3.0], vec![0.5], hurst, 1.0).unwrap();
            let spec = AliasedSpectrum::new(&m).unwrap();
            let opts = AliasOptions::default();
            let cfg = QuadConfig::with_tolerances(0.0, 1e-9);
            let f = |w: f64| spec.eval(w, 1.0, &opts).unwrap().value;
            let integral = 2.0 * integrate_power_weight(|w: f64| f(w) / libm::pow(w, 1.0 - 2.0 * hurst), 1.0 - 2.0 * hurst, 1e-2, &cfg).value
                + 2.0 * integrate_partitioned(f, &[1e-2, 0.3, 1.0, 2.0, PI], &cfg).value;
            let g0 = Autocovariance::new(&m).unwrap().gamma(0.0).unwrap();
            let width = spec.eval(PI, 1.0, &opts).unwrap().width() * 2.0 * PI;
            assert!((integral - g0).abs() < 1e-4 * g0 + width, "H={hurst}: {integral} vs {g0}");
        }
    }

    #[test]
    fn tight_tolerance_reports_loose_bracket() {
        let m = car1(0.05);
        let opts = AliasOptions { k: 1, rel_tol: 1e-14 };
        assert!(matches!(aliased_spectrum(&m, 3.0, 1.0, &opts), Err(Error::TailBoundTooLoose { .. })));
    }

    #[test]
    fn fourier_examples() {
        let r = fourier_consistency_check(&car1(0.5), &[0.0, 1.0, 5.0], 1e-6).unwrap();
        assert!(r.passed, "{}", r.max_rel_deviation);
        let r = fourier_consistency_check(&car1(0.7), &[0.0, 1.0, 5.0], 1e-4).unwrap();
        assert!(r.passed, "{}", r.max_rel_deviation);
        let m = CarfimaModel::new(vec![0.0, -2.0, -3.0], vec![0.5], 0.3, 1.0).unwrap();
        let r = fourier_consistency_check(&m, &[0.0, 1.0, 5.0], 1e-4).unwrap();
        assert!(r.passed, "{}", r.max_rel_deviation);
    }

    #[test]
    fn squared_modulus_examples() {
        assert_eq!(squared_modulus_poly(&[1.0, 1.0]), vec![1.0, 1.0]);
        // (iw)^2 + 3 iw + 2: |.|^2 = (2 - w^2)^2 + 9 w^2 = 4 + 5 w^2 + w^4
        assert_eq!(squared_modulus_poly(&[2.0, 3.0, 1.0]), vec![4.0, 5.0, 1.0]);
    }
}
