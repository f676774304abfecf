//! Complex-argument incomplete gamma functions along radial lines and the
//! kernel `u(H, lambda, h)` of the autocovariance eigen-expansion.
//!
//! Internally everything is expressed through the exponentially scaled pair
//!
//! ```text
//! L(a, z) = e^z gamma(a, z) / Gamma(a)      U(a, z) = e^z Gamma(a, z) / Gamma(a)
//! ```
//!
//! with `L + U = e^z`. Both stay bounded where the kernel needs them, so the
//! `e^{-lambda h}` factor in the kernel never has to be formed.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};

const EPS: f64 = 1e-16;
/// Largest |z| for which the power series is used.
const SERIES_MAX_MODULUS: f64 = 600.0;
/// Series is used while |z| - |Re z| (log of the cancellation factor) stays below this.
const SERIES_MAX_LOSS: f64 = 10.0;
/// The asymptotic expansion is accurate to double precision beyond this modulus.
const ASYMPTOTIC_MIN_MODULUS: f64 = 36.0;
const MAX_TERMS: usize = 20_000;
/// |lambda h| beyond which the kernel requires the asymptotic path.
pub const OVERFLOW_GUARD: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMethod {
    Series,
    ContinuedFraction,
    Asymptotic,
    Quadrature,
}

#[derive(Debug, Clone, Copy)]
pub struct RadialGammaResult {
    pub value: Complex64,
    pub terms_used: usize,
    pub method: GammaMethod,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Principal logarithm with `Im` in `(-pi, pi]`; a negative real axis point
/// carrying a signed zero imaginary part maps to `+i pi`.
pub fn principal_ln(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        if z.re < 0.0 {
            return c(libm::log(-z.re), PI);
        }
        return c(libm::log(z.re), 0.0);
    }
    c(libm::log(z.norm()), libm::atan2(z.im, z.re))
}

/// `base^exponent` on the principal branch.
pub fn complex_power(base: Complex64, exponent: f64) -> Result<Complex64> {
    if base.re == 0.0 && base.im == 0.0 {
        if exponent > 0.0 {
            return Ok(c(0.0, 0.0));
        }
        return Err(Error::Domain("zero base with non-positive exponent"));
    }
    if exponent == 0.0 {
        return Ok(c(1.0, 0.0));
    }
    Ok((principal_ln(base) * exponent).exp())
}

fn cpow(base: Complex64, exponent: f64) -> Complex64 {
    complex_power(base, exponent).unwrap_or(c(0.0, 0.0))
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain("incomplete gamma requires a > 0"))
    }
}

fn cancellation_loss(z: Complex64) -> f64 {
    z.norm() - z.re.abs()
}

fn series_applies(z: Complex64) -> bool {
    let m = z.norm();
    m <= 2.0 || (cancellation_loss(z) <= SERIES_MAX_LOSS && m <= SERIES_MAX_MODULUS)
}

/// Sum `S` such that `P(a, z) = z^a S` (Re z < 0 form) or
/// `P(a, z) = z^a e^{-z} S` (Re z >= 0 form). Returns `(S, terms, negative_form)`.
fn series_sum(a: f64, z: Complex64) -> Result<(Complex64, usize, bool)> {
    let m = z.norm();
    if z.re >= 0.0 {
        // e^z gamma(a,z) / Gamma(a) = z^a sum z^n / Gamma(a+n+1)
        let mut term = c(1.0 / libm::tgamma(a + 1.0), 0.0);
        let mut sum = term;
        for n in 1..MAX_TERMS {
            term = term * z / (a + n as f64);
            sum += term;
            if n as f64 > m && term.norm() <= EPS * sum.norm() {
                return Ok((sum, n + 1, false));
            }
        }
    } else {
        // gamma(a,z) / Gamma(a) = z^a / Gamma(a) sum (-z)^n / (n! (a+n))
        let mz = -z;
        let mut pow = c(1.0, 0.0);
        let mut sum = c(1.0 / a, 0.0);
        for n in 1..MAX_TERMS {
            pow = pow * mz / n as f64;
            let term = pow / (a + n as f64);
            sum += term;
            if n as f64 > m && term.norm() <= EPS * sum.norm() {
                return Ok((sum / libm::tgamma(a), n + 1, true));
            }
        }
    }
    Err(Error::Convergence {
        what: "incomplete gamma series",
        iterations: MAX_TERMS,
    })
}

/// `U(a, z) = z^a K(z) / Gamma(a)` with `K` the Legendre continued fraction
/// of `e^z z^{-a} Gamma(a, z)`, evaluated by the modified Lentz method.
fn upper_continued_fraction(a: f64, z: Complex64) -> Result<(Complex64, usize)> {
    const TINY: f64 = 1e-300;
    let mut b = z + (1.0 - a);
    let mut cc = c(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = d * an + b;
        if d.norm() < TINY {
            d = c(TINY, 0.0);
        }
        cc = b + cc.inv() * an;
        if cc.norm() < TINY {
            cc = c(TINY, 0.0);
        }
        d = d.inv();
        let delta = d * cc;
        h *= delta;
        if (delta - 1.0).norm() < 2.0 * EPS {
            return Ok((cpow(z, a) * h / libm::tgamma(a), i + 1));
        }
    }
    Err(Error::Convergence {
        what: "incomplete gamma continued fraction",
        iterations: MAX_TERMS,
    })
}

/// `U(a, z) ~ z^{a-1}/Gamma(a) sum_k (a-1)...(a-k) / z^k`, truncated at the
/// smallest term. Valid for |arg z| < 3 pi / 2 and large |z|.
fn upper_asymptotic(a: f64, z: Complex64) -> (Complex64, usize) {
    let mut term = c(1.0, 0.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    let mut used = 1;
    for k in 1..MAX_TERMS {
        let next = term * (a - k as f64) / z;
        let size = next.norm();
        if size >= prev || size == 0.0 {
            break;
        }
        term = next;
        sum += term;
        used = k + 1;
        prev = size;
        if size <= EPS * sum.norm() {
            break;
        }
    }
    (cpow(z, a - 1.0) * sum / libm::tgamma(a), used)
}

/// Radial-line integral `int_0^1 exp(shift - z s^{1/a}) ds`, the substituted
/// form of `int_0^z e^{-u} u^{a-1} du`.
fn radial_quadrature(a: f64, z: Complex64, shift: Complex64) -> Result<Complex64> {
    let peak = libm::exp(shift.re.max((shift - z).re));
    let cfg = QuadConfig::with_tolerances(1e-15 * peak, 1e-12);
    let res = integrate(|s: f64| (shift - z * libm::pow(s, 1.0 / a)).exp(), 0.0, 1.0, &cfg);
    res.into_result()
}

/// `P(a, z)` by direct adaptive quadrature along the segment `[0, z]`.
pub fn lower_gamma_p_quadrature(a: f64, z: Complex64) -> Result<Complex64> {
    check_a(a)?;
    if z.norm() == 0.0 {
        return Ok(c(0.0, 0.0));
    }
    let integral = radial_quadrature(a, z, c(0.0, 0.0))?;
    Ok(cpow(z, a) * integral / libm::tgamma(a + 1.0))
}

fn upper_scaled_large(a: f64, z: Complex64) -> Result<(Complex64, usize, GammaMethod)> {
    if z.norm() >= ASYMPTOTIC_MIN_MODULUS {
        let (v, n) = upper_asymptotic(a, z);
        return Ok((v, n, GammaMethod::Asymptotic));
    }
    let (v, n) = upper_continued_fraction(a, z)?;
    Ok((v, n, GammaMethod::ContinuedFraction))
}

/// Normalized lower incomplete gamma `P(a, z)` with the integral taken along
/// the radial line from 0 to `z`.
pub fn lower_gamma_p(a: f64, z: Complex64) -> Result<RadialGammaResult> {
    check_a(a)?;
    if z.norm() == 0.0 {
        return Ok(RadialGammaResult {
            value: c(0.0, 0.0),
            terms_used: 0,
            method: GammaMethod::Series,
        });
    }
    if series_applies(z) {
        let (sum, terms, negative_form) = series_sum(a, z)?;
        let za = cpow(z, a);
        let value = if negative_form { za * sum } else { za * (-z).exp() * sum };
        return Ok(RadialGammaResult {
            value,
            terms_used: terms,
            method: GammaMethod::Series,
        });
    }
    match upper_scaled_large(a, z) {
        Ok((u, terms, method)) => Ok(RadialGammaResult {
            value: c(1.0, 0.0) - (-z).exp() * u,
            terms_used: terms,
            method,
        }),
        Err(_) => Ok(RadialGammaResult {
            value: lower_gamma_p_quadrature(a, z)?,
            terms_used: 0,
            method: GammaMethod::Quadrature,
        }),
    }
}

/// `e^z P(a, z)`.
pub fn scaled_lower(a: f64, z: Complex64) -> Result<Complex64> {
    check_a(a)?;
    if z.norm() == 0.0 {
        return Ok(c(0.0, 0.0));
    }
    if series_applies(z) {
        let (sum, _, negative_form) = series_sum(a, z)?;
        let za = cpow(z, a);
        return Ok(if negative_form { za * z.exp() * sum } else { za * sum });
    }
    match upper_scaled_large(a, z) {
        Ok((u, _, _)) => Ok(z.exp() - u),
        Err(_) => {
            let integral = radial_quadrature(a, z, z)?;
            Ok(cpow(z, a) * integral / libm::tgamma(a + 1.0))
        }
    }
}

/// `e^z Gamma(a, z) / Gamma(a) = e^z (1 - P(a, z))`.
pub fn scaled_upper(a: f64, z: Complex64) -> Result<Complex64> {
    check_a(a)?;
    let m = z.norm();
    if m == 0.0 {
        return Ok(c(1.0, 0.0));
    }
    if m <= 2.0 || (z.re < 0.0 && series_applies(z)) {
        return Ok(z.exp() - scaled_lower(a, z)?);
    }
    match upper_scaled_large(a, z) {
        Ok((u, _, _)) => Ok(u),
        Err(_) => {
            let integral = radial_quadrature(a, z, z)?;
            Ok(z.exp() - cpow(z, a) * integral / libm::tgamma(a + 1.0))
        }
    }
}

/// Upper incomplete gamma `Gamma(a, z) = int_z^inf e^{-u} u^{a-1} du`, defined
/// for all `z` so that `P(a, z) + Gamma(a, z) / Gamma(a) = 1`.
pub fn upper_gamma(a: f64, z: Complex64) -> Result<Complex64> {
    check_a(a)?;
    Ok(scaled_upper(a, z)? * (-z).exp() * libm::tgamma(a))
}

#[derive(Debug, Clone, Copy)]
pub struct UKernelOptions {
    /// Permit the large-|lambda h| asymptotic representation.
    pub allow_asymptotic: bool,
}

impl Default for UKernelOptions {
    fn default() -> Self {
        Self {
            allow_asymptotic: true,
        }
    }
}

/// Kernel
/// `u(H, l, h) = 2(-l)^{1-2H} cosh(l h) + l^{1-2H} e^{l h} P(2H, l h) - (-l)^{1-2H} e^{-l h} P(2H, -l h)`.
///
/// Evaluated in the equivalent form
/// `(-l)^{1-2H} [e^{l h} + U(2H, -l h)] + l^{1-2H} L(2H, l h)`,
/// which never forms `e^{-l h}`.
pub fn u_kernel(hurst: f64, lambda: Complex64, h: f64) -> Result<Complex64> {
    u_kernel_with(hurst, lambda, h, &UKernelOptions::default())
}

pub fn u_kernel_with(hurst: f64, lambda: Complex64, h: f64, opts: &UKernelOptions) -> Result<Complex64> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::Domain("u kernel requires 0 < H < 1"));
    }
    if !(lambda.re < 0.0) {
        return Err(Error::Domain("u kernel requires Re(lambda) < 0"));
    }
    if !(h >= 0.0) {
        return Err(Error::Domain("u kernel requires h >= 0"));
    }
    let e = 1.0 - 2.0 * hurst;
    let a = 2.0 * hurst;
    let neg_pow = complex_power(-lambda, e)?;
    if h == 0.0 {
        return Ok(neg_pow * 2.0);
    }
    let z = lambda * h;
    if !opts.allow_asymptotic && z.norm() > OVERFLOW_GUARD {
        return Err(Error::OverflowGuard { modulus: z.norm() });
    }
    let pos_pow = complex_power(lambda, e)?;
    let upper = scaled_upper(a, -z)?;
    let lower = scaled_lower(a, z)?;
    Ok(neg_pow * (z.exp() + upper) + pos_pow * lower)
}

/// Direct transcription of the kernel through `P`; overflows for large
/// `|lambda h|` and is kept as a cross-check of the rearranged form.
pub fn u_kernel_direct(hurst: f64, lambda: Complex64, h: f64) -> Result<Complex64> {
    let e = 1.0 - 2.0 * hurst;
    let a = 2.0 * hurst;
    let z = lambda * h;
    let neg_pow = complex_power(-lambda, e)?;
    let pos_pow = complex_power(lambda, e)?;
    let p_pos = lower_gamma_p(a, z)?.value;
    let p_neg = lower_gamma_p(a, -z)?.value;
    Ok(neg_pow * z.cosh() * 2.0 + pos_pow * z.exp() * p_pos - neg_pow * (-z).exp() * p_neg)
}

/// Large-h form of the kernel, `-4H(2H-1) / (Gamma(2H+1) lambda) h^{2H-2}`.
pub fn u_kernel_tail(hurst: f64, lambda: Complex64, h: f64) -> Complex64 {
    let k = -4.0 * hurst * (2.0 * hurst - 1.0) / libm::tgamma(2.0 * hurst + 1.0);
    lambda.inv() * k * libm::pow(h, 2.0 * hurst - 2.0)
}
