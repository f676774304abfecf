//! Fractional Gaussian noise, fractional Brownian motion covariances and the
//! covariance of Wiener-type integrals of step functions.
//!
//! Sequences are drawn by circulant embedding on a power-of-two circulant,
//! falling back to a Toeplitz factorization if the embedding is not PSD.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fft::{fft, fft_real};
use crate::toeplitz::ToeplitzSampler;

/// Negative circulant eigenvalues beyond this fraction of the largest
/// one reject the embedding.
pub const EMBEDDING_TOL: f64 = 1e-10;

fn abs_pow(x: f64, e: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        0.0
    } else {
        libm::pow(a, e)
    }
}

/// `gamma_F(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2`.
pub fn fgn_autocovariance(hurst: f64, k: i64) -> f64 {
    let e = 2.0 * hurst;
    let k = k as f64;
    0.5 * (abs_pow(k + 1.0, e) - 2.0 * abs_pow(k, e) + abs_pow(k - 1.0, e))
}

/// `E[B_s B_t] = (|t|^{2H} + |s|^{2H} - |t-s|^{2H}) / 2` for `s, t >= 0`.
pub fn fbm_cov(hurst: f64, s: f64, t: f64) -> Result<f64> {
    if !(s >= 0.0 && t >= 0.0) {
        return Err(Error::InvalidArgument("fbm_cov requires s, t >= 0".into()));
    }
    let e = 2.0 * hurst;
    Ok(0.5 * (abs_pow(t, e) + abs_pow(s, e) - abs_pow(t - s, e)))
}

/// How a fractional Gaussian noise sequence was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FgnMethod {
    CirculantEmbedding,
    Toeplitz,
}

/// Circulant-embedding generator for fGn sequences of a fixed length,
/// reusable across draws.
#[derive(Debug, Clone)]
pub struct FgnGenerator {
    n: usize,
    scale: f64,
    sqrt_eig: Vec<f64>,
    fallback: Option<ToeplitzSampler>,
}

impl FgnGenerator {
    /// Increments of fBm over steps `dt`: covariance `dt^{2H} gamma_F(i - j)`.
    pub fn new(hurst: f64, n: usize, dt: f64) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::InvalidArgument("H must lie in (0, 1)".into()));
        }
        if n == 0 || !(dt > 0.0) {
            return Err(Error::InvalidArgument("fGn needs n >= 1 and dt > 0".into()));
        }
        let scale = libm::pow(dt, hurst);
        if n == 1 {
            return Ok(Self {
                n,
                scale,
                sqrt_eig: alloc::vec![1.0],
                fallback: None,
            });
        }
        // any circulant of size >= 2(n-1) embeds fGn with nonnegative spectrum
        let m = (2 * (n - 1)).next_power_of_two();
        let row: Vec<f64> = (0..m)
            .map(|j| fgn_autocovariance(hurst, j.min(m - j) as i64))
            .collect();
        let eig: Vec<f64> = fft_real(&row).iter().map(|z| z.re).collect();
        let max = eig.iter().copied().fold(0.0, f64::max);
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -EMBEDDING_TOL * max {
            log::warn!("circulant embedding not PSD (min eigenvalue {min:e}); using Toeplitz factorization");
            let acov: Vec<f64> = (0..n).map(|k| fgn_autocovariance(hurst, k as i64)).collect();
            return Ok(Self {
                n,
                scale,
                sqrt_eig: Vec::new(),
                fallback: Some(ToeplitzSampler::new(&acov)?),
            });
        }
        let sqrt_eig = eig.iter().map(|&l| libm::sqrt(l.max(0.0) / m as f64)).collect();
        Ok(Self {
            n,
            scale,
            sqrt_eig,
            fallback: None,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn method(&self) -> FgnMethod {
        if self.fallback.is_some() {
            FgnMethod::Toeplitz
        } else {
            FgnMethod::CirculantEmbedding
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        if let Some(t) = &self.fallback {
            return t.sample(rng).into_iter().map(|x| x * self.scale).collect();
        }
        if self.n == 1 {
            let z: f64 = rng.sample(StandardNormal);
            return alloc::vec![z * self.scale];
        }
        let mut w: Vec<Complex64> = self
            .sqrt_eig
            .iter()
            .map(|&s| {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                Complex64::new(a, b) * s
            })
            .collect();
        fft(&mut w);
        w.truncate(self.n);
        w.into_iter().map(|z| z.re * self.scale).collect()
    }
}

/// `n` increments of fBm over steps `dt`, drawn with the caller's generator.
pub fn simulate_fgn<R: Rng + ?Sized>(hurst: f64, n: usize, dt: f64, rng: &mut R) -> Result<Vec<f64>> {
    Ok(FgnGenerator::new(hurst, n, dt)?.sample(rng))
}

/// [`simulate_fgn`] with a ChaCha8 generator seeded from `seed`.
pub fn simulate_fgn_seeded(hurst: f64, n: usize, dt: f64, seed: u64) -> Result<Vec<f64>> {
    simulate_fgn(hurst, n, dt, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `f(u) = sum_i c_i 1_{(s_i, s_{i+1}]}(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    levels: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() || breakpoints.len() != levels.len() + 1 {
            return Err(Error::InvalidArgument("need m >= 1 levels and m + 1 breakpoints".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("breakpoints must be finite and strictly ascending".into()));
        }
        Ok(Self { breakpoints, levels })
    }

    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::new(alloc::vec![a, b], alloc::vec![1.0])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// `a f + b g` on the merged partition.
    pub fn combine(&self, a: f64, other: &StepFunction, b: f64) -> StepFunction {
        let mut pts: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let levels = pts
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                a * self.value_at(mid) + b * other.value_at(mid)
            })
            .collect();
        StepFunction {
            breakpoints: pts,
            levels,
        }
    }

    pub fn value_at(&self, u: f64) -> f64 {
        for (w, c) in self.breakpoints.windows(2).zip(&self.levels) {
            if u > w[0] && u <= w[1] {
                return *c;
            }
        }
        0.0
    }
}

/// Covariance of `int f dB^H` and `int g dB^H` as the double sum over
/// increments of fBm.
pub fn integral_cov_direct(f: &StepFunction, g: &StepFunction, hurst: f64) -> f64 {
    let e = 2.0 * hurst;
    let (s, t) = (&f.breakpoints, &g.breakpoints);
    let mut total = 0.0;
    for (i, ci) in f.levels.iter().enumerate() {
        for (j, dj) in g.levels.iter().enumerate() {
            total += ci
                * dj
                * (abs_pow(s[i + 1] - t[j], e) + abs_pow(s[i] - t[j + 1], e)
                    - abs_pow(t[j + 1] - s[i + 1], e)
                    - abs_pow(s[i] - t[j], e));
        }
    }
    0.5 * total
}

/// Covariance through the kernel representations: for `H < 1/2`
/// `H f(s) int |s-v|^{2H-1} sgn(s-v) g(v) dv + H int int g(v) |u-v|^{2H-1} sgn(v-u) df(u) dv`
/// with `s` the right end of the support of `f`; for `H > 1/2`
/// `H(2H-1) int int f(u) g(v) |u-v|^{2H-2} du dv`. Each piece uses the
/// antiderivative of the kernel, so the result is exact.
pub fn integral_cov_kernel(f: &StepFunction, g: &StepFunction, hurst: f64) -> Result<f64> {
    if !(hurst > 0.0 && hurst < 1.0) || hurst == 0.5 {
        return Err(Error::InvalidArgument("kernel covariance requires 0 < H < 1, H != 1/2".into()));
    }
    let e = 2.0 * hurst;
    let (s, t) = (&f.breakpoints, &g.breakpoints);
    let (c, d) = (&f.levels, &g.levels);
    if hurst < 0.5 {
        // H int_a^b |x - v|^{2H-1} sgn(x - v) dv = (|x - a|^{2H} - |x - b|^{2H}) / 2
        let against = |x: f64| -> f64 {
            d.iter()
                .enumerate()
                .map(|(j, dj)| dj * (abs_pow(x - t[j], e) - abs_pow(x - t[j + 1], e)))
                .sum::<f64>()
        };
        let end = s[s.len() - 1];
        let boundary = 0.5 * c[c.len() - 1] * against(end);
        // jumps of f at s_0..s_{m-1}; the integrand sign is reversed
        let mut jumps = 0.0;
        let mut prev = 0.0;
        for (i, ci) in c.iter().enumerate() {
            jumps -= 0.5 * (ci - prev) * against(s[i]);
            prev = *ci;
        }
        Ok(boundary + jumps)
    } else {
        // H(2H-1) int_{box} |u-v|^{2H-2} = mixed second difference of |x|^{2H}/2
        let mut total = 0.0;
        for (i, ci) in c.iter().enumerate() {
            for (j, dj) in d.iter().enumerate() {
                let box_integral = -0.5
                    * (abs_pow(s[i + 1] - t[j + 1], e) - abs_pow(s[i + 1] - t[j], e) - abs_pow(s[i] - t[j + 1], e)
                        + abs_pow(s[i] - t[j], e));
                total += ci * dj * box_integral;
            }
        }
        Ok(total)
    }
}
