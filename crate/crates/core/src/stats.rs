//! Sample statistics used by the Monte Carlo checks.

use alloc::vec::Vec;

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance.
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
}

/// `(1/(n-k)) sum_t (x_t - mu)(x_{t+k} - mu)` for `k = 0..=max_lag`, with the
/// mean `mu` known.
pub fn acf_known_mean(x: &[f64], mu: f64, max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let c: Vec<f64> = x.iter().map(|v| v - mu).collect();
    (0..=max_lag.min(n.saturating_sub(1)))
        .map(|k| (0..n - k).map(|t| c[t] * c[t + k]).sum::<f64>() / (n - k) as f64)
        .collect()
}

fn central_moment(x: &[f64], order: i32) -> f64 {
    let m = mean(x);
    x.iter().map(|v| libm::pow(v - m, order as f64)).sum::<f64>() / x.len() as f64
}

pub fn skewness(x: &[f64]) -> f64 {
    central_moment(x, 3) / libm::pow(central_moment(x, 2), 1.5)
}

pub fn excess_kurtosis(x: &[f64]) -> f64 {
    let m2 = central_moment(x, 2);
    central_moment(x, 4) / (m2 * m2) - 3.0
}

/// Kolmogorov survival function `Q(t) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 t^2}`.
pub fn kolmogorov_survival(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut total = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = libm::exp(-2.0 * kf * kf * t * t);
        total += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * total).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov-Smirnov test with the small-sample corrected
/// asymptotic p-value `Q((sqrt(m) + 0.12 + 0.11/sqrt(m)) D)`, `m = n1 n2/(n1+n2)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n1, n2) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n1 - j as f64 / n2).abs());
    }
    let m = libm::sqrt(n1 * n2 / (n1 + n2));
    KsResult {
        statistic: d,
        p_value: kolmogorov_survival((m + 0.12 + 0.11 / m) * d),
    }
}

/// Least-squares slope of `y` on `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let mx = mean(x);
    let my = mean(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
