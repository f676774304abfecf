//! Derivative-free Nelder-Mead simplex minimization.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadConfig {
    /// Stop when the simplex value spread falls below `f_tol (1 + |f_best|)`.
    pub f_tol: f64,
    pub max_iterations: usize,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            f_tol: 1e-8,
            max_iterations: 1000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` with initial edge lengths `step`. Non-finite
/// values are treated as `+inf`, so infeasible points are simply rejected.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], step: &[f64], cfg: &NelderMeadConfig) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += step[i];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x)).collect();
    let mut iterations = 0;
    let mut converged = false;
    let along = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> { c.iter().zip(w).map(|(a, b)| a + t * (b - a)).collect() };
    while iterations < cfg.max_iterations {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let (best, worst) = (values[0], values[dim]);
        if best.is_finite() && worst - best <= cfg.f_tol * (1.0 + best.abs()) {
            converged = true;
            break;
        }
        iterations += 1;
        let mut centroid = alloc::vec![0.0; dim];
        for x in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / dim as f64;
            }
        }
        let reflected = along(&centroid, &simplex[dim], -1.0);
        let fr = eval(&reflected);
        if fr < values[0] {
            let expanded = along(&centroid, &simplex[dim], -2.0);
            let fe = eval(&expanded);
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
            continue;
        }
        if fr < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[dim] {
            let c = along(&centroid, &simplex[dim], -0.5);
            let v = eval(&c);
            (c, v.min(f64::INFINITY))
        } else {
            let c = along(&centroid, &simplex[dim], 0.5);
            let v = eval(&c);
            (c, v)
        };
        if fc < values[dim].min(fr) {
            simplex[dim] = contracted;
            values[dim] = fc;
            continue;
        }
        for i in 1..=dim {
            simplex[i] = along(&simplex[0], &simplex[i], 0.5);
            values[i] = eval(&simplex[i]);
        }
    }
    let (i, value) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    NelderMeadResult {
        x: simplex[i].clone(),
        value,
        iterations,
        evaluations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let cfg = NelderMeadConfig {
            f_tol: 1e-14,
            max_iterations: 5000,
        };
        let r = nelder_mead(f, &[-1.2, 1.0], &[0.5, 0.5], &cfg);
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4, "{:?}", r.x);
    }

    #[test]
    fn respects_infeasible_region() {
        // minimum of (x-2)^2 restricted to x < 1
        let f = |x: &[f64]| if x[0] < 1.0 { (x[0] - 2.0).powi(2) } else { f64::NAN };
        let r = nelder_mead(f, &[0.0], &[0.3], &NelderMeadConfig::default());
        assert!(r.x[0] < 1.0 && r.x[0] > 0.99, "{:?}", r.x);
    }
}
