//! Dense polynomials with real coefficients: Horner evaluation and
//! simultaneous root finding.

use alloc::vec::Vec;
use num_complex::Complex64;

/// Evaluates `c[0] + c[1] z + ... + c[n] z^n` and its derivative.
pub fn horner_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        deriv = deriv * z + value;
        value = value * z + c;
    }
    (value, deriv)
}

pub fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Roots of the monic polynomial `z^n + c[n-1] z^(n-1) + ... + c[0]`
/// given the ascending coefficients `c[0..n]` (leading one omitted).
///
/// Aberth-Ehrlich iteration followed by Newton polishing. Conjugate pairs are
/// symmetrized so that the result is exactly closed under conjugation.
pub fn monic_roots(lower: &[f64]) -> Vec<Complex64> {
    let n = lower.len();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.extend_from_slice(lower);
    coeffs.push(1.0);

    let mut roots = match n {
        0 => Vec::new(),
        1 => alloc::vec![Complex64::new(-lower[0], 0.0)],
        2 => quadratic(lower[1], lower[0]),
        _ => aberth(&coeffs),
    };
    if n > 2 {
        for z in roots.iter_mut() {
            for _ in 0..3 {
                let (v, d) = horner_with_derivative(&coeffs, *z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = v / d;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                *z -= step;
            }
        }
    }
    symmetrize_conjugates(&mut roots);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// Roots of z^2 + b z + c without cancellation.
fn quadratic(b: f64, c: f64) -> Vec<Complex64> {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let s = libm::sqrt(disc);
        let q = -0.5 * (b + libm::copysign(s, b));
        if q == 0.0 {
            return alloc::vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        alloc::vec![Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -0.5 * b;
        let im = 0.5 * libm::sqrt(-disc);
        alloc::vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    // Cauchy bound on root moduli.
    let radius = 1.0 + coeffs[..n].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let start = 0.5 * radius.min(1.0 + libm::pow(coeffs[0].abs(), 1.0 / n as f64));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(start.max(0.5), theta)
        })
        .collect();

    for _ in 0..1000 {
        let mut max_step = 0.0_f64;
        for k in 0..n {
            let (v, d) = horner_with_derivative(coeffs, z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    repulsion += (z[k] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

fn symmetrize_conjugates(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut used = alloc::vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let zi = roots[i];
        if zi.im.abs() <= 1e-12 * (1.0 + zi.norm()) {
            roots[i] = Complex64::new(zi.re, 0.0);
            used[i] = true;
            continue;
        }
        // nearest unused root to conj(zi) in the opposite half-plane
        let mut best: Option<(usize, f64)> = None;
        for j in (i + 1)..n {
            if used[j] || roots[j].im * zi.im >= 0.0 {
                continue;
            }
            let d = (roots[j] - zi.conj()).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        used[i] = true;
        if let Some((j, _)) = best {
            let re = 0.5 * (zi.re + roots[j].re);
            let im = 0.5 * (zi.im.abs() + roots[j].im.abs());
            roots[i] = Complex64::new(re, im);
            roots[j] = Complex64::new(re, -im);
            used[j] = true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn horner_matches_direct_expansion() {
        // 2 + 3z + z^2 at z = i
        let (v, d) = horner_with_derivative(&[2.0, 3.0, 1.0], c(0.0, 1.0));
        assert!((v - c(1.0, 3.0)).norm() < 1e-15);
        assert!((d - c(3.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn quadratic_roots() {
        let r = monic_roots(&[2.0, 3.0]);
        assert!((r[0] - c(-2.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cubic_with_complex_pair() {
        // (z + 1)(z^2 + z + 4.25) -> -1, -0.5 +- 2i
        let r = monic_roots(&[4.25, 5.25, 2.0]);
        assert_eq!(r.len(), 3);
        let expected = [c(-1.0, 0.0), c(-0.5, -2.0), c(-0.5, 2.0)];
        for (a, b) in r.iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
        assert_eq!(r[1], r[2].conj());
    }

    #[test]
    fn quintic_residuals_small() {
        let lower = [3.0, -1.0, 4.0, 1.0, 5.0];
        let mut full = lower.to_vec();
        full.push(1.0);
        for z in monic_roots(&lower) {
            assert!(horner(&full, z).norm() < 1e-10 * (1.0 + z.norm().powi(5)));
        }
    }
}
