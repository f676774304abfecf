//! Small dense linear algebra: matrix exponential and the continuous
//! Lyapunov equation.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
// 1-norm thresholds for degrees 3, 5, 7, 9, 13 (double precision).
const THETA: [f64; 5] = [
    1.495585217958292e-2,
    2.539398330063230e-1,
    9.504178996162932e-1,
    2.097847961257068e0,
    5.371920351148152e0,
];

pub fn norm1(a: &Matrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a diagonal Pade
/// approximant of degree 3 to 13 chosen from the 1-norm.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 1 {
        return Matrix::from_element(1, 1, libm::exp(a[(0, 0)]));
    }
    let ident = Matrix::identity(n, n);
    let nrm = norm1(a);
    if nrm == 0.0 {
        return ident;
    }

    let a2 = a * a;
    let odd_even = |b: &[f64]| -> (Matrix, Matrix) {
        // U = A * sum b[2k+1] A^{2k}, V = sum b[2k] A^{2k}
        let mut pow = ident.clone();
        let mut u = Matrix::zeros(n, n);
        let mut v = Matrix::zeros(n, n);
        for k in 0..b.len() / 2 {
            v += &pow * b[2 * k];
            u += &pow * b[2 * k + 1];
            pow = &pow * &a2;
        }
        (a * u, v)
    };
    let choice = [&PADE3[..], &PADE5[..], &PADE7[..], &PADE9[..]];
    for (deg, coeffs) in choice.iter().enumerate() {
        if nrm <= THETA[deg] {
            let (u, v) = odd_even(coeffs);
            return pade_quotient(&u, &v);
        }
    }

    let s = libm::ceil(libm::log2(nrm / THETA[4])).max(0.0) as i32;
    let scale = libm::ldexp(1.0, -s);
    let a1 = a * scale;
    let a2 = &a1 * &a1;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &ident * b[1];
    let u = &a1 * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &ident * b[0];
    let mut r = pade_quotient(&u, &v);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn pade_quotient(u: &Matrix, v: &Matrix) -> Matrix {
    let p = v + u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .expect("Pade denominator is nonsingular within the norm thresholds")
}

/// Returns `(e^{A dt}, \int_0^{dt} e^{A u} du)` from one exponential of the
/// augmented block matrix `[[A, I], [0, 0]] dt`.
pub fn expm_with_integral(a: &Matrix, dt: f64) -> (Matrix, Matrix) {
    let n = a.nrows();
    let mut big = Matrix::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(&(a * dt));
    for i in 0..n {
        big[(i, n + i)] = dt;
    }
    let e = expm(&big);
    (
        e.view((0, 0), (n, n)).into_owned(),
        e.view((0, n), (n, n)).into_owned(),
    )
}

/// Solves `A X + X A' = -Q` through the Kronecker-sum system
/// `(I (x) A + A (x) I) vec(X) = -vec(Q)`.
pub fn solve_lyapunov(a: &Matrix, q: &Matrix) -> Result<Matrix> {
    let n = a.nrows();
    let ident = Matrix::identity(n, n);
    let kron_sum = ident.kronecker(a) + a.kronecker(&ident);
    let rhs = Vector::from_iterator(n * n, q.iter().map(|x| -x));
    let lu = kron_sum.lu();
    let u = lu.u();
    let diag_max = u.diagonal().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let diag_min = u.diagonal().iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if !(diag_min > 1e-13 * diag_max) {
        return Err(Error::SingularLyapunov);
    }
    let sol = lu.solve(&rhs).ok_or(Error::SingularLyapunov)?;
    let x = Matrix::from_column_slice(n, n, sol.as_slice());
    Ok((&x + x.transpose()) * 0.5)
}

/// Max-abs entry norm.
pub fn norm_max(a: &Matrix) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor_expm(a: &Matrix) -> Matrix {
        // plain Taylor on A / 2^10, then repeated squaring
        let n = a.nrows();
        let small = a / 1024.0;
        let mut term = Matrix::identity(n, n);
        let mut sum = term.clone();
        for k in 1..40 {
            term = &term * &small / k as f64;
            sum += &term;
        }
        for _ in 0..10 {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn expm_matches_taylor_series_across_norm_regimes() {
        let base = Matrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, -2.0, -3.5, -1.2]);
        for scale in [1e-3, 0.1, 0.6, 1.5, 3.0, 6.0] {
            let a = &base * scale;
            let e = expm(&a);
            let t = taylor_expm(&a);
            assert!(norm_max(&(e - &t)) < 1e-12 * norm_max(&t).max(1.0), "scale {scale}");
        }
    }

    #[test]
    fn expm_large_norm_uses_squaring() {
        let a = Matrix::from_row_slice(2, 2, &[0.0, 1.0, -2.0, -3.0]) * 10.0;
        // eigenvalues -10, -20: e^{At} = [[2e^{-10}-e^{-20}, ...]]
        let e = expm(&a);
        let (e1, e2) = (libm::exp(-10.0), libm::exp(-20.0));
        assert!((e[(0, 0)] - (2.0 * e1 - e2)).abs() < 1e-15);
        assert!((e[(0, 1)] - (e1 - e2)).abs() < 1e-15);
    }

    #[test]
    fn integral_block_matches_scalar_formula() {
        let a = Matrix::from_element(1, 1, -2.0);
        let (e, phi) = expm_with_integral(&a, 0.3);
        assert!((e[(0, 0)] - libm::exp(-0.6)).abs() < 1e-15);
        assert!((phi[(0, 0)] - (1.0 - libm::exp(-0.6)) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn scalar_lyapunov() {
        let a = Matrix::from_element(1, 1, -1.0);
        let q = Matrix::from_element(1, 1, 1.0);
        let v = solve_lyapunov(&a, &q).unwrap();
        assert!((v[(0, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn singular_lyapunov_is_reported() {
        let a = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let q = Matrix::identity(2, 2);
        assert_eq!(solve_lyapunov(&a, &q), Err(Error::SingularLyapunov));
    }
}
