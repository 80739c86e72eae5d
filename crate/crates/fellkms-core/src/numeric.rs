//! Numerical kernels: cyclic Jacobi for symmetric/Hermitian eigenvalues,
//! power iteration for Perron vectors of irreducible nonnegative matrices,
//! and exact integer characteristic polynomials for small matrices.

use crate::intlinalg::IMat;
use crate::{CoreError, Scalar};
use num_complex::Complex;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps, ascending.
pub fn symmetric_eigenvalues<F: Scalar>(mat: &[Vec<F>]) -> Vec<F> {
    let n = mat.len();
    let mut a: Vec<Vec<F>> = mat.to_vec();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let eps = F::epsilon() * F::real(16.0);
    for _sweep in 0..100 {
        let mut off = F::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[p][q] * a[p][q];
            }
        }
        let scale: F = (0..n).map(|i| a[i][i] * a[i][i]).sum::<F>() + off + F::one();
        if off <= eps * eps * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= eps * scale.sqrt() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (F::real(2.0) * a[p][q]);
                let t = {
                    let s = if theta >= F::zero() { F::one() } else { -F::one() };
                    s / (theta.abs() + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<F> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    eig
}

/// Eigenvalues of a complex Hermitian matrix, ascending, via the standard
/// real embedding `[[Re, −Im], [Im, Re]]` (each eigenvalue appears twice; the
/// doubled list is returned).
pub fn hermitian_eigenvalues<F: Scalar>(h: &[Vec<Complex<F>>]) -> Vec<F> {
    let n = h.len();
    let mut real = vec![vec![F::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            real[i][j] = h[i][j].re;
            real[i][j + n] = -h[i][j].im;
            real[i + n][j] = h[i][j].im;
            real[i + n][j + n] = h[i][j].re;
        }
    }
    symmetric_eigenvalues(&real)
}

pub fn hermitian_min_eigenvalue<F: Scalar>(h: &[Vec<Complex<F>>]) -> F {
    hermitian_eigenvalues(h)
        .first()
        .copied()
        .unwrap_or_else(F::zero)
}

/// Perron vector of an irreducible nonnegative matrix: power iteration on
/// `I + A` (the shift removes periodicity), 1-norm normalised.
pub fn perron_vector<F: Scalar>(
    a: &[Vec<F>],
    tol: F,
    max_iter: usize,
) -> Result<Vec<F>, CoreError> {
    let n = a.len();
    if n == 0 {
        return Err(CoreError::precondition("empty matrix"));
    }
    let mut x = vec![F::one() / F::real(n as f64); n];
    for _ in 0..max_iter {
        let mut y = vec![F::zero(); n];
        for i in 0..n {
            y[i] = x[i];
            for j in 0..n {
                y[i] = y[i] + a[i][j] * x[j];
            }
        }
        let norm: F = y.iter().map(|v| v.abs()).sum();
        if norm == F::zero() {
            return Err(CoreError::precondition("matrix annihilates positive cone"));
        }
        for v in &mut y {
            *v = *v / norm;
        }
        let delta = x
            .iter()
            .zip(&y)
            .map(|(u, v)| (*u - *v).abs())
            .fold(F::zero(), F::max);
        x = y;
        if delta < tol {
            if x.iter().any(|&v| v <= F::zero()) {
                return Err(CoreError::precondition(
                    "Perron vector not strictly positive; matrix not irreducible",
                ));
            }
            return Ok(x);
        }
    }
    Err(CoreError::precondition(
        "power iteration did not converge within the iteration cap",
    ))
}

/// Monic characteristic polynomial of an integer matrix, exact
/// (Faddeev–LeVerrier). Coefficients descending: `p(x) = Σ c[k] x^{n−k}`.
pub fn char_poly(a: &IMat) -> Vec<i128> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let trace = |m: &IMat| (0..n).map(|i| m[(i, i)]).sum::<i128>();
    let mut coeffs = vec![1i128];
    let mut m = a.clone();
    for k in 1..=n {
        let c = -trace(&m) / (k as i128);
        coeffs.push(c);
        if k == n {
            break;
        }
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] += c;
        }
        m = a.mul(&shifted);
    }
    coeffs
}

pub fn eval_poly<F: Scalar>(coeffs: &[i128], x: F) -> F {
    coeffs
        .iter()
        .fold(F::zero(), |acc, &c| acc * x + F::real(c as f64))
}

pub fn eval_poly_derivative<F: Scalar>(coeffs: &[i128], x: F) -> F {
    let n = coeffs.len() - 1;
    coeffs[..n]
        .iter()
        .enumerate()
        .fold(F::zero(), |acc, (k, &c)| {
            acc * x + F::real(c as f64) * F::real((n - k) as f64)
        })
}

/// Polish a spectral-radius estimate against the exact characteristic
/// polynomial by Newton steps (the radius of a nonnegative matrix is the
/// largest real root, simple for irreducible matrices).
pub fn polish_root<F: Scalar>(coeffs: &[i128], mut x: F) -> F {
    for _ in 0..50 {
        let p = eval_poly(coeffs, x);
        let dp = eval_poly_derivative(coeffs, x);
        if dp == F::zero() {
            break;
        }
        let step = p / dp;
        x = x - step;
        if step.abs() <= x.abs() * F::epsilon() * F::real(4.0) {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn jacobi_on_known_symmetric_matrix() {
        // eigenvalues of [[2,1],[1,2]] are 1 and 3
        let eig = symmetric_eigenvalues(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert_abs_diff_eq!(eig[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_embedding_doubles_spectrum() {
        // [[0, -i],[i, 0]] has eigenvalues ±1
        let h = vec![
            vec![Complex::new(0.0, 0.0), Complex::new(0.0, -1.0)],
            vec![Complex::new(0.0, 1.0), Complex::new(0.0, 0.0)],
        ];
        let eig = hermitian_eigenvalues(&h);
        assert_eq!(eig.len(), 4);
        assert_abs_diff_eq!(eig[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[3], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hermitian_min_eigenvalue(&h), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn perron_of_two_cycle() {
        let x = perron_vector(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1e-14, 1_000_000).unwrap();
        assert_abs_diff_eq!(x[0], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(x[1], 0.5, epsilon = 1e-10);
    }

    #[test]
    fn fibonacci_char_poly_and_radius() {
        let a = IMat::from_rows(vec![vec![1, 1], vec![1, 0]]);
        assert_eq!(char_poly(&a), vec![1, -1, -1]); // x² − x − 1
        let phi = polish_root(&char_poly(&a), 1.6);
        assert_abs_diff_eq!(phi, (1.0 + 5.0_f64.sqrt()) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn generic_scalar_lane_works_at_f32() {
        let eig = symmetric_eigenvalues(&[vec![2.0_f32, 1.0], vec![1.0, 2.0]]);
        assert!((eig[0] - 1.0).abs() < 1e-5);
        let x = perron_vector(&[vec![0.0_f32, 1.0], vec![1.0, 0.0]], 1e-6, 100_000).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-5);
    }
}
