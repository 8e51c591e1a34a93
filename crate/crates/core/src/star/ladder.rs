//! Single-mode ladder matrices in the matrix-unit basis and the displacement
//! function `D = exp(alpha abar - conj(alpha) a)`.
//!
//! Left star multiplication by `a` acts on the row index of a coefficient
//! matrix exactly as the annihilation matrix acts on a column vector, so every
//! operator identity below is an ordinary matrix identity.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::specfun::{laguerre, log_factorial};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// `A[m-1, m] = sqrt(m)`.
pub fn annihilation_matrix(n: usize) -> Array2<C64> {
    let mut a = Array2::zeros((n, n));
    for m in 1..n {
        a[[m - 1, m]] = C64::new((m as f64).sqrt(), 0.0);
    }
    a
}

/// `A^dagger[m+1, m] = sqrt(m+1)`.
pub fn creation_matrix(n: usize) -> Array2<C64> {
    annihilation_matrix(n).t().to_owned()
}

fn one_norm(m: &Array2<C64>) -> f64 {
    m.columns().into_iter().map(|c| c.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring of a Taylor polynomial.
pub fn expm(x: &Array2<C64>) -> Array2<C64> {
    let n = x.nrows();
    let norm = one_norm(x);
    let mut s = 0u32;
    while norm / 2f64.powi(s as i32) > 0.5 {
        s += 1;
    }
    let scaled = x.mapv(|v| v / 2f64.powi(s as i32));
    let mut result = Array2::<C64>::eye(n);
    let mut term = Array2::<C64>::eye(n);
    for k in 1..=30 {
        term = term.dot(&scaled).mapv(|v| v / k as f64);
        let size = term.iter().map(|v| v.norm()).fold(0.0, f64::max);
        result += &term;
        if size < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = result.dot(&result);
    }
    result
}

/// Displacement matrix `exp(alpha A^dagger - conj(alpha) A)` at cutoff `n`.
pub fn displacement_matrix(alpha: C64, n: usize) -> Array2<C64> {
    if alpha == ZERO {
        return Array2::eye(n);
    }
    let gen = creation_matrix(n).mapv(|v| v * alpha) - annihilation_matrix(n).mapv(|v| v * alpha.conj());
    expm(&gen)
}

/// `<m| D(alpha) |n>` from the Laguerre closed form.
pub fn displacement_closed_form(alpha: C64, m: usize, n: usize) -> C64 {
    let x = alpha.norm_sqr();
    let damp = (-0.5 * x).exp();
    if m >= n {
        let norm = (0.5 * (log_factorial(n) - log_factorial(m))).exp();
        let lag = laguerre(n, (m - n) as i64, x).expect("degree within cap");
        alpha.powu((m - n) as u32) * (norm * damp * lag)
    } else {
        let norm = (0.5 * (log_factorial(m) - log_factorial(n))).exp();
        let lag = laguerre(m, (n - m) as i64, x).expect("degree within cap");
        (-alpha.conj()).powu((n - m) as u32) * (norm * damp * lag)
    }
}

/// Weight of column `n` of the exact displacement lying at or above `cutoff`,
/// i.e. `1 - sum_{m < cutoff} |<m|D|n>|^2`, accumulated from the top down.
pub fn column_tail_weight(alpha: C64, n: usize, cutoff: usize) -> f64 {
    // Sum the tail directly well beyond the cutoff to avoid cancellation.
    let x = alpha.norm_sqr();
    let upper = cutoff + 200 + (4.0 * x) as usize;
    if n + 1 >= crate::specfun::MAX_DEGREE || upper >= crate::specfun::MAX_DEGREE {
        let head: f64 = (0..cutoff).map(|m| displacement_closed_form(alpha, m, n).norm_sqr()).sum();
        return (1.0 - head).max(0.0);
    }
    (cutoff..upper).rev().map(|m| displacement_closed_form(alpha, m, n).norm_sqr()).sum()
}
