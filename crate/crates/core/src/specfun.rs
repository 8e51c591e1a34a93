//! Orthogonal polynomials and combinatorial kernels.
//!
//! Every polynomial is evaluated by its three-term recurrence; expanded
//! monomial coefficients are never formed.

use crate::error::{Error, Result};

/// Largest degree accepted by the public evaluators.
pub const MAX_DEGREE: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyFamily {
    Hermite,
    Laguerre { alpha: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolySpec {
    pub degree: usize,
    pub family: PolyFamily,
}

impl PolySpec {
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.family {
            PolyFamily::Hermite => hermite(self.degree, x),
            PolyFamily::Laguerre { alpha } => laguerre(self.degree, alpha, x),
        }
    }
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: usize, x: f64) -> Result<f64> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeOverflow { degree: n, max: MAX_DEGREE });
    }
    Ok(*hermite_sequence(n, x).last().expect("non-empty"))
}

/// `[H_0(x), ..., H_max(x)]`. Uncapped; callers bound `max` themselves.
pub(crate) fn hermite_sequence(max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(1.0);
    if max >= 1 {
        out.push(2.0 * x);
    }
    for k in 1..max {
        let next = 2.0 * x * out[k] - 2.0 * k as f64 * out[k - 1];
        out.push(next);
    }
    out
}

/// Generalized Laguerre polynomial `L_n^alpha(x)`.
///
/// Negative `alpha = -k` with `0 < k <= n` goes through
/// `L_n^{-k}(x) = (-x)^k (n-k)!/n! L_{n-k}^k(x)`.
pub fn laguerre(n: usize, alpha: i64, x: f64) -> Result<f64> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeOverflow { degree: n, max: MAX_DEGREE });
    }
    if alpha >= 0 {
        return Ok(laguerre_recurrence(n, alpha as f64, x));
    }
    let k = (-alpha) as usize;
    if k > n {
        return Err(Error::InvalidLaguerre { n, alpha });
    }
    let ratio = (log_factorial(n - k) - log_factorial(n)).exp();
    Ok((-x).powi(k as i32) * ratio * laguerre_recurrence(n - k, k as f64, x))
}

fn laguerre_recurrence(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    let t = x + 7.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `ln(n!)`; exact integer factorial up to 20, log-gamma beyond.
pub fn log_factorial(n: usize) -> f64 {
    if n <= 20 {
        let f: u64 = (1..=n as u64).product();
        (f as f64).ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

// Below this label the A coefficients are formed by direct products, which
// avoids the rounding of exp(log(...)).
const DIRECT_A_MAX: usize = 30;

fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Expansion coefficient of the one-dimensional marginal densities:
/// `4 (j! k!)/(n! l!) C(n,j)^2 C(l,k)^2 (1/4)^(n+l-j-k)`, evaluated in log space
/// for large labels.
pub fn a_coeff(n: usize, l: usize, j: usize, k: usize) -> Result<f64> {
    if j > n || k > l {
        return Err(Error::IndexOutOfRange(format!(
            "A coefficient needs j <= n and k <= l, got n={n} l={l} j={j} k={k}"
        )));
    }
    if n.max(l) <= DIRECT_A_MAX {
        // C(n,j)^2 j!/n! = C(n,j)/(n-j)!
        let v = 4.0 * binomial_f64(n, j) * binomial_f64(l, k) / (factorial_f64(n - j) * factorial_f64(l - k));
        return Ok(v * 0.25f64.powi((n + l - j - k) as i32));
    }
    let ln = 4f64.ln() + log_factorial(j) + log_factorial(k) - log_factorial(n) - log_factorial(l)
        + 2.0 * ln_binomial(n, j)
        + 2.0 * ln_binomial(l, k)
        - ((n + l - j - k) as f64) * 4f64.ln();
    Ok(ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::taylor_coefficient_1d;
    use crate::quadrature::gauss_hermite;
    use num_complex::Complex64 as C64;
    use std::f64::consts::PI;

    #[test]
    fn hermite_examples() {
        for x in [-2.0, 0.0, 0.3, 5.0] {
            assert_eq!(hermite(0, x).unwrap(), 1.0);
        }
        assert_eq!(hermite(3, 0.0).unwrap(), 0.0);
        assert_eq!(hermite(2, 1.0).unwrap(), 2.0);
        assert!(matches!(hermite(301, 0.0), Err(Error::DegreeOverflow { .. })));
        assert!(hermite(300, 0.1).is_ok());
    }

    #[test]
    fn laguerre_examples() {
        for (a, x) in [(0, 0.5), (3, 2.0), (-2, 1.0)] {
            if a >= 0 {
                assert_eq!(laguerre(0, a, x).unwrap(), 1.0);
            }
        }
        assert_eq!(laguerre(1, 0, 4.0).unwrap(), -3.0);
        // L_2^{-1}(x) = -x L_1^1(x) / 2, L_1^1 = 2 - x
        for x in [0.5, 1.0, 2.0] {
            let lhs = laguerre(2, -1, x).unwrap();
            assert!((lhs - (-x * (2.0 - x) / 2.0)).abs() < 1e-15);
        }
        assert!(matches!(laguerre(1, -2, 1.0), Err(Error::InvalidLaguerre { .. })));
    }

    /// Brute-force series of `(1+y)^k e^{-x y}`: the coefficient of `y^n` is
    /// `L_n^{k-n}(x)`, which exercises negative upper indices.
    #[test]
    fn laguerre_matches_generating_identity() {
        for k in 0..6usize {
            for x in [0.25f64, 1.0, 3.5] {
                for n in 0..8usize {
                    let mut series = 0.0;
                    for i in 0..=n.min(k) {
                        let binom = (ln_binomial(k, i)).exp();
                        let m = n - i;
                        let e = (-x).powi(m as i32) / (log_factorial(m)).exp();
                        series += binom * e;
                    }
                    let alpha = k as i64 - n as i64;
                    if alpha < 0 && (-alpha) as usize > n {
                        continue;
                    }
                    let val = laguerre(n, alpha, x).unwrap();
                    assert!((val - series).abs() < 1e-12 * series.abs().max(1.0), "n={n} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn a_coeff_examples() {
        for n in 0..10 {
            for l in 0..10 {
                assert!((a_coeff(n, l, n, l).unwrap() - 4.0).abs() < 1e-13);
                if l > 0 {
                    assert!((a_coeff(n, l, n, l - 1).unwrap() - l as f64).abs() < 1e-12);
                }
                if n > 0 {
                    assert!((a_coeff(n, l, n - 1, l).unwrap() - n as f64).abs() < 1e-12);
                }
            }
        }
        assert!((a_coeff(2, 1, 0, 0).unwrap() - 1.0 / 32.0).abs() < 1e-16);
        assert!(a_coeff(150, 150, 0, 0).unwrap().is_finite());
        assert!(a_coeff(150, 150, 75, 75).unwrap().is_finite());
        assert!(a_coeff(2, 1, 3, 0).is_err());
    }

    #[test]
    fn a_coeff_symmetric() {
        for n in 0..7 {
            for l in 0..7 {
                for j in 0..=n {
                    for k in 0..=l {
                        let x = a_coeff(n, l, j, k).unwrap();
                        let y = a_coeff(l, n, k, j).unwrap();
                        assert!((x - y).abs() <= 1e-14 * x.abs());
                    }
                }
            }
        }
    }

    #[test]
    fn log_factorial_examples() {
        assert_eq!(log_factorial(0), 0.0);
        assert!((log_factorial(5) - 120f64.ln()).abs() < 1e-15);
        let big = log_factorial(170);
        assert!(big.is_finite() && big > 700.0);
        let mut acc = log_factorial(20);
        for n in 20..200 {
            assert!((log_factorial(n) - acc).abs() <= 1e-13 * acc, "n={n}");
            acc += ((n + 1) as f64).ln();
        }
    }

    #[test]
    fn hermite_orthogonality() {
        let rule = gauss_hermite(16).unwrap();
        for m in 0..=12 {
            for n in 0..=12 {
                let v: f64 = rule
                    .nodes()
                    .iter()
                    .zip(rule.weights())
                    .map(|(&x, &w)| w * hermite(m, x).unwrap() * hermite(n, x).unwrap())
                    .sum();
                let norm = PI.sqrt() * 2f64.powi(n as i32) * log_factorial(n).exp();
                let expect = if m == n { norm } else { 0.0 };
                assert!((v - expect).abs() <= 1e-9 * norm, "m={m} n={n} {v} vs {expect}");
            }
        }
    }

    /// `H_n(x) = (-1)^n e^{x^2} d^n/dx^n e^{-x^2}` with the derivative
    /// estimated numerically.
    #[test]
    fn hermite_rodrigues() {
        for n in 0..=8usize {
            for i in 0..20 {
                let x = -2.5 + 0.25 * i as f64;
                let c = taylor_coefficient_1d(|z: C64| (-(z * z)).exp(), C64::new(x, 0.0), n, 0.8, 48);
                let deriv = c.re * log_factorial(n).exp();
                let est = (-1f64).powi(n as i32) * (x * x).exp() * deriv;
                let h = hermite(n, x).unwrap();
                assert!((est - h).abs() <= 1e-6 * h.abs().max(1.0), "n={n} x={x}: {est} vs {h}");
            }
        }
    }
}
