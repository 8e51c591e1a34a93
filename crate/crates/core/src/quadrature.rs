//! Gauss–Hermite rules and tensor-product integration over R^d, d <= 4.
//!
//! Nodes start from the eigenvalues of the symmetric Jacobi matrix and are
//! polished by Newton iteration on the normalized Hermite recurrence.
//! Reductions use pairwise summation with a fixed tree, so results do not
//! depend on how many threads evaluated the integrand.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 200;

/// Minimum order used for state integrals.
pub const MIN_STATE_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    // weight * exp(node^2), for integrands without the Gaussian factored out
    scaled_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for `\int e^{-x^2} g(x) dx`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights for `\int f(x) dx` with `f` Gaussian-decaying.
    pub fn scaled_weights(&self) -> &[f64] {
        &self.scaled_weights
    }
}

/// Order used for integrals of states with quantum numbers `(n, l)`.
pub fn default_order(n: usize, l: usize) -> usize {
    (n + l + 8).max(MIN_STATE_ORDER)
}

// psi_{n-1}(x) and psi_n(x) of the normalized Hermite functions
// psi_k = H_k e^{-x^2/2} / sqrt(2^k k! sqrt(pi)).
fn hermite_functions(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

pub fn gauss_hermite(order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::QuadratureOrder(order));
    }
    let n = order;
    let jacobi = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut guesses: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    guesses.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    // Polish the non-negative half and mirror it.
    let half: Vec<(f64, f64)> = guesses[n / 2..]
        .iter()
        .map(|&g| {
            let mut x = if n % 2 == 1 && g.abs() < 1e-8 { 0.0 } else { g };
            if x != 0.0 {
                for _ in 0..100 {
                    let (pm1, p) = hermite_functions(n, x);
                    let dx = p / ((2.0 * n as f64).sqrt() * pm1);
                    x -= dx;
                    if dx.abs() <= 1e-15 * x.abs() {
                        break;
                    }
                }
            }
            let (pm1, _) = hermite_functions(n, x);
            let scaled = 1.0 / (n as f64 * pm1 * pm1);
            (x, scaled)
        })
        .collect();

    let mut nodes = Vec::with_capacity(n);
    let mut scaled_weights = Vec::with_capacity(n);
    let skip_center = n % 2 == 1;
    for &(x, w) in half.iter().rev() {
        if skip_center && x == 0.0 {
            continue;
        }
        nodes.push(-x);
        scaled_weights.push(w);
    }
    for &(x, w) in &half {
        nodes.push(x);
        scaled_weights.push(w);
    }
    let weights = nodes
        .iter()
        .zip(&scaled_weights)
        .map(|(x, w)| w * (-x * x).exp())
        .collect();
    Ok(QuadratureRule { nodes, weights, scaled_weights })
}

/// Values that can be accumulated by the quadrature.
pub trait QuadValue: Copy + Send + Sync + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
}

/// Pairwise sum with a topology fixed by the slice length.
pub fn pairwise_sum<T: QuadValue>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

fn integrate_axis<T, F>(f: &F, scales: &[f64], rule: &QuadratureRule, x: &mut [f64], axis: usize) -> T
where
    T: QuadValue,
    F: Fn(&[f64]) -> T + Sync,
{
    let mut terms = Vec::with_capacity(rule.order());
    for (t, w) in rule.nodes.iter().zip(&rule.scaled_weights) {
        x[axis] = scales[axis] * t;
        let v = if axis + 1 == scales.len() {
            f(x)
        } else {
            integrate_axis(f, scales, rule, x, axis + 1)
        };
        terms.push(v * (w * scales[axis]));
    }
    pairwise_sum(&terms)
}

/// Tensor-product Gauss–Hermite estimate of `\int_{R^d} f`, `d = scales.len()`.
///
/// Axis `i` is sampled at `scales[i] * t` for the rule nodes `t`, so the rule
/// is exact when `f` is a polynomial times `exp(-sum x_i^2 / scales_i^2)`.
pub fn integrate_nd<T, F>(f: F, scales: &[f64], rule: &QuadratureRule) -> T
where
    T: QuadValue,
    F: Fn(&[f64]) -> T + Sync,
{
    let dims = scales.len();
    assert!((1..=4).contains(&dims), "integrate_nd supports 1 to 4 dimensions");
    let outer: Vec<T> = rule
        .nodes
        .par_iter()
        .zip(rule.scaled_weights.par_iter())
        .map(|(t, w)| {
            let mut x = [0.0; 4];
            x[0] = scales[0] * t;
            let v = if dims == 1 {
                f(&x[..1])
            } else {
                integrate_axis(&f, scales, rule, &mut x[..dims], 1)
            };
            v * (w * scales[0])
        })
        .collect();
    pairwise_sum(&outer)
}

pub fn integrate_1d<T, F>(f: F, scale: f64, rule: &QuadratureRule) -> T
where
    T: QuadValue,
    F: Fn(f64) -> T + Sync,
{
    integrate_nd(|x: &[f64]| f(x[0]), &[scale], rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::log_factorial;

    fn moment(k: usize) -> f64 {
        // \int x^k e^{-x^2} = (k-1)!! sqrt(pi) / 2^{k/2} for even k
        if k % 2 == 1 {
            return 0.0;
        }
        let m = k / 2;
        (log_factorial(k) - log_factorial(m)).exp() * PI.sqrt() / 4f64.powi(m as i32)
    }

    #[test]
    fn small_orders() {
        let r1 = gauss_hermite(1).unwrap();
        assert_eq!(r1.nodes(), &[0.0]);
        assert!((r1.weights()[0] - PI.sqrt()).abs() < 1e-15);
        let r2 = gauss_hermite(2).unwrap();
        let s = 0.5f64.sqrt();
        assert!((r2.nodes()[0] + s).abs() < 1e-15 && (r2.nodes()[1] - s).abs() < 1e-15);
        for w in r2.weights() {
            assert!((w - PI.sqrt() / 2.0).abs() < 1e-15);
        }
        let x2: f64 = r2.nodes().iter().zip(r2.weights()).map(|(x, w)| w * x * x).sum();
        assert!((x2 - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!(gauss_hermite(0).is_err());
        assert!(gauss_hermite(201).is_err());
    }

    #[test]
    fn rule_invariants() {
        for order in [1usize, 2, 3, 7, 8, 16, 33, 64, 120, 200] {
            let r = gauss_hermite(order).unwrap();
            assert_eq!(r.order(), order);
            let sum: f64 = r.weights().iter().sum();
            assert!((sum - PI.sqrt()).abs() < 1e-12 * PI.sqrt(), "order {order}: {sum}");
            for i in 0..order {
                assert!((r.nodes()[i] + r.nodes()[order - 1 - i]).abs() < 1e-12);
                assert!(r.weights()[i] > 0.0);
                if i > 0 {
                    assert!(r.nodes()[i] > r.nodes()[i - 1]);
                }
            }
            if order <= 40 {
                for k in 0..(2 * order) {
                    let v: f64 = r.nodes().iter().zip(r.weights()).map(|(x, w)| w * x.powi(k as i32)).sum();
                    let exact = moment(k);
                    let scale = moment(k - k % 2);
                    assert!((v - exact).abs() <= 1e-12 * scale, "order {order} k {k}: {v} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn order8_x14() {
        let r = gauss_hermite(8).unwrap();
        let v: f64 = r.nodes().iter().zip(r.weights()).map(|(x, w)| w * x.powi(14)).sum();
        let exact = 13.0 * 11.0 * 9.0 * 7.0 * 5.0 * 3.0 * PI.sqrt() / 128.0;
        assert!((v - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn integrate_examples() {
        let r = gauss_hermite(16).unwrap();
        let v: f64 = integrate_1d(|x| (-x * x).exp(), 1.0, &r);
        assert!((v - PI.sqrt()).abs() < 1e-14);
        // anisotropic polynomial-Gaussian in 3D
        let scales = [0.5, 2.0, 1.3];
        let f = |x: &[f64]| {
            let g: f64 = x.iter().zip(&scales).map(|(xi, s)| (xi / s).powi(2)).sum();
            (x[0] * x[0] * x[1].powi(4) + 1.0) * (-g).exp()
        };
        let v: f64 = integrate_nd(f, &scales, &r);
        let vol = scales.iter().product::<f64>() * PI.powf(1.5);
        let exact = vol * (1.0 + 0.5 * 0.25 * 0.75 * 16.0);
        assert!((v - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn reduction_is_deterministic() {
        let r = gauss_hermite(20).unwrap();
        let f = |x: &[f64]| (x[0] * 1.1 + x[1] - 0.3 * x[2] * x[3]).cos() * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3])).exp();
        let a: f64 = integrate_nd(f, &[1.0; 4], &r);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b: f64 = pool.install(|| integrate_nd(f, &[1.0; 4], &r));
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
