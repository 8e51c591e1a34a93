//! Numerical differentiation of holomorphic functions by contour sampling.
//!
//! The Taylor coefficient of order `k` about `z0` is the trapezoidal rule on
//! a circle of radius `r`, which converges geometrically for entire
//! integrands. Aliasing from order `k + nodes` is suppressed by `r^nodes`.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Coefficient of `(z - z0)^order` in the Taylor expansion of `f`.
pub fn taylor_coefficient_1d<F>(f: F, z0: C64, order: usize, radius: f64, nodes: usize) -> C64
where
    F: Fn(C64) -> C64,
{
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..nodes {
        let theta = 2.0 * PI * j as f64 / nodes as f64;
        let u = C64::from_polar(1.0, theta);
        acc += f(z0 + radius * u) * u.powi(-(order as i32));
    }
    acc / (nodes as f64 * radius.powi(order as i32))
}

/// Mixed Taylor coefficient of `prod_i (z_i - z0_i)^orders[i]`.
///
/// Cost is `nodes^dims` evaluations of `f`.
pub fn taylor_coefficient<F>(f: F, z0: &[C64], orders: &[usize], radius: f64, nodes: usize) -> C64
where
    F: Fn(&[C64]) -> C64,
{
    assert_eq!(z0.len(), orders.len());
    let dims = z0.len();
    let roots: Vec<C64> = (0..nodes)
        .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64))
        .collect();
    let mut idx = vec![0usize; dims];
    let mut z = z0.to_vec();
    let mut acc = C64::new(0.0, 0.0);
    let total = nodes.pow(dims as u32);
    for _ in 0..total {
        let mut phase = C64::new(1.0, 0.0);
        for d in 0..dims {
            let u = roots[idx[d]];
            z[d] = z0[d] + radius * u;
            phase *= u.powi(-(orders[d] as i32));
        }
        acc += f(&z) * phase;
        for i in idx.iter_mut() {
            *i += 1;
            if *i < nodes {
                break;
            }
            *i = 0;
        }
    }
    let order_sum: usize = orders.iter().sum();
    acc / (total as f64 * radius.powi(order_sum as i32))
}

/// `d/dz f` at `z0` for holomorphic `f`.
pub fn complex_derivative<F>(f: F, z0: C64) -> C64
where
    F: Fn(C64) -> C64,
{
    taylor_coefficient_1d(f, z0, 1, 0.25, 32)
}
