//! Marginal probability densities of the Landau Wigner functions: generating
//! functions, closed-form 1D and 2D densities, and the integral equalities
//! that follow from comparing them.
//!
//! All densities integrate to `h^2`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::{PhasePoint, PhysParams};
use crate::quadrature::{default_order, gauss_hermite, integrate_1d, integrate_nd};
use crate::specfun::{a_coeff, hermite, hermite_sequence, laguerre, log_factorial};
use crate::states::{wigner_eval, WignerLabel};

/// Largest quantum number accepted by [`marginal_1d`].
pub const MAX_MARGINAL_LABEL: usize = 150;

/// Above this value of `n + l` the Hermite sum cancels too strongly and the
/// density is evaluated as a positive convolution instead.
pub const HERMITE_SUM_MAX: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MarginalAxis {
    Q1,
    Q2,
    P1,
    P2,
}

impl MarginalAxis {
    pub const ALL: [MarginalAxis; 4] = [MarginalAxis::Q1, MarginalAxis::Q2, MarginalAxis::P1, MarginalAxis::P2];

    /// `gamma` for positions, `hbar / gamma` for momenta.
    pub fn scale(self, params: &PhysParams) -> f64 {
        match self {
            MarginalAxis::Q1 | MarginalAxis::Q2 => params.gamma(),
            MarginalAxis::P1 | MarginalAxis::P2 => params.momentum_scale(),
        }
    }

    /// `N_q = pi^{3/2} hbar^2 / gamma` or `N_p = pi^{3/2} hbar gamma`.
    pub fn norm(self, params: &PhysParams) -> f64 {
        match self {
            MarginalAxis::Q1 | MarginalAxis::Q2 => n_q(params),
            MarginalAxis::P1 | MarginalAxis::P2 => n_p(params),
        }
    }

    /// Position of this coordinate in `PhasePoint::to_array`.
    pub fn index(self) -> usize {
        match self {
            MarginalAxis::Q1 => 0,
            MarginalAxis::Q2 => 1,
            MarginalAxis::P1 => 2,
            MarginalAxis::P2 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MarginalAxis::Q1 => "q1",
            MarginalAxis::Q2 => "q2",
            MarginalAxis::P1 => "p1",
            MarginalAxis::P2 => "p2",
        }
    }
}

impl fmt::Display for MarginalAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MarginalAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q1" => Ok(MarginalAxis::Q1),
            "q2" => Ok(MarginalAxis::Q2),
            "p1" => Ok(MarginalAxis::P1),
            "p2" => Ok(MarginalAxis::P2),
            _ => Err(Error::Parse(format!("unknown axis '{s}'"))),
        }
    }
}

pub fn n_q(params: &PhysParams) -> f64 {
    PI.powf(1.5) * params.hbar() * params.hbar() / params.gamma()
}

pub fn n_p(params: &PhysParams) -> f64 {
    PI.powf(1.5) * params.hbar() * params.gamma()
}

/// A coordinate plane; `x` and `y` are distinct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Plane2D {
    x: MarginalAxis,
    y: MarginalAxis,
}

impl Plane2D {
    pub const Q1Q2: Plane2D = Plane2D { x: MarginalAxis::Q1, y: MarginalAxis::Q2 };
    pub const Q1P2: Plane2D = Plane2D { x: MarginalAxis::Q1, y: MarginalAxis::P2 };

    pub fn new(x: MarginalAxis, y: MarginalAxis) -> Result<Self> {
        if x == y {
            return Err(Error::Parse(format!("plane needs two distinct axes, got {x},{y}")));
        }
        Ok(Self { x, y })
    }

    pub fn axes(&self) -> (MarginalAxis, MarginalAxis) {
        (self.x, self.y)
    }

    /// True if a closed form exists for this plane.
    pub fn has_closed_form(&self) -> bool {
        let mut s = [self.x, self.y];
        s.sort();
        s == [MarginalAxis::Q1, MarginalAxis::Q2] || s == [MarginalAxis::Q1, MarginalAxis::P2]
    }
}

impl fmt::Display for Plane2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl FromStr for Plane2D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("expected 'axis,axis', got '{s}'")))?;
        Plane2D::new(a.parse()?, b.parse()?)
    }
}

/// `M(q1, q2) = \int G dp1 dp2`, with `Z = (q1 + i q2)/gamma`:
/// `(pi hbar^2/gamma^2) e^{-alpha1 alpha2 - beta1 beta2} e^{i(alpha1 Zbar - alpha2 Z) - i(beta1 Z - beta2 Zbar)} e^{-Z Zbar}`.
pub fn generating_m(alpha: [C64; 2], beta: [C64; 2], q1: f64, q2: f64, params: &PhysParams) -> C64 {
    let g = params.gamma();
    let z = C64::new(q1, q2) / g;
    let zb = z.conj();
    let i = C64::i();
    let expo = -alpha[0] * alpha[1] - beta[0] * beta[1] + i * (alpha[0] * zb - alpha[1] * z)
        - i * (beta[0] * z - beta[1] * zb)
        - z * zb;
    expo.exp() * (PI * params.hbar() * params.hbar() / (g * g))
}

/// One-dimensional generating function `Q(x) = N e^{alpha.beta} e^{-(x/scale - s)^2}`
/// with the axis-specific shift `s`.
pub fn generating_q(axis: MarginalAxis, alpha: [C64; 2], beta: [C64; 2], x: f64, params: &PhysParams) -> C64 {
    let u = x / axis.scale(params);
    let i = C64::i();
    let (a1, a2, b1, b2) = (alpha[0], alpha[1], beta[0], beta[1]);
    let shift = match axis {
        MarginalAxis::Q1 => i * 0.5 * (a1 - a2 - b1 + b2),
        MarginalAxis::P1 => 0.5 * (a1 - a2 + b1 - b2),
        MarginalAxis::Q2 => 0.5 * (a1 + a2 + b1 + b2),
        MarginalAxis::P2 => -i * 0.5 * (a1 + a2 - b1 - b2),
    };
    let w = C64::new(u, 0.0) - shift;
    (a1 * b1 + a2 * b2 - w * w).exp() * axis.norm(params)
}

/// Coefficients `c_m` of `sum_{j,k} A_{nljk} H_{2(n+l-j-k)} = sum_m c_m H_{2m}`.
pub fn hermite_sum_coefficients(n: usize, l: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + l + 1];
    for j in 0..=n {
        for k in 0..=l {
            c[n + l - j - k] += a_coeff(n, l, j, k).expect("indices in range");
        }
    }
    c
}

/// `sum_{j,k} A_{nljk} H_{2(n+l-j-k)}(u)`, accumulated from the highest degree down.
pub fn hermite_sum(n: usize, l: usize, u: f64) -> f64 {
    let c = hermite_sum_coefficients(n, l);
    let h = hermite_sequence(2 * (n + l), u);
    (0..=n + l).rev().fold(0.0, |acc, m| acc + c[m] * h[2 * m])
}

// psi_0..psi_max at x, psi_k = H_k e^{-x^2/2} / sqrt(2^k k! sqrt(pi)).
fn hermite_functions(max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if max >= 1 {
        out.push(SQRT_2 * x * out[0]);
    }
    for k in 1..max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

// f(u) = 4 sqrt(pi) \int psi_n((u-v)/sqrt2)^2 psi_l((u+v)/sqrt2)^2 dv by the
// trapezoidal rule, which converges spectrally for this entire integrand.
fn convolution_density(n: usize, l: usize, u: f64) -> f64 {
    let reach = |k: usize| SQRT_2 * ((2 * k + 1) as f64).sqrt();
    let half_width = u.abs() + SQRT_2 * ((2 * n.max(l) + 1) as f64).sqrt() + 14.0;
    let band = reach(n) + reach(l);
    let h = PI / (band + 12.0);
    let steps = (half_width / h).ceil() as i64;
    let mut terms = Vec::with_capacity(2 * steps as usize + 1);
    for i in -steps..=steps {
        let v = i as f64 * h;
        let a = hermite_functions(n, (u - v) / SQRT_2)[n];
        let b = hermite_functions(l, (u + v) / SQRT_2)[l];
        terms.push(a * a * b * b);
    }
    4.0 * PI.sqrt() * h * crate::quadrature::pairwise_sum(&terms)
}

/// Dimensionless density `f(u)` with `P_nl(x) = N_axis f(x / scale)`.
pub fn marginal_shape(n: usize, l: usize, u: f64) -> Result<f64> {
    if n > MAX_MARGINAL_LABEL || l > MAX_MARGINAL_LABEL {
        return Err(Error::DegreeOverflow { degree: n.max(l), max: MAX_MARGINAL_LABEL });
    }
    // symmetric in the labels and even in u; canonical order keeps both exact
    let (n, l) = (n.max(l), n.min(l));
    let u = u.abs();
    if n + l <= HERMITE_SUM_MAX {
        Ok((-u * u).exp() * hermite_sum(n, l, u))
    } else {
        Ok(convolution_density(n, l, u))
    }
}

/// `P_nl(x) = N_axis e^{-u^2} sum_{j,k} A_{nljk} H_{2(n+l-j-k)}(u)`, `u = x / scale`.
pub fn marginal_1d(n: usize, l: usize, axis: MarginalAxis, x: f64, params: &PhysParams) -> Result<f64> {
    Ok(axis.norm(params) * marginal_shape(n, l, x / axis.scale(params))?)
}

/// Two-dimensional marginal density at the plane coordinates of `pt`.
///
/// The planes `(q1, q2)` and `(q1, p2)` use closed forms; every other plane
/// integrates the Wigner function over the remaining two coordinates.
pub fn marginal_2d(n: usize, l: usize, plane: Plane2D, pt: &PhasePoint, params: &PhysParams) -> Result<f64> {
    let (x, y) = plane.axes();
    let mut s = [x, y];
    s.sort();
    let hbar = params.hbar();
    let g = params.gamma();
    if s == [MarginalAxis::Q1, MarginalAxis::Q2] {
        // P_nl = P_ln at this level, so the Laguerre form is used with n >= l.
        let (big, small) = if n >= l { (n, l) } else { (l, n) };
        let rho2 = pt.rho_sq(params);
        let norm = 4.0 * PI * (log_factorial(small) - log_factorial(big)).exp();
        let lag = laguerre(small, (big - small) as i64, rho2)?;
        return Ok(norm * (hbar / g).powi(2) * rho2.powi((big - small) as i32) * (-rho2).exp() * lag * lag);
    }
    if s == [MarginalAxis::Q1, MarginalAxis::P2] {
        let (tp, tm) = pt.tau(params);
        let ln_norm = (4.0 * PI).ln() - log_factorial(n) - log_factorial(l) - ((n + l) as f64) * 2f64.ln();
        let hn = hermite(n, tm / SQRT_2)?;
        let hl = hermite(l, tp / SQRT_2)?;
        return Ok(ln_norm.exp() * hbar * (-0.5 * (tp * tp + tm * tm)).exp() * hn * hn * hl * hl);
    }
    marginal_2d_quadrature(n, l, plane, pt, params, default_order(n, l))
}

/// `\int W_nl` over the two coordinates not in `plane`, by Gauss–Hermite.
pub fn marginal_2d_quadrature(
    n: usize,
    l: usize,
    plane: Plane2D,
    pt: &PhasePoint,
    params: &PhysParams,
    order: usize,
) -> Result<f64> {
    let rule = gauss_hermite(order)?;
    let (x, y) = plane.axes();
    let rest: Vec<MarginalAxis> = MarginalAxis::ALL.iter().copied().filter(|a| *a != x && *a != y).collect();
    let scales: Vec<f64> = rest.iter().map(|a| a.scale(params)).collect();
    let base = pt.to_array();
    let label = WignerLabel::new(n, l);
    Ok(integrate_nd(
        |v: &[f64]| {
            let mut c = base;
            c[rest[0].index()] = v[0];
            c[rest[1].index()] = v[1];
            wigner_eval(label, &PhasePoint::from_array(c), params)
        },
        &scales,
        &rule,
    ))
}

/// Residuals of the two integral equalities at one `q1` sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualityResidual {
    pub q1: f64,
    /// `sum A H_{2(n+l-j-k)}(q1/gamma)`.
    pub lhs: f64,
    /// Right-hand side through the `(q1, q2)` Laguerre density.
    pub rhs_laguerre: f64,
    /// Right-hand side through the `(q1, p2)` Hermite density.
    pub rhs_hermite: f64,
}

impl EqualityResidual {
    pub fn residual_laguerre(&self) -> f64 {
        (self.lhs - self.rhs_laguerre).abs()
    }

    pub fn residual_hermite(&self) -> f64 {
        (self.lhs - self.rhs_hermite).abs()
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_laguerre().max(self.residual_hermite())
    }
}

/// Evaluates both integral forms of the Hermite sum at each `q1` sample by
/// Gauss–Hermite quadrature of order `n + l + 8` (at least 16), which is exact
/// for the polynomial integrands.
pub fn verify_integral_equality(n: usize, l: usize, q1_samples: &[f64], params: &PhysParams) -> Result<Vec<EqualityResidual>> {
    if n.max(l) > MAX_MARGINAL_LABEL {
        return Err(Error::DegreeOverflow { degree: n.max(l), max: MAX_MARGINAL_LABEL });
    }
    let order = default_order(n, l);
    let rule = gauss_hermite(order)?;
    let g = params.gamma();
    let hbar = params.hbar();
    let nq = n_q(params);
    let (big, small) = if n >= l { (n, l) } else { (l, n) };
    let n_nl = 4.0 * PI * (log_factorial(small) - log_factorial(big)).exp();
    let ln_np = (4.0 * PI).ln() - log_factorial(n) - log_factorial(l) - ((n + l) as f64) * 2f64.ln();
    let n_prime = ln_np.exp();
    q1_samples
        .iter()
        .map(|&q1| {
            let y = q1 / g;
            let lhs = hermite_sum(n, l, y);
            // \int rho^{2(n-l)} e^{-q2^2/gamma^2} [L_l^{n-l}(rho^2)]^2 dq2
            let lag_int: f64 = integrate_1d(
                |q2: f64| {
                    let rho2 = y * y + (q2 / g).powi(2);
                    let lag = laguerre(small, (big - small) as i64, rho2).expect("degree within cap");
                    rho2.powi((big - small) as i32) * (-(q2 / g).powi(2)).exp() * lag * lag
                },
                g,
                &rule,
            );
            // \int e^{-gamma^2 p2^2/hbar^2} H_n^2(tau_-/sqrt2) H_l^2(tau_+/sqrt2) dp2
            let s = params.momentum_scale();
            let her_int: f64 = integrate_1d(
                |p2: f64| {
                    let v = p2 / s;
                    let hn = hermite(n, (y - v) / SQRT_2).expect("degree within cap");
                    let hl = hermite(l, (y + v) / SQRT_2).expect("degree within cap");
                    (-v * v).exp() * hn * hn * hl * hl
                },
                s,
                &rule,
            );
            Ok(EqualityResidual {
                q1,
                lhs,
                rhs_laguerre: n_nl / nq * (hbar / g).powi(2) * lag_int,
                rhs_hermite: n_prime / nq * hbar * her_int,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::taylor_coefficient;
    use crate::states::generating_g;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn low_lying_q1_densities() {
        let p = PhysParams::default();
        let nq = n_q(&p);
        let g = p.gamma();
        let cases: [(usize, usize, fn(f64) -> f64); 5] = [
            (0, 0, |_| 4.0),
            (1, 0, |y| 2.0 * (2.0 * y * y + 1.0)),
            (1, 1, |y| 4.0 * y.powi(4) - 4.0 * y * y + 3.0),
            (2, 0, |y| 0.5 * (4.0 * y.powi(4) + 4.0 * y * y + 3.0)),
            (2, 1, |y| 0.25 * (8.0 * y.powi(6) - 20.0 * y.powi(4) + 18.0 * y * y + 7.0)),
        ];
        for (n, l, poly) in cases {
            for y in [0.0, 0.5, 1.0, 2.0] {
                let v = marginal_1d(n, l, MarginalAxis::Q1, y * g, &p).unwrap();
                let expect = nq * (-y * y).exp() * poly(y);
                assert!((v - expect).abs() < 1e-13 * nq, "P{n}{l}({y}): {v} vs {expect}");
            }
        }
        assert!((marginal_1d(1, 1, MarginalAxis::Q1, 0.0, &p).unwrap() - 3.0 * nq).abs() < 1e-13 * nq);
    }

    #[test]
    fn symmetric_in_labels_and_even() {
        let p = PhysParams::new(0.9, 1.4, 0.7).unwrap();
        for (n, l) in [(2, 1), (3, 0), (4, 2)] {
            for axis in MarginalAxis::ALL {
                for i in 0..21 {
                    let x = (i as f64 - 10.0) * 0.3 * axis.scale(&p);
                    let a = marginal_1d(n, l, axis, x, &p).unwrap();
                    assert!((a - marginal_1d(l, n, axis, x, &p).unwrap()).abs() <= 1e-12 * axis.norm(&p));
                    assert_eq!(a, marginal_1d(n, l, axis, -x, &p).unwrap());
                }
            }
        }
    }

    #[test]
    fn convolution_matches_hermite_sum() {
        for (n, l) in [(0, 0), (3, 2), (6, 6), (9, 3), (12, 0)] {
            for u in [0.0f64, 0.4, 1.3, 2.9, 4.5] {
                let a = (-u * u).exp() * hermite_sum(n, l, u);
                let b = convolution_density(n, l, u);
                assert!((a - b).abs() < 1e-11, "({n},{l}) u={u}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn large_labels_stay_normalized_and_positive() {
        for (n, l) in [(40, 7), (150, 0), (150, 150)] {
            // trapezoid in u over a wide window
            let h = 0.05;
            let mut sum = 0.0;
            let mut i = 0i64;
            loop {
                let u = i as f64 * h;
                let f = marginal_shape(n, l, u).unwrap();
                assert!(f >= 0.0, "({n},{l}) u={u}");
                sum += if i == 0 { f } else { 2.0 * f };
                if u > 30.0 {
                    break;
                }
                i += 1;
            }
            let integral = sum * h;
            assert!((integral - 4.0 * PI.sqrt()).abs() < 1e-9, "({n},{l}): {integral}");
        }
        assert!(marginal_shape(151, 0, 0.0).is_err());
    }

    #[test]
    fn generating_m_is_integral_of_g() {
        let p = PhysParams::new(1.2, 0.8, 1.1).unwrap();
        let rule = gauss_hermite(40).unwrap();
        let s = p.momentum_scale();
        let samples = [
            ([c(0.0, 0.0); 2], [c(0.0, 0.0); 2]),
            ([c(0.3, -0.1), c(0.2, 0.4)], [c(-0.1, 0.2), c(0.5, 0.0)]),
            ([c(0.0, 0.6), c(-0.3, 0.0)], [c(0.2, 0.2), c(0.1, -0.4)]),
        ];
        for (alpha, beta) in samples {
            for (q1, q2) in [(0.0, 0.0), (0.7, -1.1), (-1.5, 0.4)] {
                let v: C64 = integrate_nd(
                    |x: &[f64]| generating_g(alpha[0], beta[0], alpha[1], beta[1], &PhasePoint::new(q1, q2, x[0], x[1]), &p),
                    &[s, s],
                    &rule,
                );
                let m = generating_m(alpha, beta, q1, q2, &p);
                assert!((v - m).norm() < 1e-9 * m.norm().max(1.0), "{v} vs {m}");
            }
        }
    }

    #[test]
    fn generating_q_consistency() {
        let p = PhysParams::new(0.7, 1.3, 1.9).unwrap();
        let rule = gauss_hermite(40).unwrap();
        let alpha = [c(0.2, -0.3), c(-0.4, 0.1)];
        let beta = [c(0.1, 0.5), c(0.3, 0.2)];
        for q1 in [-0.8, 0.0, 1.2] {
            let v: C64 = integrate_1d(|q2: f64| generating_m(alpha, beta, q1, q2, &p), p.gamma(), &rule);
            let q = generating_q(MarginalAxis::Q1, alpha, beta, q1, &p);
            assert!((v - q).norm() < 1e-9 * q.norm().max(1.0));
        }
        let zero = [c(0.0, 0.0); 2];
        let x = 0.37;
        let q = generating_q(MarginalAxis::P2, zero, zero, x, &p);
        let expect = n_p(&p) * (-(x / p.momentum_scale()).powi(2)).exp();
        assert!((q - c(expect, 0.0)).norm() < 1e-15 * expect);
        let q = generating_q(MarginalAxis::Q1, zero, zero, x, &p);
        let m0 = marginal_1d(0, 0, MarginalAxis::Q1, x, &p).unwrap();
        assert!((q * 4.0 - c(m0, 0.0)).norm() < 1e-14 * m0);
    }

    #[test]
    fn generating_q_derivatives_give_densities() {
        let p = PhysParams::new(1.3, 0.6, 0.8).unwrap();
        for axis in MarginalAxis::ALL {
            for (n, l) in [(0, 0), (1, 0), (2, 1), (1, 2), (2, 2)] {
                for x in [0.0, 0.6, -1.4] {
                    let xs = x * axis.scale(&p);
                    let f = |z: &[C64]| generating_q(axis, [z[0], z[2]], [z[1], z[3]], xs, &p);
                    let coef = taylor_coefficient(f, &[c(0.0, 0.0); 4], &[n, n, l, l], 0.7, 16);
                    let v = coef * 4.0 * (log_factorial(n) + log_factorial(l)).exp();
                    let expect = marginal_1d(n, l, axis, xs, &p).unwrap();
                    assert!((v - c(expect, 0.0)).norm() < 1e-6 * axis.norm(&p), "{axis} ({n},{l}) x={x}");
                }
            }
        }
    }

    #[test]
    fn generating_m_derivative_gives_p10() {
        let p = PhysParams::default();
        for (q1, q2) in [(0.3, -0.5), (1.1, 0.2)] {
            let f = |z: &[C64]| generating_m([z[0], z[2]], [z[1], z[3]], q1, q2, &p);
            let coef = taylor_coefficient(f, &[c(0.0, 0.0); 4], &[1, 1, 0, 0], 0.7, 16);
            let expect = marginal_2d(1, 0, Plane2D::Q1Q2, &PhasePoint::new(q1, q2, 0.0, 0.0), &p).unwrap();
            assert!((coef * 4.0 - c(expect, 0.0)).norm() < 1e-7);
        }
        let origin = marginal_2d(0, 0, Plane2D::Q1Q2, &PhasePoint::ORIGIN, &p).unwrap();
        assert!((origin - 4.0 * PI / p.gamma().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn closed_planes_match_quadrature() {
        let p = PhysParams::new(0.8, 1.1, 1.3).unwrap();
        let pts = [PhasePoint::new(0.2, -0.6, 0.0, 0.9), PhasePoint::new(-1.0, 0.4, 0.0, -0.3), PhasePoint::new(0.5, 1.2, 0.0, 0.1)];
        for (n, l) in [(2, 1), (1, 2), (0, 3), (3, 3)] {
            for plane in [Plane2D::Q1Q2, Plane2D::Q1P2] {
                for pt in &pts {
                    let closed = marginal_2d(n, l, plane, pt, &p).unwrap();
                    let quad = marginal_2d_quadrature(n, l, plane, pt, &p, 24).unwrap();
                    assert!((closed - quad).abs() < 1e-9, "({n},{l}) {plane}: {closed} vs {quad}");
                }
            }
        }
    }

    #[test]
    fn equalities_hold() {
        let p = PhysParams::default();
        let r = verify_integral_equality(0, 0, &[0.0], &p).unwrap();
        assert!((r[0].lhs - 4.0).abs() < 1e-15 && r[0].max_residual() < 1e-10);
        for (n, l, ys) in [(2, 1, vec![0.0, 0.7, 1.4]), (3, 3, vec![0.0]), (1, 3, vec![0.5])] {
            let qs: Vec<f64> = ys.iter().map(|y| y * p.gamma()).collect();
            for r in verify_integral_equality(n, l, &qs, &p).unwrap() {
                assert!(r.max_residual() < 1e-8, "({n},{l}) {r:?}");
            }
        }
    }
}
