//! Polynomials in the canonical coordinates `(q1, q2, p1, p2)` with the
//! dimensionful Moyal product `exp[i hbar/2 sum (<d_q d_p> - <d_p d_q>)]`.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::params::{PhasePoint, PhysParams};
use crate::specfun::log_factorial;

pub const Q1: usize = 0;
pub const Q2: usize = 1;
pub const P1: usize = 2;
pub const P2: usize = 3;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Monomials `q1^e0 q2^e1 p1^e2 p2^e3`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CanonicalPoly {
    terms: BTreeMap<[u32; 4], C64>,
}

impl CanonicalPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(c, [0; 4])
    }

    pub fn monomial(c: C64, exps: [u32; 4]) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    /// The coordinate function with index `Q1`, `Q2`, `P1` or `P2`.
    pub fn coordinate(var: usize) -> Self {
        let mut e = [0; 4];
        e[var] = 1;
        Self::monomial(C64::new(1.0, 0.0), e)
    }

    /// `sum_i c_i x_i` over `(q1, q2, p1, p2)`.
    pub fn linear(coeffs: [f64; 4]) -> Self {
        let mut p = Self::zero();
        for (v, c) in coeffs.iter().enumerate() {
            p = p.add(&Self::coordinate(v).scale(C64::new(*c, 0.0)));
        }
        p
    }

    fn add_term(&mut self, e: [u32; 4], c: C64) {
        let slot = self.terms.entry(e).or_insert(ZERO);
        *slot += c;
        if *slot == ZERO {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> &BTreeMap<[u32; 4], C64> {
        &self.terms
    }

    pub fn coeff(&self, exps: [u32; 4]) -> C64 {
        self.terms.get(&exps).copied().unwrap_or(ZERO)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * k);
        }
        out
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]], c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(C64::new(1.0, 0.0)), |acc, _| acc.mul(self))
    }

    /// `d^k / d x_var^k`.
    pub fn derivative(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[var] < k {
                continue;
            }
            let mut e2 = *e;
            e2[var] -= k;
            let falling = (log_factorial(e[var] as usize) - log_factorial((e[var] - k) as usize)).exp().round();
            out.add_term(e2, c * falling);
        }
        out
    }

    fn derivatives(&self, orders: [u32; 4]) -> Self {
        let mut d = self.clone();
        for (v, k) in orders.iter().enumerate() {
            if *k > 0 {
                d = d.derivative(v, *k);
            }
        }
        d
    }

    pub fn eval(&self, pt: &PhasePoint) -> C64 {
        let x = pt.to_array();
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(&x).map(|(k, xi)| xi.powi(*k as i32)).product::<f64>())
            .fold(ZERO, |a, b| a + b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Moyal product; the series stops at the smaller total degree.
    pub fn canonical_star(&self, other: &Self, hbar: f64) -> Self {
        let top = self.degree().min(other.degree());
        let half = C64::new(0.0, 0.5 * hbar);
        let mut out = Self::zero();
        // (i, j, k, l): d_q1^i d_p1^j d_q2^k d_p2^l on f, partners on g.
        for i in 0..=top {
            for j in 0..=top - i {
                for k in 0..=top - i - j {
                    for l in 0..=top - i - j - k {
                        let fd = self.derivatives(orders(i, j, k, l));
                        if fd.terms.is_empty() {
                            continue;
                        }
                        let gd = other.derivatives(orders(j, i, l, k));
                        if gd.terms.is_empty() {
                            continue;
                        }
                        let n = i + j + k + l;
                        let sign = if (j + l) % 2 == 0 { 1.0 } else { -1.0 };
                        let denom = log_factorial(i as usize) + log_factorial(j as usize) + log_factorial(k as usize) + log_factorial(l as usize);
                        let coef = half.powu(n) * (sign * (-denom).exp());
                        out = out.add(&fd.mul(&gd).scale(coef));
                    }
                }
            }
        }
        out
    }

    pub fn moyal_bracket(&self, other: &Self, hbar: f64) -> Self {
        self.canonical_star(other, hbar).sub(&other.canonical_star(self, hbar))
    }

    /// `sum_j (d_qj f d_pj g - d_pj f d_qj g)`.
    pub fn poisson_bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (q, p) in [(Q1, P1), (Q2, P2)] {
            out = out.add(&self.derivative(q, 1).mul(&other.derivative(p, 1)));
            out = out.sub(&self.derivative(p, 1).mul(&other.derivative(q, 1)));
        }
        out
    }

    /// Gauge-independent kinetic combination `X1 = p2 + m omega q1 / 2`.
    pub fn x1(params: &PhysParams) -> Self {
        Self::linear([0.5 * params.mass() * params.omega(), 0.0, 0.0, 1.0])
    }

    /// `X2 = -p1 + m omega q2 / 2`.
    pub fn x2(params: &PhysParams) -> Self {
        Self::linear([0.0, 0.5 * params.mass() * params.omega(), -1.0, 0.0])
    }
}

// exponents in (q1, q2, p1, p2) order from (q1, p1, q2, p2) derivative counts
fn orders(q1: u32, p1: u32, q2: u32, p2: u32) -> [u32; 4] {
    [q1, q2, p1, p2]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i() -> C64 {
        C64::new(0.0, 1.0)
    }

    #[test]
    fn q_star_p() {
        let hbar = 0.7;
        let q1 = CanonicalPoly::coordinate(Q1);
        let p1 = CanonicalPoly::coordinate(P1);
        let prod = q1.canonical_star(&p1, hbar);
        let expect = q1.mul(&p1).add(&CanonicalPoly::constant(i() * (hbar / 2.0)));
        assert!(prod.max_abs_diff(&expect) < 1e-15);
        let br = q1.moyal_bracket(&p1, hbar);
        assert!(br.max_abs_diff(&CanonicalPoly::constant(i() * hbar)) < 1e-15);
        let classical = br.scale(1.0 / (i() * hbar));
        assert!(classical.max_abs_diff(&q1.poisson_bracket(&p1)) < 1e-15);
        // different pairs commute
        assert!(q1.moyal_bracket(&CanonicalPoly::coordinate(P2), hbar).terms().is_empty());
    }

    #[test]
    fn powers_of_linear_functions() {
        let x = CanonicalPoly::linear([0.3, -1.2, 2.0, 0.5]);
        let mut star_pow = CanonicalPoly::constant(C64::new(1.0, 0.0));
        for k in 1..=5u32 {
            star_pow = star_pow.canonical_star(&x, 1.3);
            assert!(star_pow.max_abs_diff(&x.pow(k)) < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn kinetic_bracket() {
        for (h, m, w) in [(1.0, 1.0, 1.0), (0.5, 2.0, 3.0), (1.7, 0.3, 0.9)] {
            let p = PhysParams::new(h, m, w).unwrap();
            let br = CanonicalPoly::x1(&p).moyal_bracket(&CanonicalPoly::x2(&p), h);
            let expect = CanonicalPoly::constant(-i() * (m * h * w));
            assert!(br.max_abs_diff(&expect) < 1e-14);
        }
    }

    #[test]
    fn quadratic_bracket() {
        // only the first-order term survives in the bracket
        let hbar = 1.1;
        let q2 = CanonicalPoly::coordinate(Q1).pow(2);
        let p2 = CanonicalPoly::coordinate(P1).pow(2);
        let br = q2.moyal_bracket(&p2, hbar);
        let expect = CanonicalPoly::monomial(i() * (4.0 * hbar), [1, 0, 1, 0]);
        assert!(br.max_abs_diff(&expect) < 1e-14, "{br:?}");
        let pt = PhasePoint::new(0.4, -0.2, 1.5, 0.3);
        assert!((br.eval(&pt) - i() * (4.0 * hbar * 0.4 * 1.5)).norm() < 1e-14);
    }
}
