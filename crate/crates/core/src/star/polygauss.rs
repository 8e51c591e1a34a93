//! Polynomial-times-Gaussian symbols and the truncating bidifferential star
//! product on them. This is the independent oracle for the Fock-coefficient
//! engine: it works directly with the exponential of derivative operators in
//! the `a, abar, b, bbar` variables and knows nothing about matrix units.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::ModeCoords;
use crate::specfun::log_factorial;
use crate::star::word::{Gen, StarPolynomial};

/// Variable order for monomial exponents.
pub const VAR_A: usize = 0;
pub const VAR_ABAR: usize = 1;
pub const VAR_B: usize = 2;
pub const VAR_BBAR: usize = 3;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Monomials `a^e0 abar^e1 b^e2 bbar^e3`.
pub type Poly = BTreeMap<[u32; 4], C64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianFlag {
    None,
    /// A factor `exp(-2(a abar + b bbar))`.
    Standard,
}

/// `poly(a, abar, b, bbar) * exp(flag + mu_a a + nu_a abar + mu_b b + nu_b bbar)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGauss {
    pub poly: Poly,
    pub gaussian: GaussianFlag,
    /// `[mu_a, nu_a, mu_b, nu_b]`, multiplying `[a, abar, b, bbar]`.
    pub linear_exp: [C64; 4],
}

impl PolyGauss {
    pub fn polynomial(poly: Poly) -> Self {
        Self { poly, gaussian: GaussianFlag::None, linear_exp: [ZERO; 4] }
    }

    pub fn monomial(c: C64, exps: [u32; 4]) -> Self {
        Self::polynomial(BTreeMap::from([(exps, c)]))
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(c, [0; 4])
    }

    /// `exp(-2(a abar + b bbar))` times `poly`.
    pub fn gaussian(poly: Poly) -> Self {
        Self { poly, gaussian: GaussianFlag::Standard, linear_exp: [ZERO; 4] }
    }

    pub fn with_linear_exp(mut self, lin: [C64; 4]) -> Self {
        self.linear_exp = lin;
        self
    }

    /// True if there is no exponential factor at all.
    pub fn is_pure_polynomial(&self) -> bool {
        self.gaussian == GaussianFlag::None && self.linear_exp.iter().all(|c| *c == ZERO)
    }

    /// Highest power of each variable.
    pub fn degrees(&self) -> [u32; 4] {
        let mut d = [0; 4];
        for e in self.poly.keys() {
            for v in 0..4 {
                d[v] = d[v].max(e[v]);
            }
        }
        d
    }

    pub fn total_degree(&self) -> u32 {
        self.poly.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Evaluates with all four variables independent.
    pub fn eval_vars(&self, v: [C64; 4]) -> C64 {
        let mut p = ZERO;
        for (e, c) in &self.poly {
            let mut t = *c;
            for k in 0..4 {
                if e[k] > 0 {
                    t *= v[k].powu(e[k]);
                }
            }
            p += t;
        }
        let mut expo = self.linear_exp.iter().zip(v.iter()).map(|(m, x)| m * x).fold(ZERO, |a, b| a + b);
        if self.gaussian == GaussianFlag::Standard {
            expo -= 2.0 * (v[VAR_A] * v[VAR_ABAR] + v[VAR_B] * v[VAR_BBAR]);
        }
        p * expo.exp()
    }

    /// Evaluates on phase space, where `abar` is the conjugate of `a`.
    pub fn eval(&self, mc: &ModeCoords) -> C64 {
        self.eval_vars([mc.a, mc.a_bar(), mc.b, mc.b_bar()])
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> PolyGauss {
        let mut poly = Poly::new();
        let mut push = |e: [u32; 4], c: C64| *poly.entry(e).or_insert(ZERO) += c;
        // derivative of the exponent: -2 (partner variable) + linear coefficient
        let partner = var ^ 1;
        for (e, c) in &self.poly {
            if e[var] > 0 {
                let mut e2 = *e;
                e2[var] -= 1;
                push(e2, c * e[var] as f64);
            }
            if self.linear_exp[var] != ZERO {
                push(*e, c * self.linear_exp[var]);
            }
            if self.gaussian == GaussianFlag::Standard {
                let mut e2 = *e;
                e2[partner] += 1;
                push(e2, c * -2.0);
            }
        }
        poly.retain(|_, c| *c != ZERO);
        PolyGauss { poly, gaussian: self.gaussian, linear_exp: self.linear_exp }
    }

    fn mul(&self, other: &PolyGauss) -> PolyGauss {
        debug_assert!(self.is_pure_polynomial() || other.is_pure_polynomial());
        let mut poly = Poly::new();
        for (e1, c1) in &self.poly {
            for (e2, c2) in &other.poly {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                *poly.entry(e).or_insert(ZERO) += c1 * c2;
            }
        }
        poly.retain(|_, c| *c != ZERO);
        let (gaussian, linear_exp) = if self.is_pure_polynomial() {
            (other.gaussian, other.linear_exp)
        } else {
            (self.gaussian, self.linear_exp)
        };
        PolyGauss { poly, gaussian, linear_exp }
    }

    pub fn add(&self, other: &PolyGauss) -> Result<PolyGauss> {
        if self.gaussian != other.gaussian || self.linear_exp != other.linear_exp {
            return Err(Error::Unsupported("sum of symbols with different exponents".into()));
        }
        let mut poly = self.poly.clone();
        for (e, c) in &other.poly {
            *poly.entry(*e).or_insert(ZERO) += c;
        }
        poly.retain(|_, c| *c != ZERO);
        Ok(PolyGauss { poly, gaussian: self.gaussian, linear_exp: self.linear_exp })
    }

    pub fn is_zero(&self) -> bool {
        self.poly.values().all(|c| *c == ZERO)
    }
}

// All mixed derivatives d_0^i d_1^j d_2^k d_3^l of `f` (variable order given
// by `vars`) up to the given per-variable bounds and total order.
fn derivative_table(f: &PolyGauss, vars: [usize; 4], bounds: [u32; 4], total: u32) -> BTreeMap<[u32; 4], PolyGauss> {
    let mut table = BTreeMap::new();
    let mut d0 = f.clone();
    for i in 0..=bounds[0] {
        let mut d1 = d0.clone();
        for j in 0..=bounds[1] {
            let mut d2 = d1.clone();
            for k in 0..=bounds[2] {
                let mut d3 = d2.clone();
                for l in 0..=bounds[3] {
                    if i + j + k + l > total {
                        break;
                    }
                    table.insert([i, j, k, l], d3.clone());
                    d3 = d3.derivative(vars[3]);
                }
                d2 = d2.derivative(vars[2]);
            }
            d1 = d1.derivative(vars[1]);
        }
        d0 = d0.derivative(vars[0]);
    }
    table
}

/// The function represented by a star polynomial, built by folding the
/// oracle product over each word.
pub fn polynomial_of(p: &StarPolynomial) -> Result<PolyGauss> {
    let mut acc = PolyGauss::polynomial(Poly::new());
    for (c, word) in p.terms() {
        let mut w = PolyGauss::constant(*c);
        for &g in word {
            let e = match g {
                Gen::A => [1, 0, 0, 0],
                Gen::ABar => [0, 1, 0, 0],
                Gen::B => [0, 0, 1, 0],
                Gen::BBar => [0, 0, 0, 1],
            };
            let letter = PolyGauss::monomial(C64::new(1.0, 0.0), e);
            let k = w.total_degree().min(1);
            w = oracle_star_polygauss(&w, &letter, k)?;
        }
        acc = acc.add(&w)?;
    }
    Ok(acc)
}

/// `W_nl = 4 (-1)^{n+l} L_n(4 a abar) L_l(4 b bbar) e^{-2(a abar + b bbar)}`.
pub fn wigner_symbol(n: usize, l: usize) -> PolyGauss {
    let pa = poly_in_norm(&laguerre_coefficients(n), (VAR_A, VAR_ABAR));
    let pb = poly_in_norm(&laguerre_coefficients(l), (VAR_B, VAR_BBAR));
    let sign = if (n + l).is_multiple_of(2) { 4.0 } else { -4.0 };
    let poly = poly_mul(&pa, &pb).into_iter().map(|(e, c)| (e, c * sign)).collect();
    PolyGauss::gaussian(poly)
}

/// Star product by the bidifferential series
/// `exp[1/2 (<d_a d_abar> + <d_b d_bbar> - <d_abar d_a> - <d_bbar d_b>)]`,
/// truncated at total derivative order `truncation`.
///
/// At least one operand must be a pure polynomial, which makes the series
/// finite; `truncation` must reach that operand's total degree.
pub fn oracle_star_polygauss(f: &PolyGauss, g: &PolyGauss, truncation: u32) -> Result<PolyGauss> {
    let f_poly = f.is_pure_polynomial();
    let g_poly = g.is_pure_polynomial();
    if !f_poly && !g_poly {
        return Err(Error::NonTerminatingSeries);
    }
    let need = match (f_poly, g_poly) {
        (true, true) => f.total_degree().min(g.total_degree()),
        (true, false) => f.total_degree(),
        _ => g.total_degree(),
    };
    if truncation < need {
        return Err(Error::Unsupported(format!(
            "truncation {truncation} below polynomial degree {need}"
        )));
    }
    // Term (i, j, k, l): coefficient (1/2)^i (-1/2)^j (1/2)^k (-1/2)^l / (i! j! k! l!)
    // times (d_a^i d_abar^j d_b^k d_bbar^l f)(d_abar^i d_a^j d_bbar^k d_b^l g).
    let df = f.degrees();
    let dg = g.degrees();
    let big = truncation;
    let bounds = match (f_poly, g_poly) {
        (true, true) => [df[0].min(dg[1]), df[1].min(dg[0]), df[2].min(dg[3]), df[3].min(dg[2])],
        (true, false) => [df[0], df[1], df[2], df[3]],
        _ => [dg[1], dg[0], dg[3], dg[2]],
    }
    .map(|b| b.min(big));
    let left = derivative_table(f, [VAR_A, VAR_ABAR, VAR_B, VAR_BBAR], bounds, big);
    let right = derivative_table(g, [VAR_ABAR, VAR_A, VAR_BBAR, VAR_B], bounds, big);
    let template = if f_poly { g } else { f };
    let mut acc = PolyGauss { poly: Poly::new(), gaussian: template.gaussian, linear_exp: template.linear_exp };
    for (idx, lf) in &left {
        if lf.is_zero() {
            continue;
        }
        let Some(rg) = right.get(idx) else { continue };
        if rg.is_zero() {
            continue;
        }
        let [i, j, k, l] = *idx;
        let sign = if (j + l) % 2 == 0 { 1.0 } else { -1.0 };
        let order = (i + j + k + l) as i32;
        let denom = log_factorial(i as usize) + log_factorial(j as usize) + log_factorial(k as usize) + log_factorial(l as usize);
        let coef = sign * 0.5f64.powi(order) * (-denom).exp();
        let mut term = lf.mul(rg);
        for c in term.poly.values_mut() {
            *c *= coef;
        }
        for (e, c) in term.poly {
            *acc.poly.entry(e).or_insert(ZERO) += c;
        }
    }
    acc.poly.retain(|_, c| *c != ZERO);
    Ok(acc)
}

/// `(a abar)^k` expanded from a polynomial in `x = 4 a abar` given by its
/// coefficients; used to build Laguerre-type Wigner symbols.
pub fn poly_in_norm(coeffs_in_x: &[f64], var_pair: (usize, usize)) -> Poly {
    let mut out = Poly::new();
    for (k, c) in coeffs_in_x.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let mut e = [0u32; 4];
        e[var_pair.0] = k as u32;
        e[var_pair.1] = k as u32;
        out.insert(e, C64::new(c * 4f64.powi(k as i32), 0.0));
    }
    out
}

/// Monomial coefficients of `L_n(x)`: `sum_k (-1)^k C(n,k) x^k / k!`.
pub fn laguerre_coefficients(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let ln = log_factorial(n) - log_factorial(k) - log_factorial(n - k) - log_factorial(k);
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            s * ln.exp()
        })
        .collect()
}

/// Product of two polynomials (no exponential factors).
pub fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    PolyGauss::polynomial(p.clone()).mul(&PolyGauss::polynomial(q.clone())).poly
}
